//! Exact arithmetic in Z/p^M with valuation tracking.
//!
//! Every scalar carries its own precision exponent: a [`PadicElem`] with
//! precision `m` is a residue known modulo `p^m`.  Binary operations reduce to
//! the smaller of the two precisions, and exact division by `p^e` costs `e`
//! digits.  This makes precision loss auditable instead of silent.
//!
//! Non-integral intermediates are handled by [`ScaledElem`], a pair
//! `(coeff, shift)` representing `coeff * p^shift` with `shift` allowed to be
//! negative.

use crate::error::{Error, Result};

/// A prime together with a working absolute precision exponent.
///
/// All residues over this context fit in a `u64`, so `p^prec` must stay below
/// `2^63` (products are taken through `u128`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PadicCtx {
    p: u64,
    prec: u32,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl PadicCtx {
    pub fn new(p: u64, prec: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::BadInput(format!("{p} is not prime")));
        }
        if prec == 0 {
            return Err(Error::BadInput("precision must be >= 1".into()));
        }
        // p^prec must fit in u64 with headroom for u128 products.
        let mut m: u128 = 1;
        for _ in 0..prec {
            m *= p as u128;
            if m > (1u128 << 63) {
                return Err(Error::BadInput(format!(
                    "p^prec = {p}^{prec} exceeds the u64 residue range"
                )));
            }
        }
        Ok(PadicCtx { p, prec })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.prec)
    }

    /// Same prime, different precision exponent.
    pub fn with_prec(&self, prec: u32) -> PadicCtx {
        PadicCtx { p: self.p, prec }
    }

    pub fn zero(&self) -> PadicElem {
        PadicElem { ctx: *self, residue: 0 }
    }

    pub fn one(&self) -> PadicElem {
        self.from_u64(1)
    }

    pub fn from_u64(&self, n: u64) -> PadicElem {
        PadicElem { ctx: *self, residue: n % self.modulus() }
    }

    pub fn from_i64(&self, n: i64) -> PadicElem {
        let m = self.modulus() as i128;
        let r = ((n as i128 % m) + m) % m;
        PadicElem { ctx: *self, residue: r as u64 }
    }

    /// Reduce a (numerator, denominator) pair; the denominator must be a p-unit.
    pub fn from_ratio(&self, num: i64, den: i64) -> Result<PadicElem> {
        let d = self.from_i64(den);
        if d.valuation() > 0 {
            return Err(Error::NotAUnit);
        }
        Ok(self.from_i64(num).mul(&d.invert()?))
    }
}

/// A residue modulo `p^prec`, where `prec` is this element's own ledger.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PadicElem {
    ctx: PadicCtx,
    residue: u64,
}

impl PadicElem {
    pub fn ctx(&self) -> PadicCtx {
        self.ctx
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn prec(&self) -> u32 {
        self.ctx.prec
    }

    pub fn p(&self) -> u64 {
        self.ctx.p
    }

    pub fn is_zero(&self) -> bool {
        self.residue == 0
    }

    /// v(x) = largest k <= prec with p^k | residue; `prec` itself means
    /// "zero at this precision".
    pub fn valuation(&self) -> u32 {
        if self.residue == 0 {
            return self.ctx.prec;
        }
        let mut v = 0;
        let mut r = self.residue;
        while r % self.ctx.p == 0 {
            r /= self.ctx.p;
            v += 1;
        }
        v
    }

    fn align(&self, other: &PadicElem) -> Result<(u64, u64, PadicCtx)> {
        if self.ctx.p != other.ctx.p {
            return Err(Error::CtxMismatch);
        }
        let prec = self.ctx.prec.min(other.ctx.prec);
        let ctx = self.ctx.with_prec(prec);
        let m = ctx.modulus();
        Ok((self.residue % m, other.residue % m, ctx))
    }

    pub fn add(&self, other: &PadicElem) -> PadicElem {
        let (a, b, ctx) = self.align(other).expect("ctx mismatch in add");
        let m = ctx.modulus() as u128;
        PadicElem { ctx, residue: ((a as u128 + b as u128) % m) as u64 }
    }

    pub fn sub(&self, other: &PadicElem) -> PadicElem {
        let (a, b, ctx) = self.align(other).expect("ctx mismatch in sub");
        let m = ctx.modulus() as u128;
        PadicElem { ctx, residue: ((a as u128 + m - b as u128) % m) as u64 }
    }

    pub fn mul(&self, other: &PadicElem) -> PadicElem {
        let (a, b, ctx) = self.align(other).expect("ctx mismatch in mul");
        let m = ctx.modulus() as u128;
        PadicElem { ctx, residue: ((a as u128 * b as u128) % m) as u64 }
    }

    pub fn neg(&self) -> PadicElem {
        let m = self.ctx.modulus();
        PadicElem { ctx: self.ctx, residue: if self.residue == 0 { 0 } else { m - self.residue } }
    }

    pub fn checked_add(&self, other: &PadicElem) -> Result<PadicElem> {
        self.align(other)?;
        Ok(self.add(other))
    }

    pub fn checked_mul(&self, other: &PadicElem) -> Result<PadicElem> {
        self.align(other)?;
        Ok(self.mul(other))
    }

    /// Extended-Euclid inverse; requires v(x) = 0.
    pub fn invert(&self) -> Result<PadicElem> {
        if self.valuation() > 0 {
            return Err(Error::NotAUnit);
        }
        let m = self.ctx.modulus() as i128;
        let (mut r0, mut r1) = (m, self.residue as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        let inv = ((t0 % m) + m) % m;
        Ok(PadicElem { ctx: self.ctx, residue: inv as u64 })
    }

    pub fn pow(&self, mut e: u64) -> PadicElem {
        let mut base = *self;
        let mut acc = self.ctx.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Multiply by p^e exactly (raises valuation, keeps the ledger).
    pub fn mul_p_pow(&self, e: u32) -> PadicElem {
        let m = self.ctx.modulus() as u128;
        let mut r = self.residue as u128;
        for _ in 0..e {
            r = (r * self.ctx.p as u128) % m;
        }
        PadicElem { ctx: self.ctx, residue: r as u64 }
    }

    /// Divide by p^e; the residue must be divisible, and the ledger drops by e.
    pub fn div_p_pow(&self, e: u32) -> Result<PadicElem> {
        if e == 0 {
            return Ok(*self);
        }
        if e >= self.ctx.prec {
            return Err(Error::PrecisionExhausted(format!(
                "dividing by p^{e} at precision {}",
                self.ctx.prec
            )));
        }
        let pe = self.ctx.p.pow(e);
        if self.residue % pe != 0 {
            return Err(Error::BadInput(format!(
                "residue {} not divisible by p^{e}",
                self.residue
            )));
        }
        let ctx = self.ctx.with_prec(self.ctx.prec - e);
        Ok(PadicElem { ctx, residue: (self.residue / pe) % ctx.modulus() })
    }

    /// Forget digits down to `prec` (no-op if already coarser).
    pub fn truncate(&self, prec: u32) -> PadicElem {
        if prec >= self.ctx.prec {
            return *self;
        }
        let ctx = self.ctx.with_prec(prec);
        PadicElem { ctx, residue: self.residue % ctx.modulus() }
    }

    /// Lift the residue into a context of higher stated precision.  The extra
    /// digits are *not* information; use only where the exact value is known
    /// to be the integer lift (e.g. small integer constants).
    pub fn lift_to(&self, prec: u32) -> PadicElem {
        if prec <= self.ctx.prec {
            return self.truncate(prec);
        }
        PadicElem { ctx: self.ctx.with_prec(prec), residue: self.residue }
    }

    /// Agreement modulo p^min(prec_a, prec_b, digits).
    pub fn congruent(&self, other: &PadicElem, digits: u32) -> bool {
        if self.ctx.p != other.ctx.p {
            return false;
        }
        let d = digits.min(self.ctx.prec).min(other.ctx.prec);
        let m = self.ctx.p.pow(d);
        self.residue % m == other.residue % m
    }

    /// Agreement at the full shared ledger.
    pub fn congruent_shared(&self, other: &PadicElem) -> bool {
        self.congruent(other, self.ctx.prec.min(other.ctx.prec))
    }
}

/// `coeff * p^shift` with `shift` possibly negative: the integral-storage form
/// of a Q_p-element.  The absolute precision of the represented value is
/// `shift + coeff.prec()`.
#[derive(Debug, Clone, Copy)]
pub struct ScaledElem {
    pub coeff: PadicElem,
    pub shift: i64,
}

impl ScaledElem {
    pub fn integral(x: PadicElem) -> ScaledElem {
        ScaledElem { coeff: x, shift: 0 }
    }

    /// Valuation of the represented value (lower bound when coeff is 0).
    pub fn valuation(&self) -> i64 {
        self.shift + self.coeff.valuation() as i64
    }

    pub fn is_integral(&self) -> bool {
        self.valuation() >= 0
    }

    /// Cancel powers of p between coeff and shift where possible.
    pub fn normalize(&self) -> ScaledElem {
        if self.shift >= 0 {
            let e = self.shift.min(u32::MAX as i64) as u32;
            return ScaledElem { coeff: self.coeff.mul_p_pow(e), shift: 0 };
        }
        let need = (-self.shift) as u32;
        let have = self.coeff.valuation().min(need);
        if have == 0 {
            return *self;
        }
        match self.coeff.div_p_pow(have) {
            Ok(c) => ScaledElem { coeff: c, shift: self.shift + have as i64 },
            Err(_) => *self,
        }
    }

    pub fn mul(&self, other: &ScaledElem) -> ScaledElem {
        ScaledElem { coeff: self.coeff.mul(&other.coeff), shift: self.shift + other.shift }
    }

    pub fn mul_elem(&self, other: &PadicElem) -> ScaledElem {
        ScaledElem { coeff: self.coeff.mul(other), shift: self.shift }
    }

    pub fn add(&self, other: &ScaledElem) -> ScaledElem {
        let base = self.shift.min(other.shift);
        let a = self.coeff.mul_p_pow((self.shift - base) as u32);
        let b = other.coeff.mul_p_pow((other.shift - base) as u32);
        ScaledElem { coeff: a.add(&b), shift: base }
    }

    pub fn neg(&self) -> ScaledElem {
        ScaledElem { coeff: self.coeff.neg(), shift: self.shift }
    }

    pub fn sub(&self, other: &ScaledElem) -> ScaledElem {
        self.add(&other.neg())
    }

    /// Extract an integral `PadicElem`, failing when the value is genuinely
    /// non-integral at the working precision.
    pub fn to_integral(&self) -> Result<PadicElem> {
        let n = self.normalize();
        if n.shift >= 0 {
            Ok(n.coeff.mul_p_pow(n.shift as u32))
        } else {
            Err(Error::PrecisionExhausted(format!(
                "non-integral value with shift {}",
                n.shift
            )))
        }
    }

    /// Two scaled values agree iff they agree after rebasing to the common
    /// shift, at the shared coefficient ledger.
    pub fn congruent_shared(&self, other: &ScaledElem) -> bool {
        let base = self.shift.min(other.shift);
        let a = self.coeff.mul_p_pow((self.shift - base) as u32);
        let b = other.coeff.mul_p_pow((other.shift - base) as u32);
        a.congruent_shared(&b)
    }
}

/// x / k for an integer k >= 1: exact where possible, with the p-part of k
/// charged to the ledger.  The result is `(x * unit(k)^{-1}) * p^{-v_p(k)}`
/// as a [`ScaledElem`]; integral inputs with p^v | x normalize back to
/// integral form.
pub fn divide_exact(x: &PadicElem, k: u64) -> Result<ScaledElem> {
    if k == 0 {
        return Err(Error::BadInput("division by zero".into()));
    }
    let p = x.p();
    let mut unit = k;
    let mut v = 0u32;
    while unit % p == 0 {
        unit /= p;
        v += 1;
    }
    if v >= x.prec() {
        return Err(Error::PrecisionExhausted(format!(
            "dividing by p^{v} at precision {}",
            x.prec()
        )));
    }
    let unit_inv = x.ctx().from_u64(unit).invert()?;
    let y = x.mul(&unit_inv);
    // The absolute precision of y * p^{-v} is prec - v; normalize() charges
    // the ledger when the p-power actually divides into the residue.
    Ok(ScaledElem { coeff: y, shift: -(v as i64) }.normalize())
}

/// Newton/Hensel root of the monic quadratic X^2 + b X + c from a seed that is
/// a simple root modulo p (derivative 2x + b a unit at the seed).
pub fn hensel_root(b: &PadicElem, c: &PadicElem, seed: u64) -> Result<PadicElem> {
    let ctx = b.ctx();
    let two = ctx.from_u64(2);
    let mut x = ctx.from_u64(seed);
    let fp = |x: &PadicElem| two.mul(x).add(b);
    if fp(&x).valuation() > 0 {
        return Err(Error::NotPRegular);
    }
    // check the seed really is a root mod p
    let f = |x: &PadicElem| x.mul(x).add(&b.mul(x)).add(c);
    if f(&x).valuation() == 0 {
        return Err(Error::NotPRegular);
    }
    for _ in 0..ctx.prec() + 1 {
        let fx = f(&x);
        if fx.is_zero() {
            break;
        }
        x = x.sub(&fx.mul(&fp(&x).invert()?));
    }
    debug_assert!(f(&x).is_zero());
    Ok(x)
}

/// The unique (p-1)-st root of unity congruent to x mod p, via the x -> x^p
/// fixed-point iteration.
pub fn teichmuller(x: u64, ctx: &PadicCtx) -> Result<PadicElem> {
    if x % ctx.p() == 0 {
        return Err(Error::NotAUnit);
    }
    let mut t = ctx.from_u64(x);
    for _ in 0..ctx.prec() {
        t = t.pow(ctx.p());
    }
    debug_assert!(t.pow(ctx.p()).congruent_shared(&t));
    Ok(t)
}

/// Smallest primitive root modulo p.
pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let mut factors = Vec::new();
    let mut n = p - 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            factors.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        factors.push(n);
    }
    let pow_mod = |mut b: u64, mut e: u64| -> u64 {
        let mut acc = 1u128;
        let mut bb = b as u128 % p as u128;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * bb % p as u128;
            }
            bb = bb * bb % p as u128;
            e >>= 1;
        }
        b = acc as u64;
        b
    };
    'outer: for g in 2..p {
        for q in &factors {
            if pow_mod(g, (p - 1) / q) == 1 {
                continue 'outer;
            }
        }
        return g;
    }
    unreachable!("no primitive root found")
}

/// An element of Z_p(zeta_N) = Z_p for N | p-1, realized through the
/// Teichmueller lift of a fixed primitive root.
#[derive(Debug, Clone, Copy)]
pub struct CycloElem {
    pub value: PadicElem,
    pub conductor: u64,
}

/// zeta_N := teichmuller(g)^{(p-1)/N} for the smallest primitive root g mod p.
pub fn cyclotomic_root(n: u64, ctx: &PadicCtx) -> Result<CycloElem> {
    if n == 0 || (ctx.p() - 1) % n != 0 {
        return Err(Error::BadInput(format!(
            "conductor {n} does not divide p-1 = {}",
            ctx.p() - 1
        )));
    }
    let g = primitive_root(ctx.p());
    let zeta = teichmuller(g, ctx)?.pow((ctx.p() - 1) / n);
    Ok(CycloElem { value: zeta, conductor: n })
}
