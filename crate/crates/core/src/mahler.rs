//! Mahler expansions of functions on Z_p, growth-class gauges, locally
//! analytic characters, and the norm exponents nu_{n,m} / rho_{n,m}.
//!
//! A continuous f: Z_p -> Z_p is stored through the coefficients a_k of
//! f(x) = sum_k a_k binom(x, k); the coefficients are recovered from samples
//! at 0..K-1 by iterated finite differences, and integrality of the samples
//! forces integrality of every a_k.  Membership in the growth class C_eps is
//! gauged by the observed maximum of p^{k eps} |a_k|.

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::One;

use crate::error::{Error, Result};
use crate::padic::{teichmuller, PadicCtx, PadicElem};

/// Truncated Mahler coefficients of a function on Z_p.
#[derive(Debug, Clone)]
pub struct MahlerSeries {
    pub coeffs: Vec<PadicElem>,
    pub ctx: PadicCtx,
}

/// Observed gauge for membership in C_eps: sup_k p^{k eps} |a_k|, recorded as
/// the exponent of p together with the index attaining it.
#[derive(Debug, Clone, Copy)]
pub struct GrowthGauge {
    pub eps: Ratio<i64>,
    /// sup = p^{sup_exp}
    pub sup_exp: Ratio<i64>,
    pub argmax: usize,
}

/// a_k = (Delta^k f)(0) by the in-place difference table.
pub fn finite_difference_coeffs(values: &[PadicElem], ctx: PadicCtx) -> MahlerSeries {
    let mut row: Vec<PadicElem> = values.to_vec();
    let mut coeffs = Vec::with_capacity(values.len());
    let k = values.len();
    for i in 0..k {
        coeffs.push(row[0]);
        for j in 0..k - i - 1 {
            row[j] = row[j + 1].sub(&row[j]);
        }
        row.truncate(k - i - 1);
    }
    MahlerSeries { coeffs, ctx }
}

/// binom(n, k) mod p^prec for an exact non-negative integer n, by the exact
/// falling-factorial product over k!.  No precision is lost: the binomial of
/// an integer is an integer.
pub fn binom_mod(n: &BigUint, k: usize, ctx: &PadicCtx) -> PadicElem {
    let mut num = BigUint::one();
    for i in 0..k {
        let i = BigUint::from(i);
        if &i > n {
            return ctx.zero();
        }
        num *= n - i;
    }
    let mut den = BigUint::one();
    for i in 1..=k {
        den *= BigUint::from(i);
    }
    let q = num / den;
    let m = BigUint::from(ctx.modulus());
    let r = q % m;
    ctx.from_u64(r.to_u64_digits().first().copied().unwrap_or(0))
}

impl MahlerSeries {
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Evaluate sum_{k<K} a_k binom(x, k).  The binomials are computed from
    /// the integer lift of x, which pins the exact value of the truncated sum
    /// modulo p^prec.
    pub fn eval(&self, x: &PadicElem) -> PadicElem {
        self.eval_at_integer(x.residue())
    }

    /// Evaluation at an exact non-negative integer: the sample index is used
    /// as is (not through its residue), so finite-difference inversion is an
    /// identity on the sampled range even when the index exceeds p^prec.
    pub fn eval_at_integer(&self, n: u64) -> PadicElem {
        let lift = BigUint::from(n);
        let mut acc = self.ctx.zero();
        for (k, a) in self.coeffs.iter().enumerate() {
            acc = acc.add(&a.mul(&binom_mod(&lift, k, &self.ctx)));
        }
        acc
    }

    /// Evaluation with a loud tail check: the caller supplies the gauge
    /// epsilon and the required output digits; we refuse rather than
    /// silently truncate when the observed gauge cannot certify the tail
    /// |a_K binom(x,K)| <= p^{-target}.
    pub fn eval_certified(
        &self,
        x: &PadicElem,
        eps: Ratio<i64>,
        target_digits: u32,
    ) -> Result<PadicElem> {
        let gauge = self.growth_sup(eps);
        let k = self.len() as i64;
        // tail exponent at the truncation edge: sup * p^{-K eps}
        let tail = gauge.sup_exp - eps * Ratio::from_integer(k);
        if tail > -Ratio::from_integer(target_digits as i64) {
            return Err(Error::TailNotCertified(format!(
                "gauge tail exponent {tail} exceeds -{target_digits}"
            )));
        }
        Ok(self.eval(x))
    }

    /// Observed sup of p^{k eps} |a_k| over k < K, as a power of p.
    pub fn growth_sup(&self, eps: Ratio<i64>) -> GrowthGauge {
        let mut best = Ratio::from_integer(i64::MIN / 2);
        let mut argmax = 0;
        for (k, a) in self.coeffs.iter().enumerate() {
            let e = eps * Ratio::from_integer(k as i64)
                - Ratio::from_integer(a.valuation() as i64);
            if e > best {
                best = e;
                argmax = k;
            }
        }
        GrowthGauge { eps, sup_exp: best, argmax }
    }
}

/// A locally analytic character chi(x) = omega(x)^tame * <x>^wild of Z_p^*,
/// where <x> = x / omega(x) is the 1-unit part.
#[derive(Debug, Clone, Copy)]
pub struct LocAnChar {
    /// exponent of the Teichmueller character, taken mod p-1 (mod 2 at p=2)
    pub tame: u64,
    /// wild exponent s; <x>^s is evaluated through the binomial series
    pub wild: PadicElem,
}

impl LocAnChar {
    pub fn new(tame: u64, wild: PadicElem) -> LocAnChar {
        LocAnChar { tame, wild }
    }

    /// The character x^t on units: tame = t mod (p-1), wild = t.
    pub fn integer_power(t: u64, ctx: &PadicCtx) -> LocAnChar {
        let tame_mod = if ctx.p() == 2 { 2 } else { ctx.p() - 1 };
        LocAnChar { tame: t % tame_mod, wild: ctx.from_u64(t) }
    }

    pub fn trivial(ctx: &PadicCtx) -> LocAnChar {
        LocAnChar { tame: 0, wild: ctx.zero() }
    }
}

/// omega(x) for a unit x: the Teichmueller lift at odd p; the sign character
/// through x mod 4 at p = 2 (so that <x> = x/omega(x) is 1 mod 4).
pub fn omega(x: u64, ctx: &PadicCtx) -> Result<PadicElem> {
    if ctx.p() == 2 {
        if x % 2 == 0 {
            return Err(Error::NotAUnit);
        }
        return Ok(if x % 4 == 1 { ctx.one() } else { ctx.one().neg() });
    }
    teichmuller(x % ctx.p(), ctx)
}

/// <x>^s for a 1-unit base u0 = <x> via the binomial series
/// (1 + u)^s = sum_j binom(s, j) u^j with u = u0 - 1 and the integer lift of
/// s in the exponent.  The lift changes nothing mod p^prec since
/// v(u0^{p^prec} - 1) > prec, and makes every binomial an exact integer.
fn one_unit_power(u0: &PadicElem, s: &PadicElem, ctx: &PadicCtx) -> Result<PadicElem> {
    let u = u0.sub(&ctx.one());
    let vu = u.valuation();
    let min_v = if ctx.p() == 2 { 2 } else { 1 };
    if !u.is_zero() && vu < min_v {
        return Err(Error::BadInput(format!(
            "base is not a 1-unit in the convergence domain (v(u) = {vu} < {min_v})"
        )));
    }
    if u.is_zero() {
        return Ok(ctx.one());
    }
    let lift = BigUint::from(s.residue());
    let mut acc = ctx.zero();
    let mut upow = ctx.one();
    let mut j = 0usize;
    // terms binom(s,j) u^j vanish mod p^prec once j*v(u) >= prec
    while (j as u32) * vu < ctx.prec() {
        acc = acc.add(&binom_mod(&lift, j, ctx).mul(&upow));
        upow = upow.mul(&u);
        j += 1;
    }
    Ok(acc)
}

/// chi(n) for a unit argument.
pub fn char_eval(chi: &LocAnChar, n: u64, ctx: &PadicCtx) -> Result<PadicElem> {
    if n % ctx.p() == 0 {
        return Err(Error::NotAUnit);
    }
    let om = omega(n, ctx)?;
    let bracket = ctx.from_u64(n).mul(&om.invert()?);
    let tame_part = om.pow(chi.tame);
    let wild_part = one_unit_power(&bracket, &chi.wild, ctx)?;
    Ok(tame_part.mul(&wild_part))
}

/// The value-oracle n -> chi(n) 1_{Z_p^*}(n) on Z_{>=0}: extension by zero.
pub fn restricted_char(chi: &LocAnChar, n: u64, ctx: &PadicCtx) -> PadicElem {
    if n % ctx.p() == 0 {
        ctx.zero()
    } else {
        char_eval(chi, n, ctx).expect("unit argument")
    }
}

/// Closed form for the norm exponent:
/// nu_{n,m} = m p^{n-m} + sum_{k=1}^{m-1} k (p-1) p^{n-(k+1)}.
pub fn nu_exponent(n: u32, m: u32, p: u64) -> u64 {
    assert!(m <= n, "need 0 <= m <= n");
    if m == 0 {
        return 0;
    }
    let mut nu = m as u64 * p.pow(n - m);
    for k in 1..m {
        nu += k as u64 * (p - 1) * p.pow(n - (k + 1));
    }
    nu
}

/// Brute-force twin: -v_p(rho_{n,m}) from the literal product over the units
/// of Z/p^n, with rho_{n,m} = p^{-m p^{n-m}} prod_{x != 1 mod p^m} |x - 1|_p.
pub fn rho_bruteforce(n: u32, m: u32, p: u64) -> u64 {
    assert!(m <= n);
    let pn = p.pow(n);
    let pm = p.pow(m);
    let mut nu = m as u64 * p.pow(n - m);
    for x in 1..pn {
        if x % p == 0 {
            continue;
        }
        if x % pm == 1 % pm {
            // x = 1 mod p^m is excluded from the product (for m = 0 that is
            // every unit, leaving the bare p^{-m p^{n-m}} factor)
            continue;
        }
        let mut d = x - 1;
        while d % p == 0 {
            nu += 1;
            d /= p;
        }
    }
    nu
}
