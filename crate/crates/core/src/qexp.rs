//! The q-expansion engine: p-adic modular forms as truncated q-series with
//! weight/level tags, the operator suite (theta, continuous-function actions,
//! U_p, V, p-depletion, chi-twisted powers), classical constructors
//! (Eisenstein series, the level-1 Victor Miller basis, delta, the depleted
//! Eisenstein family), and p-stabilization through the Hecke polynomial at p.
//!
//! Operator normalisation: `up` is the classical a_n -> a_{pn} on
//! q-expansions, i.e. the U_p-operator in the normalisation whose eigenvalue
//! on a unit-root stabilisation is the unit root itself.  The diamond
//! operator never appears alone: everything downstream only consumes the
//! convention-free combinations `deplete = 1 - V U` and alpha*beta =
//! eps(p) p^{k-1}.

use crate::bernoulli::{bernoulli, rational_mod};
use crate::error::{Error, Result};
use crate::linalg::{has_multiple_root_mod_p, kernel_vector, simple_roots, Matrix};
use crate::mahler::{restricted_char, LocAnChar};
use crate::padic::{cyclotomic_root, PadicCtx, PadicElem, ScaledElem};
use crate::series::QSeries;

/// A truncated q-expansion with arithmetic tags.  `weight = None` marks a
/// series produced by a non-homogeneous operator (a general continuous
/// action); tagged weights must agree under addition.
#[derive(Debug, Clone)]
pub struct QExpansion {
    pub series: QSeries,
    pub weight: Option<i64>,
    pub level: u64,
    pub eps_p: PadicElem,
}

impl QExpansion {
    pub fn new(series: QSeries, weight: Option<i64>, level: u64) -> QExpansion {
        let eps = series.ctx().one();
        QExpansion { series, weight, level, eps_p: eps }
    }

    pub fn ctx(&self) -> PadicCtx {
        self.series.ctx()
    }

    pub fn qprec(&self) -> usize {
        self.series.qprec()
    }

    pub fn coeff(&self, n: usize) -> PadicElem {
        self.series.coeff(n)
    }

    pub fn add(&self, other: &QExpansion) -> Result<QExpansion> {
        let weight = match (self.weight, other.weight) {
            (Some(a), Some(b)) if a != b => return Err(Error::WeightMismatch(a, b)),
            (Some(a), _) => Some(a),
            (_, w) => w,
        };
        Ok(QExpansion {
            series: self.series.add(&other.series),
            weight,
            level: self.level.max(other.level),
            eps_p: self.eps_p,
        })
    }

    pub fn sub(&self, other: &QExpansion) -> Result<QExpansion> {
        self.add(&QExpansion { series: other.series.neg(), ..other.clone() })
    }

    /// Cauchy product; weight tags add.
    pub fn mul(&self, other: &QExpansion) -> QExpansion {
        let weight = match (self.weight, other.weight) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        QExpansion {
            series: self.series.mul(&other.series),
            weight,
            level: self.level.max(other.level),
            eps_p: self.eps_p.mul(&other.eps_p),
        }
    }

    pub fn scal(&self, c: &PadicElem) -> QExpansion {
        QExpansion { series: self.series.scal(c), ..self.clone() }
    }

    /// a_n -> phi(n) a_n for a value oracle on Z_{>=0}.  A general continuous
    /// function is not weight-homogeneous, so the tag is dropped.
    pub fn cont_action<F: Fn(u64) -> PadicElem>(&self, phi: F) -> QExpansion {
        QExpansion {
            series: self.series.oracle_action(phi),
            weight: None,
            level: self.level,
            eps_p: self.eps_p,
        }
    }

    /// theta = q d/dq, the action of the identity function; raises the weight
    /// by 2 (the q-expansion shadow of the connection's 2-rho shift).
    pub fn theta(&self) -> QExpansion {
        QExpansion {
            series: self.series.theta(),
            weight: self.weight.map(|k| k + 2),
            level: self.level,
            eps_p: self.eps_p,
        }
    }

    pub fn theta_pow(&self, t: u64) -> QExpansion {
        let ctx = self.ctx();
        let series = self
            .series
            .oracle_action(|n| ctx.from_u64(n).pow(t));
        QExpansion {
            series,
            weight: self.weight.map(|k| k + 2 * t as i64),
            level: self.level,
            eps_p: self.eps_p,
        }
    }

    /// b_n = a_{pn}; consumes q-precision Q -> floor(Q/p).
    pub fn up(&self) -> Result<QExpansion> {
        let p = self.ctx().p() as usize;
        let q_out = self.qprec() / p;
        if q_out == 0 {
            return Err(Error::QPrecisionExhausted(format!(
                "U_p needs q-precision >= p = {p}, have {}",
                self.qprec()
            )));
        }
        let coeffs = (0..q_out).map(|n| self.series.coeff(p * n)).collect();
        Ok(QExpansion {
            series: QSeries::from_coeffs(coeffs, self.ctx()),
            weight: self.weight,
            level: self.level,
            eps_p: self.eps_p,
        })
    }

    /// b_{pn} = a_n, zero elsewhere; produces q-precision Q*p (capped).
    pub fn v_op(&self) -> QExpansion {
        let p = self.ctx().p() as usize;
        let q_out = (self.qprec() * p).min(1 << 22);
        let mut series = QSeries::zero(self.ctx(), q_out);
        for n in 0..self.qprec() {
            if p * n < q_out {
                series.set_coeff(p * n, self.series.coeff(n));
            }
        }
        QExpansion {
            series,
            weight: self.weight,
            level: self.level * self.ctx().p(),
            eps_p: self.eps_p,
        }
    }

    /// p-depletion: zero the coefficients with p | n.  Coincides with
    /// 1 - V U and with the action of the indicator of Z_p^*.
    pub fn deplete(&self) -> QExpansion {
        let p = self.ctx().p();
        let ctx = self.ctx();
        let series = self.series.oracle_action(|n| {
            if n % p == 0 {
                ctx.zero()
            } else {
                ctx.one()
            }
        });
        QExpansion { series, weight: self.weight, level: self.level, eps_p: self.eps_p }
    }

    /// The chi-twisted connection power on depleted coefficients:
    /// a_n -> chi(n) a_n for p not dividing n, 0 otherwise.  For the integer
    /// specialization chi = x^t this equals theta^t compose deplete exactly,
    /// and the weight tag advances by 2t.
    pub fn nabla_chi(&self, chi: &LocAnChar) -> QExpansion {
        let ctx = self.ctx();
        let series = self.series.oracle_action(|n| restricted_char(chi, n, &ctx));
        let weight = integer_specialization(chi, &ctx)
            .and_then(|t| self.weight.map(|k| k + 2 * t as i64));
        QExpansion { series, weight, level: self.level, eps_p: self.eps_p }
    }

    /// Level-1 Hecke operator T_ell for a prime ell not dividing the level:
    /// a_n -> a_{ell n} + ell^{k-1} a_{n/ell}.
    pub fn hecke(&self, ell: u64) -> Result<QExpansion> {
        let Some(k) = self.weight else {
            return Err(Error::BadInput("Hecke action needs a weight tag".into()));
        };
        if k < 1 {
            return Err(Error::BadInput("Hecke action needs weight >= 1".into()));
        }
        let ctx = self.ctx();
        let ellk = ctx.from_u64(ell % ctx.modulus()).pow(k as u64 - 1);
        let q_out = self.qprec() / ell as usize;
        if q_out == 0 {
            return Err(Error::QPrecisionExhausted("T_ell needs more q-precision".into()));
        }
        let coeffs = (0..q_out)
            .map(|n| {
                let mut a = self.series.coeff(ell as usize * n);
                if n % ell as usize == 0 {
                    a = a.add(&ellk.mul(&self.series.coeff(n / ell as usize)));
                }
                a
            })
            .collect();
        Ok(QExpansion {
            series: QSeries::from_coeffs(coeffs, ctx),
            weight: self.weight,
            level: self.level,
            eps_p: self.eps_p,
        })
    }

    pub fn congruent(&self, other: &QExpansion, digits: u32) -> bool {
        self.series.congruent(&other.series, digits)
    }

    pub fn congruent_shared(&self, other: &QExpansion) -> bool {
        self.series.congruent_shared(&other.series)
    }
}

/// Is chi the integer power x^t for a small t?  (tame = t mod (p-1) and
/// wild = t as a residue.)
fn integer_specialization(chi: &LocAnChar, ctx: &PadicCtx) -> Option<u64> {
    let tame_mod = if ctx.p() == 2 { 2 } else { ctx.p() - 1 };
    let t = chi.wild.residue();
    // only treat genuinely small exponents as integer specializations
    if t < 1 << 20 && t % tame_mod == chi.tame % tame_mod {
        Some(t)
    } else {
        None
    }
}

/// Plan of integer exponents t_i = t + (p-1) p^i approximating a character:
/// chi(n) = n^{t_i} mod p^{i+1} on units, since v(n^{(p-1)p^i} - 1) >= i+1.
#[derive(Debug, Clone)]
pub struct CharacterTwistPlan {
    pub chi: LocAnChar,
    pub exponents: Vec<u64>,
}

impl CharacterTwistPlan {
    pub fn for_integer_power(t: u64, depth: usize, ctx: &PadicCtx) -> CharacterTwistPlan {
        let p = ctx.p();
        let exponents = (0..depth).map(|i| t + (p - 1) * p.pow(i as u32)).collect();
        CharacterTwistPlan { chi: LocAnChar::integer_power(t, ctx), exponents }
    }
}

/// dim M_k(SL_2(Z)) for even k >= 0.
pub fn dim_mk(k: i64) -> usize {
    if k < 0 || k % 2 != 0 {
        return 0;
    }
    if k % 12 == 2 {
        (k / 12) as usize
    } else {
        (k / 12) as usize + 1
    }
}

fn sigma_mod(n: u64, e: u64, ctx: &PadicCtx) -> PadicElem {
    let mut acc = ctx.zero();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            acc = acc.add(&ctx.from_u64(d % ctx.modulus()).pow(e));
            let other = n / d;
            if other != d {
                acc = acc.add(&ctx.from_u64(other % ctx.modulus()).pow(e));
            }
        }
        d += 1;
    }
    acc
}

/// E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n, mapped into Z_p.  Raises when
/// the constant -2k/B_k is not p-integral (irregular-index obstruction).
pub fn eisenstein(k: u64, ctx: &PadicCtx, qprec: usize) -> Result<QExpansion> {
    if k < 4 || k % 2 != 0 {
        return Err(Error::BadInput(format!("E_k needs even k >= 4, got {k}")));
    }
    let bk = bernoulli(k as usize);
    let c = rational_mod(
        &(num_rational::BigRational::from_integer((2 * k as i64).into()) / bk),
        ctx,
    )?
    .neg();
    let mut series = QSeries::zero(*ctx, qprec);
    series.set_coeff(0, ctx.one());
    for n in 1..qprec {
        series.set_coeff(n, c.mul(&sigma_mod(n as u64, k - 1, ctx)));
    }
    Ok(QExpansion::new(series, Some(k as i64), 1))
}

/// Member of the p-depleted Eisenstein family at integer weight k2:
/// sum over n coprime to p of (sum_{d|n} d^{k2-1} (zeta_N^d + (-1)^{k2} zeta_N^{-d})) q^n.
/// Odd k2 at N = 1 gives the zero series.
pub fn eis_family_specialize(
    k2: u64,
    n_cond: u64,
    ctx: &PadicCtx,
    qprec: usize,
) -> Result<QExpansion> {
    if k2 < 1 {
        return Err(Error::BadInput("family weight must be >= 1".into()));
    }
    let p = ctx.p();
    if n_cond != 1 && (p - 1) % n_cond != 0 {
        return Err(Error::BadInput(format!("need N | p-1, got N = {n_cond}")));
    }
    let zeta = if n_cond == 1 {
        ctx.one()
    } else {
        cyclotomic_root(n_cond, ctx)?.value
    };
    let zeta_inv = zeta.invert()?;
    let sign_odd = k2 % 2 == 1;
    let term = |dd: u64| -> PadicElem {
        let base = ctx.from_u64(dd % ctx.modulus()).pow(k2 - 1);
        let z_pos = zeta.pow(dd % n_cond);
        let z_neg = zeta_inv.pow(dd % n_cond);
        let zfac = if sign_odd { z_pos.sub(&z_neg) } else { z_pos.add(&z_neg) };
        base.mul(&zfac)
    };
    let mut series = QSeries::zero(*ctx, qprec);
    for n in 1..qprec as u64 {
        if n % p == 0 {
            continue;
        }
        let mut acc = ctx.zero();
        let mut d = 1;
        while d * d <= n {
            if n % d == 0 {
                acc = acc.add(&term(d));
                if d * d != n {
                    acc = acc.add(&term(n / d));
                }
            }
            d += 1;
        }
        series.set_coeff(n as usize, acc);
    }
    Ok(QExpansion::new(series, Some(k2 as i64), n_cond))
}

/// delta = q prod (1 - q^n)^24, through the pentagonal-number expansion of
/// the eta-product.
pub fn delta(ctx: &PadicCtx, qprec: usize) -> QExpansion {
    let mut eta = QSeries::zero(*ctx, qprec);
    eta.set_coeff(0, ctx.one());
    let mut k: i64 = 1;
    loop {
        let e_pos = k * (3 * k - 1) / 2;
        let e_neg = k * (3 * k + 1) / 2;
        if e_pos >= qprec as i64 && e_neg >= qprec as i64 {
            break;
        }
        let sign = if k % 2 == 0 { ctx.one() } else { ctx.one().neg() };
        for e in [e_pos, e_neg] {
            if (e as usize) < qprec {
                let prev = eta.coeff(e as usize);
                eta.set_coeff(e as usize, prev.add(&sign));
            }
        }
        k += 1;
    }
    let eta8 = eta.pow(8);
    let eta24 = eta8.pow(3);
    // shift by one power of q
    let mut series = QSeries::zero(*ctx, qprec);
    for n in 1..qprec {
        series.set_coeff(n, eta24.coeff(n - 1));
    }
    QExpansion::new(series, Some(12), 1)
}

/// Cache of the level-1 generators, shared across basis constructions at
/// many weights (the Katz basis sweeps an arithmetic progression of weights).
pub struct Level1Cache {
    ctx: PadicCtx,
    qprec: usize,
    e4_pows: Vec<QSeries>,
    e6: QSeries,
    delta_pows: Vec<QSeries>,
}

impl Level1Cache {
    pub fn new(ctx: &PadicCtx, qprec: usize) -> Result<Level1Cache> {
        let e4 = eisenstein(4, ctx, qprec)?;
        let e6 = eisenstein(6, ctx, qprec)?;
        Ok(Level1Cache {
            ctx: *ctx,
            qprec,
            e4_pows: vec![QSeries::one(*ctx, qprec), e4.series],
            e6: e6.series,
            delta_pows: vec![QSeries::one(*ctx, qprec)],
        })
    }

    fn e4_pow(&mut self, a: usize) -> QSeries {
        while self.e4_pows.len() <= a {
            let next = self.e4_pows.last().unwrap().mul(&self.e4_pows[1]);
            self.e4_pows.push(next);
        }
        self.e4_pows[a].clone()
    }

    fn delta_pow(&mut self, i: usize) -> QSeries {
        while self.delta_pows.len() <= i {
            if self.delta_pows.len() == 1 {
                let d = delta(&self.ctx, self.qprec);
                self.delta_pows.push(d.series);
            } else {
                let next = self.delta_pows.last().unwrap().mul(&self.delta_pows[1]);
                self.delta_pows.push(next);
            }
        }
        self.delta_pows[i].clone()
    }

    /// The unique basis m_0..m_{d-1} of M_k with m_i = q^i + O(q^d), built
    /// from E_4, E_6, delta products and division-free triangular reduction
    /// (all leading pivots are 1).
    pub fn victor_miller(&mut self, k: i64) -> Result<Vec<QExpansion>> {
        if k < 0 || k % 2 != 0 {
            return Err(Error::BadInput(format!("level-1 basis needs even k >= 0, got {k}")));
        }
        let ctx = self.ctx;
        let d = dim_mk(k);
        if d == 0 {
            return Ok(Vec::new());
        }
        if k == 0 {
            return Ok(vec![QExpansion::new(QSeries::one(ctx, self.qprec), Some(0), 1)]);
        }
        let mut gens = Vec::with_capacity(d);
        for i in 0..d {
            let w = k - 12 * i as i64;
            debug_assert!(w >= 0);
            let b = if w % 4 == 0 { 0u64 } else { 1 };
            debug_assert!(w >= 6 * b as i64);
            let a = ((w - 6 * b as i64) / 4) as usize;
            let mut g = self.delta_pow(i).mul(&self.e4_pow(a));
            if b > 0 {
                g = g.mul(&self.e6);
            }
            gens.push(QExpansion::new(g, Some(k), 1));
        }
        // triangular reduction from the top: gens[i] = q^i + ..., pivots are 1
        for i in (0..d).rev() {
            for j in (i + 1)..d {
                let c = gens[i].coeff(j);
                if !c.is_zero() {
                    let adj = gens[j].scal(&c);
                    gens[i] = gens[i].sub(&adj)?;
                }
            }
        }
        Ok(gens)
    }
}

/// Level-1 basis of M_k in echelon form; see [`Level1Cache::victor_miller`].
pub fn victor_miller(k: i64, ctx: &PadicCtx, qprec: usize) -> Result<Vec<QExpansion>> {
    Level1Cache::new(ctx, qprec)?.victor_miller(k)
}

/// Root pair of the Hecke polynomial X^2 - a_p X + eps(p) p^{k-1}, stored as
/// scaled values so the beta-valuation k-1 stays exact even when p^{k-1}
/// vanishes at working precision.
#[derive(Debug, Clone)]
pub struct HeckeRoots {
    pub alpha: ScaledElem,
    pub beta: ScaledElem,
    /// slope v(alpha)
    pub slope: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootChoice {
    Unit,
    NonUnit,
}

/// Split the Hecke polynomial by Newton slopes.  Requires the two slopes to
/// be distinct integers (the liftable p-regular case): slope v(a_p) for the
/// small root when 2 v(a_p) < k-1.
pub fn hecke_roots(
    a_p: &PadicElem,
    eps_p: &PadicElem,
    k: i64,
    ctx: &PadicCtx,
) -> Result<HeckeRoots> {
    if k < 2 {
        return Err(Error::BadInput("stabilization needs weight >= 2".into()));
    }
    let c_val = (k - 1) as u32;
    let v_ap = a_p.valuation();
    if 2 * v_ap >= c_val {
        // equal Newton slopes (or a_p indistinguishable from zero):
        // the quadratic has no distinct integer-slope split
        return Err(Error::NotPRegular);
    }
    let s = v_ap;
    if 2 * s + 1 >= ctx.prec() {
        return Err(Error::PrecisionExhausted(format!(
            "slope {s} stabilization needs precision > {}",
            2 * s + 1
        )));
    }
    // substitute X = p^s U: U^2 - (a_p / p^s) U + eps p^{k-1-2s}
    let work_prec = ctx.prec() - 2 * s;
    let wctx = ctx.with_prec(work_prec);
    let a_u = a_p.div_p_pow(s)?.truncate(work_prec);
    let c_u = if c_val - 2 * s >= work_prec {
        wctx.zero()
    } else {
        eps_p.truncate(work_prec).mul_p_pow(c_val - 2 * s)
    };
    let seed = a_u.residue() % ctx.p();
    let u_root = crate::padic::hensel_root(&a_u.neg(), &c_u, seed)?;
    let alpha = ScaledElem { coeff: u_root, shift: s as i64 };
    // beta = eps p^{k-1} / alpha
    let beta = ScaledElem {
        coeff: eps_p.truncate(work_prec).mul(&u_root.invert()?),
        shift: (c_val - s) as i64,
    };
    Ok(HeckeRoots { alpha, beta, slope: s })
}

#[derive(Debug, Clone)]
pub struct StabilizedForm {
    pub form: QExpansion,
    pub roots: HeckeRoots,
}

/// a_p of an eigenform presented with any scaling: the ratio
/// coeff(p)/coeff(1), with the valuation of a_1 charged to the ledger when
/// the presentation is not normalized (Eisenstein constants can be
/// p-divisible).
pub fn normalized_ap(f: &QExpansion) -> Result<PadicElem> {
    let ctx = f.ctx();
    let a1 = f.coeff(1);
    let ap = f.coeff(ctx.p() as usize);
    let v1 = a1.valuation();
    if v1 == 0 {
        return Ok(ap.mul(&a1.invert()?));
    }
    if v1 >= ctx.prec() {
        return Err(Error::BadInput("eigenform has vanishing q-coefficient".into()));
    }
    if ap.valuation() < v1 {
        return Err(Error::PrecisionExhausted(
            "a_p ratio is not integral at working precision".into(),
        ));
    }
    Ok(ap.div_p_pow(v1)?.mul(&a1.div_p_pow(v1)?.invert()?))
}

/// f^alpha = f - beta V(f): an eigenform of level N p with U-eigenvalue
/// alpha.  `RootChoice::Unit` demands an ordinary form (v(a_p) = 0).
pub fn p_stabilize(f: &QExpansion, root: RootChoice) -> Result<StabilizedForm> {
    let ctx = f.ctx();
    let Some(k) = f.weight else {
        return Err(Error::BadInput("stabilization needs a weight tag".into()));
    };
    let a_p = normalized_ap(f)?;
    let roots = hecke_roots(&a_p, &f.eps_p.truncate(a_p.prec()), k, &ctx.with_prec(a_p.prec()))?;
    if root == RootChoice::Unit && roots.slope != 0 {
        return Err(Error::NoUnitRoot);
    }
    let beta_elem = roots
        .beta
        .coeff
        .lift_to(ctx.prec())
        .mul_p_pow(roots.beta.shift as u32);
    let vf = f.v_op();
    let q_out = f.qprec().min(vf.qprec());
    let series = f
        .series
        .truncate_q(q_out)
        .sub(&vf.series.truncate_q(q_out).scal(&beta_elem));
    Ok(StabilizedForm {
        form: QExpansion {
            series,
            weight: Some(k),
            level: f.level * ctx.p(),
            eps_p: f.eps_p,
        },
        roots,
    })
}

/// A normalized eigenform with its stabilization data: the inputs of the
/// L-value pillar.
#[derive(Debug, Clone)]
pub struct EigenformData {
    pub form: QExpansion,
    pub weight: i64,
    pub a_p: PadicElem,
    pub eps_p: PadicElem,
    pub roots: HeckeRoots,
    pub stabilized: QExpansion,
}

impl EigenformData {
    pub fn from_eigenform(f: &QExpansion, root: RootChoice) -> Result<EigenformData> {
        let st = p_stabilize(f, root)?;
        Ok(EigenformData {
            form: f.clone(),
            weight: f.weight.expect("weight tag"),
            a_p: normalized_ap(f)?,
            eps_p: f.eps_p,
            roots: st.roots.clone(),
            stabilized: st.form,
        })
    }

    pub fn ordinary(&self) -> bool {
        self.roots.slope == 0
    }
}

/// Normalized cuspidal eigenforms of level 1 and weight k over Z_p, split by
/// the T_2-action on the Victor Miller cusp basis.  Fails with
/// `MultiplicityNotOne` when eigenvalues collide modulo p at working
/// precision, and skips eigenvalues not lying in Z_p.
pub fn cusp_eigenforms(k: i64, ctx: &PadicCtx, qprec: usize) -> Result<Vec<QExpansion>> {
    let d = dim_mk(k);
    if d <= 1 {
        return Ok(Vec::new());
    }
    let r = d - 1;
    let basis_prec = qprec.max(2 * (d + 2));
    let vm = victor_miller(k, ctx, basis_prec)?;
    let cusp: Vec<&QExpansion> = vm[1..].iter().collect();
    // T_2 matrix in the cusp basis: coordinates of a cusp form g are just
    // g[1..d] because m_i = q^i + O(q^d)
    let mut t2 = Matrix::zero(*ctx, r, r);
    for (j, m) in cusp.iter().enumerate() {
        let tm = m.hecke(2)?;
        for i in 0..r {
            t2[(i, j)] = tm.coeff(i + 1);
        }
    }
    let cp = t2.charpoly();
    if has_multiple_root_mod_p(&cp, ctx) {
        return Err(Error::MultiplicityNotOne);
    }
    let roots = simple_roots(&cp, ctx)?;
    let mut out = Vec::new();
    for lam in roots {
        let mut shifted = t2.clone();
        for i in 0..r {
            shifted[(i, i)] = shifted[(i, i)].sub(&lam);
        }
        let v = kernel_vector(&shifted)?;
        let mut series = QSeries::zero(*ctx, qprec);
        for (j, c) in v.iter().enumerate() {
            series = series.add(&cusp[j].series.truncate_q(qprec).scal(c));
        }
        let a1 = series.coeff(1);
        if a1.valuation() > 0 {
            return Err(Error::BasisDegenerate(
                "eigenvector has non-unit leading coefficient".into(),
            ));
        }
        let series = series.scal(&a1.invert()?);
        out.push(QExpansion::new(series, Some(k), 1));
    }
    out.sort_by_key(|f| f.coeff(2).residue());
    Ok(out)
}

/// Eigenform data for the unit-root Eisenstein stabilization: a_p =
/// 1 + p^{k-1}, roots (1, p^{k-1}).
pub fn eisenstein_eigen_data(k: u64, ctx: &PadicCtx, qprec: usize) -> Result<EigenformData> {
    let e = eisenstein(k, ctx, qprec)?;
    EigenformData::from_eigenform(&e, RootChoice::Unit)
}
