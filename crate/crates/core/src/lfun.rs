//! U_p on overconvergent spaces at level 1, ordinary projection, the
//! eigenline functional, Euler factors, and triple-product / Rankin-Selberg
//! p-adic L-values at classical points.
//!
//! The computational space is the Katz basis e_{i,j} = E_{p-1}^{-i} m_{w_i,j}
//! built from the Victor Miller bases at weights w_i = k + i(p-1): its
//! leading q-exponents are 0, 1, 2, ... so expansion in the basis is a
//! division-free triangular read-off, and the residual left beyond the
//! truncation dimension caps the certified digits of everything downstream.
//!
//! The eigenline functional avoids diagonalising the ordinary block: with
//! chi the characteristic polynomial of the U-matrix and alpha the refined
//! unit eigenvalue of the target form, Q = chi / (x - alpha) applied to the
//! matrix kills every other generalized eigenblock (Cayley-Hamilton), so
//! lambda(G) is a ratio of Q(A)-image coordinates.  A division by
//! Q(alpha)-type quantities that vanish at working precision is exactly the
//! multiplicity-one failure and is reported as such.

use crate::error::{Error, Result};
use crate::linalg::{poly_eval, Matrix};
use crate::mahler::LocAnChar;
use crate::padic::{PadicCtx, PadicElem, ScaledElem};
use crate::qexp::{
    cusp_eigenforms, dim_mk, eis_family_specialize, eisenstein, EigenformData, Level1Cache,
    QExpansion,
};
use crate::series::QSeries;

/// U-matrix data on the degree-d Katz-basis truncation at one weight.
#[derive(Debug)]
pub struct UpMatrixData {
    pub weight: i64,
    pub dim: usize,
    /// Katz basis, leading exponent of `basis[s]` is q^s
    pub basis: Vec<QExpansion>,
    /// matrix of U acting on the basis: U(basis[r]) = sum_s A[(s,r)] basis[s]
    pub matrix: Matrix,
    /// det(1 - tA) coefficients, degree 0..=dim
    pub char_series: Vec<PadicElem>,
    /// minimal residual valuation over the column solves: certified digits
    /// of the truncated-matrix model
    pub certified: u32,
    /// per-column residual valuations
    pub col_certified: Vec<u32>,
    /// number of q-coefficients the basis expansion can certify against
    pub q_window: usize,
}

/// Express a series in the triangular Katz basis: coordinates are read off
/// the leading exponents; the residual over the window caps certification.
fn express_in_basis(
    series: &QSeries,
    basis: &[QExpansion],
    window: usize,
) -> (Vec<PadicElem>, u32) {
    let ctx = series.ctx();
    let n = window.min(series.qprec());
    let mut residual = series.truncate_q(n);
    let mut coords = Vec::with_capacity(basis.len());
    for (s, b) in basis.iter().enumerate() {
        let c = residual.coeff(s);
        coords.push(c);
        if !c.is_zero() {
            residual = residual.sub(&b.series.truncate_q(n).scal(&c));
        }
    }
    let mut res_val = ctx.prec();
    for i in 0..n {
        res_val = res_val.min(residual.coeff(i).valuation());
    }
    (coords, res_val)
}

/// Build the U-matrix at level 1.  `qprec` is the q-precision of the basis;
/// the matrix itself is certified on the window floor(qprec/p), which must
/// exceed the dimension.
pub fn up_matrix(ctx: &PadicCtx, k: i64, d: usize, qprec: usize) -> Result<UpMatrixData> {
    let p = ctx.p();
    if p < 5 {
        return Err(Error::BadInput(
            "the Katz-basis route needs p >= 5 (E_{p-1} = 1 mod p)".into(),
        ));
    }
    if d == 0 {
        return Err(Error::BadInput("dimension must be >= 1".into()));
    }
    let window = qprec / p as usize;
    if window <= d {
        return Err(Error::QPrecisionExhausted(format!(
            "need qprec/p > d: qprec = {qprec}, p = {p}, d = {d}"
        )));
    }
    let mut cache = Level1Cache::new(ctx, qprec)?;
    let ep = eisenstein(p - 1, ctx, qprec)?;
    let ep_inv = ep.series.invert()?;
    let mut basis: Vec<QExpansion> = Vec::with_capacity(d);
    let mut einv_pow = QSeries::one(*ctx, qprec);
    let mut prev_dim = 0usize;
    let mut i = 0i64;
    while basis.len() < d {
        let w = k + i * (p as i64 - 1);
        let dw = dim_mk(w);
        if dw > prev_dim {
            let vm = cache.victor_miller(w)?;
            for j in prev_dim..dw {
                if basis.len() == d {
                    break;
                }
                if j != basis.len() {
                    return Err(Error::BasisDegenerate(format!(
                        "leading exponents skip q^{}, got q^{j}",
                        basis.len()
                    )));
                }
                basis.push(QExpansion::new(
                    vm[j].series.mul(&einv_pow),
                    Some(k),
                    1,
                ));
            }
            prev_dim = dw;
        }
        einv_pow = einv_pow.mul(&ep_inv);
        i += 1;
        if i > 4096 {
            return Err(Error::BasisDegenerate(
                "dimension not reachable: weight progression exhausted".into(),
            ));
        }
    }
    let mut matrix = Matrix::zero(*ctx, d, d);
    let mut col_certified = Vec::with_capacity(d);
    for (r, b) in basis.iter().enumerate() {
        let ub = b.up()?;
        let (coords, res_val) = express_in_basis(&ub.series, &basis, window);
        for (s, c) in coords.iter().enumerate() {
            matrix[(s, r)] = *c;
        }
        col_certified.push(res_val);
    }
    let certified = col_certified.iter().copied().min().unwrap_or(0);
    let cp = matrix.charpoly();
    // det(1 - tA)[j] = charpoly coefficient of degree d - j
    let char_series: Vec<PadicElem> = (0..=d).map(|j| cp[d - j]).collect();
    Ok(UpMatrixData {
        weight: k,
        dim: d,
        basis,
        matrix,
        char_series,
        certified,
        col_certified,
        q_window: window,
    })
}

impl UpMatrixData {
    pub fn ctx(&self) -> PadicCtx {
        self.matrix.ctx()
    }

    /// Coordinates of a q-expansion in the basis; the residual valuation
    /// caps the certified digits of the coordinates.
    pub fn coords(&self, f: &QExpansion) -> Result<Vec<PadicElem>> {
        let window = self.q_window.min(f.qprec());
        if window <= self.dim {
            return Err(Error::QPrecisionExhausted(format!(
                "expansion window {window} does not cover dimension {}",
                self.dim
            )));
        }
        let (coords, res_val) = express_in_basis(&f.series, &self.basis, window);
        if res_val == 0 {
            return Err(Error::NotInSpan(res_val));
        }
        Ok(coords.into_iter().map(|c| c.truncate(res_val)).collect())
    }

    /// Reassemble a q-expansion from coordinates.
    pub fn assemble(&self, coords: &[PadicElem], qprec: usize) -> QExpansion {
        let ctx = self.ctx();
        let mut s = QSeries::zero(ctx, qprec.min(self.basis[0].qprec()));
        for (c, b) in coords.iter().zip(&self.basis) {
            if !c.is_zero() {
                s = s.add(&b.series.truncate_q(s.qprec()).scal(c));
            }
        }
        QExpansion::new(s, Some(self.weight), 1)
    }

    /// The ordinary idempotent e = lim A^{n!}, realized as A^R for
    /// R = (p-1) p^{prec + d/(p-1) + 2}: unit eigenvalues power to 1, the
    /// unipotent parts die through binomial valuations, and the positive
    /// slope block powers below p^prec.  Stability under squaring is checked.
    pub fn ordinary_idempotent(&self) -> Result<Matrix> {
        let ctx = self.ctx();
        let p = ctx.p();
        let extra = (self.dim as u32) / (p as u32 - 1) + 2;
        let log_r = ctx.prec() + extra;
        if (p as f64).ln() * log_r as f64 > 87.0 {
            return Err(Error::BadInput("idempotent exponent exceeds u128".into()));
        }
        let r: u128 = (p as u128 - 1) * (p as u128).pow(log_r);
        let e = self.matrix.pow(r);
        let e2 = e.mul(&e);
        if !e2.congruent(&e, ctx.prec()) {
            return Err(Error::NoOrdinaryBlock);
        }
        Ok(e)
    }
}

/// Ordinary projection of a q-expansion through the Katz-basis model.
pub fn ordinary_project(data: &UpMatrixData, f: &QExpansion) -> Result<QExpansion> {
    let coords = data.coords(f)?;
    let e = data.ordinary_idempotent()?;
    let y = e.mul_vec(&coords);
    Ok(data.assemble(&y, data.q_window))
}

/// Refine an approximate unit eigenvalue to a root of the characteristic
/// polynomial of the truncated matrix.  Fails with MultiplicityNotOne when
/// the derivative at the eigenvalue is too small to separate the line.
fn refine_eigenvalue(charpoly: &[PadicElem], alpha: &PadicElem) -> Result<PadicElem> {
    let ctx = alpha.ctx();
    let deriv: Vec<PadicElem> = charpoly
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.mul(&ctx.from_u64(i as u64)))
        .collect();
    let mut x = *alpha;
    for _ in 0..ctx.prec() + 2 {
        let fx = poly_eval(charpoly, &x);
        if fx.is_zero() {
            break;
        }
        let dfx = poly_eval(&deriv, &x);
        let v = dfx.valuation();
        if v * 2 >= ctx.prec() || fx.valuation() <= 2 * v {
            return Err(Error::MultiplicityNotOne);
        }
        let step = fx.div_p_pow(v)?.mul(&dfx.div_p_pow(v)?.invert()?);
        x = x.sub(&step);
    }
    if !poly_eval(charpoly, &x).is_zero() {
        return Err(Error::MultiplicityNotOne);
    }
    Ok(x)
}

/// Synthetic division chi(x) / (x - alpha) for a root alpha (remainder must
/// vanish at working precision).
fn synthetic_quotient(charpoly: &[PadicElem], alpha: &PadicElem) -> Vec<PadicElem> {
    let n = charpoly.len() - 1;
    let ctx = alpha.ctx();
    let mut q = vec![ctx.zero(); n];
    let mut carry = charpoly[n];
    for i in (0..n).rev() {
        q[i] = carry;
        carry = charpoly[i].add(&carry.mul(alpha));
    }
    // the remainder is chi(alpha), zero for a refined eigenvalue
    debug_assert!(carry.is_zero(), "remainder {carry:?}");
    q
}

/// Horner evaluation of a matrix polynomial against a vector.
fn matrix_poly_apply(m: &Matrix, coeffs: &[PadicElem], v: &[PadicElem]) -> Vec<PadicElem> {
    let mut acc: Vec<PadicElem> = v.iter().map(|x| x.mul(&coeffs[coeffs.len() - 1])).collect();
    for c in coeffs.iter().rev().skip(1) {
        acc = m.mul_vec(&acc);
        for (a, x) in acc.iter_mut().zip(v) {
            *a = a.add(&x.mul(c));
        }
    }
    acc
}

/// The eigenline functional: the coefficient of f^alpha when G (given by
/// Katz coordinates) is written in a U-and-Hecke eigenbasis of the ordinary
/// part, normalized so lambda(f^alpha) = 1.
pub fn eigen_coefficient(
    data: &UpMatrixData,
    g_coords: &[PadicElem],
    f: &EigenformData,
) -> Result<PadicElem> {
    if !f.ordinary() {
        return Err(Error::NotOrdinary);
    }
    let alpha = f.roots.alpha.coeff.lift_to(data.ctx().prec());
    let alpha = refine_eigenvalue(&data.matrix.charpoly(), &alpha)?;
    let q = synthetic_quotient(&data.matrix.charpoly(), &alpha);
    let f_coords = data.coords(&f.stabilized)?;
    let y_g = matrix_poly_apply(&data.matrix, &q, g_coords);
    let y_f = matrix_poly_apply(&data.matrix, &q, &f_coords);
    // pick the reference index at minimal valuation of the f-image
    let (i0, v0) = y_f
        .iter()
        .enumerate()
        .map(|(i, x)| (i, x.valuation()))
        .min_by_key(|&(_, v)| v)
        .unwrap();
    if v0 >= data.ctx().prec() {
        return Err(Error::MultiplicityNotOne);
    }
    let denom_unit = y_f[i0].div_p_pow(v0)?;
    if y_g[i0].valuation() < v0 {
        return Err(Error::PrecisionExhausted(
            "eigen-coordinate is not integral at working precision".into(),
        ));
    }
    let lam = y_g[i0].div_p_pow(v0)?.mul(&denom_unit.invert()?);
    // multiplicity-one consistency: the whole image must be proportional
    for (a, b) in y_g.iter().zip(&y_f) {
        let lhs = a.truncate(lam.prec());
        let rhs = lam.mul(&b.truncate(lam.prec()));
        if !lhs.congruent(&rhs, lam.prec().saturating_sub(v0)) {
            return Err(Error::MultiplicityNotOne);
        }
    }
    Ok(lam)
}

/// The interpolation-formula Euler factors at an unbalanced crystalline
/// triple of weights (k, l, m), k >= l + m.
#[derive(Debug, Clone)]
pub struct EulerFactors {
    pub c: i64,
    pub t: i64,
    pub e: PadicElem,
    pub e0: PadicElem,
    pub e1: PadicElem,
}

impl EulerFactors {
    /// E / (E0 E1); the denominators are 1-units.
    pub fn normalized(&self) -> Result<PadicElem> {
        Ok(self.e.mul(&self.e0.invert()?).mul(&self.e1.invert()?))
    }
}

pub fn euler_factors(
    f: &EigenformData,
    g: &EigenformData,
    h: &EigenformData,
) -> Result<EulerFactors> {
    let (k, l, m) = (f.weight, g.weight, h.weight);
    if k < l + m || (k + l + m) % 2 != 0 {
        return Err(Error::NotUnbalanced);
    }
    let c = (k + l + m - 2) / 2;
    let t = (k - l - m) / 2;
    let one = ScaledElem::integral(f.a_p.ctx().one());
    let mut prod = f.a_p.ctx().one();
    for gr in [&g.roots.alpha, &g.roots.beta] {
        for hr in [&h.roots.alpha, &h.roots.beta] {
            let term = f.roots.beta.mul(gr).mul(hr);
            let term = ScaledElem { coeff: term.coeff, shift: term.shift - c };
            let factor = one.sub(&term).to_integral()?;
            prod = prod.mul(&factor);
        }
    }
    let e = ScaledElem::integral(prod);
    // E0 = 1 - beta^2 eps^{-1} p^{1-k}, E1 = 1 - beta^2 eps^{-1} p^{-k}
    let beta2 = f.roots.beta.mul(&f.roots.beta);
    let eps_inv = f.eps_p.truncate(beta2.coeff.prec()).invert()?;
    let base = beta2.mul_elem(&eps_inv);
    let e0 = one
        .sub(&ScaledElem { coeff: base.coeff, shift: base.shift + 1 - k })
        .to_integral()?;
    let e1 = one
        .sub(&ScaledElem { coeff: base.coeff, shift: base.shift - k })
        .to_integral()?;
    Ok(EulerFactors { c, t, e: e.to_integral()?, e0, e1 })
}

/// Which pipeline computes the twisted product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwistRoute {
    /// theta^t after p-depletion
    ThetaDeplete,
    /// the chi-twisted action with chi = x^t
    NablaChi,
}

/// Sizing of the L-value pipeline: the q-window of the matrix model, the
/// extra U-iterations applied before expanding in the basis, and the basis
/// dimension.
#[derive(Debug, Clone, Copy)]
pub struct PrecisionPlan {
    pub dim: usize,
    pub burn_in: u32,
    /// q-precision of the Katz basis (the matrix window is this over p)
    pub basis_qprec: usize,
}

impl PrecisionPlan {
    /// q-precision the product input must carry: the basis window times
    /// p^burn_in, plus one U-step for the matrix itself.
    pub fn input_qprec(&self, p: u64) -> usize {
        self.basis_qprec / p as usize * (p as usize).pow(self.burn_in) * p as usize
    }
}

/// lambda_f(e_ord(nu')) for nu' already assembled as a q-expansion of the
/// matrix weight: U-burn-in, expansion, ordinary projection, eigenline
/// functional, and the alpha^{-J} correction.
fn project_and_pair(
    data: &UpMatrixData,
    f: &EigenformData,
    nu: &QExpansion,
    burn_in: u32,
) -> Result<PadicElem> {
    let mut w = nu.clone();
    for _ in 0..burn_in {
        w = w.up()?;
    }
    let coords = data.coords(&w)?;
    let e = data.ordinary_idempotent()?;
    let y = e.mul_vec(&coords);
    let lam = eigen_coefficient(data, &y, f)?;
    let alpha_inv = f
        .roots
        .alpha
        .coeff
        .lift_to(lam.prec().max(1))
        .truncate(lam.prec())
        .invert()?
        .pow(burn_in as u64);
    Ok(lam.mul(&alpha_inv))
}

/// Triple product value at an unbalanced crystalline point:
/// lambda_f(e_ord(theta^t(g^{[p],alpha}) x h^alpha)).  The route-B twin
/// replaces theta^t after depletion by the x^t-twisted action.
pub fn triple_product_value(
    f: &EigenformData,
    g: &EigenformData,
    h: &EigenformData,
    plan: &PrecisionPlan,
    route: TwistRoute,
) -> Result<(PadicElem, EulerFactors)> {
    let ctx = f.form.ctx();
    let data = up_matrix(&ctx, f.weight, plan.dim, plan.basis_qprec)?;
    triple_product_value_with(&data, f, g, h, plan.burn_in, route)
}

/// Triple product value against a prebuilt U-matrix at the f-weight.
pub fn triple_product_value_with(
    data: &UpMatrixData,
    f: &EigenformData,
    g: &EigenformData,
    h: &EigenformData,
    burn_in: u32,
    route: TwistRoute,
) -> Result<(PadicElem, EulerFactors)> {
    let factors = euler_factors(f, g, h)?;
    if !f.ordinary() {
        return Err(Error::NotOrdinary);
    }
    let ctx = f.form.ctx();
    let t = factors.t as u64;
    let twisted = match route {
        TwistRoute::ThetaDeplete => g.stabilized.deplete().theta_pow(t),
        TwistRoute::NablaChi => g.stabilized.nabla_chi(&LocAnChar::integer_power(t, &ctx)),
    };
    let nu = twisted.mul(&h.stabilized);
    if nu.weight != Some(f.weight) {
        return Err(Error::BadInput(format!(
            "product weight {:?} does not match f-weight {}",
            nu.weight, f.weight
        )));
    }
    let value = project_and_pair(data, f, &nu, burn_in)?;
    Ok((value, factors))
}

/// Rankin-Selberg value lambda_f(e_ord(theta^t E^{[p]}_{k2} x h^alpha)) with
/// k1 = k2 + k3 + 2t.  Odd k2 at conductor 1 yields the zero series; the
/// value 0 is returned with the flag set.
pub struct RankinValue {
    pub value: PadicElem,
    pub t: i64,
    pub zero_eisenstein: bool,
}

pub fn rankin_value(
    f: &EigenformData,
    k2: u64,
    h: &EigenformData,
    plan: &PrecisionPlan,
    route: TwistRoute,
) -> Result<RankinValue> {
    let ctx = f.form.ctx();
    let data = up_matrix(&ctx, f.weight, plan.dim, plan.basis_qprec)?;
    rankin_value_with(&data, f, k2, h, plan, route)
}

/// Rankin-Selberg value against a prebuilt U-matrix at the f-weight.
pub fn rankin_value_with(
    data: &UpMatrixData,
    f: &EigenformData,
    k2: u64,
    h: &EigenformData,
    plan: &PrecisionPlan,
    route: TwistRoute,
) -> Result<RankinValue> {
    if !f.ordinary() {
        return Err(Error::NotOrdinary);
    }
    let ctx = f.form.ctx();
    let k1 = f.weight;
    let k3 = h.weight;
    let two_t = k1 - k2 as i64 - k3;
    if two_t < 0 || two_t % 2 != 0 {
        return Err(Error::NotUnbalanced);
    }
    let t = two_t / 2;
    let qin = plan.input_qprec(ctx.p());
    let e_series = eis_family_specialize(k2, 1, &ctx, qin)?;
    if e_series.series.is_zero() {
        return Ok(RankinValue { value: ctx.zero(), t, zero_eisenstein: true });
    }
    let twisted = match route {
        TwistRoute::ThetaDeplete => e_series.theta_pow(t as u64),
        TwistRoute::NablaChi => e_series.nabla_chi(&LocAnChar::integer_power(t as u64, &ctx)),
    };
    let nu = twisted.mul(&h.stabilized);
    if nu.weight != Some(k1) {
        return Err(Error::BadInput(format!(
            "product weight {:?} does not match k1 = {k1}",
            nu.weight
        )));
    }
    let value = project_and_pair(data, f, &nu, plan.burn_in)?;
    Ok(RankinValue { value, t, zero_eisenstein: false })
}

/// The U-burned twisted product assembled for inspection: the coordinates of
/// U^{burn_in}(theta^t E^{[p]}_{k2} x h^alpha) in the Katz basis.
pub fn rankin_product_coords(
    data: &UpMatrixData,
    k2: u64,
    t: u64,
    h: &EigenformData,
    plan: &PrecisionPlan,
    route: TwistRoute,
) -> Result<Vec<PadicElem>> {
    let ctx = data.ctx();
    let qin = plan.input_qprec(ctx.p());
    let e_series = eis_family_specialize(k2, 1, &ctx, qin)?;
    let twisted = match route {
        TwistRoute::ThetaDeplete => e_series.theta_pow(t),
        TwistRoute::NablaChi => e_series.nabla_chi(&LocAnChar::integer_power(t, &ctx)),
    };
    let mut w = twisted.mul(&h.stabilized);
    for _ in 0..plan.burn_in {
        w = w.up()?;
    }
    data.coords(&w)
}

/// Classical Hecke-projection coefficient of a cusp form onto the eigenform
/// branch with the given a_2 residue: solved in the Victor Miller basis with
/// no U-iteration anywhere (the independent oracle for the t = 0 anchor).
pub fn classical_eigen_coefficient(
    target: &QExpansion,
    k: i64,
    branch_a2: &PadicElem,
) -> Result<PadicElem> {
    let ctx = target.ctx();
    let eigen = cusp_eigenforms(k, &ctx, target.qprec().min(64))?;
    let r = eigen.len();
    if r == 0 {
        return Err(Error::BadInput("no cusp forms at this weight".into()));
    }
    let mut m = Matrix::zero(ctx, r, r);
    for (j, f) in eigen.iter().enumerate() {
        for i in 0..r {
            m[(i, j)] = f.coeff(i + 1);
        }
    }
    let b: Vec<PadicElem> = (0..r).map(|i| target.coeff(i + 1)).collect();
    let (x, _digits) = crate::linalg::solve(&m, &b)?;
    // verify the expansion beyond the solve window
    let mut recon = QSeries::zero(ctx, target.qprec().min(eigen[0].qprec()));
    for (c, f) in x.iter().zip(&eigen) {
        recon = recon.add(&f.series.truncate_q(recon.qprec()).scal(c));
    }
    if !recon.congruent_shared(&target.series.truncate_q(recon.qprec())) {
        return Err(Error::NotInSpan(0));
    }
    for (c, f) in x.iter().zip(&eigen) {
        if f.coeff(2).congruent_shared(branch_a2) {
            return Ok(*c);
        }
    }
    Err(Error::BadInput("no eigenform branch with the requested a_2".into()))
}

/// Locate a prime p <= 50 where the weight-k level-1 Hecke field splits and
/// some cuspidal branch is ordinary; returns the context-ready prime and the
/// branch index among the a_2-sorted eigenforms.
pub fn locate_ordinary_split_prime(k: i64, prec: u32, qprec: usize) -> Result<(u64, usize)> {
    for p in [5u64, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let Ok(ctx) = PadicCtx::new(p, prec) else { continue };
        let Ok(forms) = cusp_eigenforms(k, &ctx, qprec) else { continue };
        if forms.len() != dim_mk(k) - 1 {
            continue;
        }
        for (idx, f) in forms.iter().enumerate() {
            if f.coeff(p as usize).valuation() == 0 {
                return Ok((p, idx));
            }
        }
    }
    Err(Error::BadInput(format!(
        "no split ordinary prime below 50 for weight {k}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qexp::{delta, p_stabilize, RootChoice};

    fn ctx(p: u64, m: u32) -> PadicCtx {
        PadicCtx::new(p, m).unwrap()
    }

    #[test]
    fn up_matrix_one_dimensional() {
        // k = 4, p = 5, d = 1: the single basis element is E_4 and the matrix
        // entry is directly recomputable
        let c = ctx(5, 8);
        let data = up_matrix(&c, 4, 1, 40).unwrap();
        assert_eq!(data.dim, 1);
        let e4 = eisenstein(4, &c, 40).unwrap();
        assert!(data.basis[0].congruent_shared(&e4));
        let ue = e4.up().unwrap();
        let expect = data.basis[0].scal(&data.matrix[(0, 0)]);
        assert!(ue.congruent(&expect, data.certified));
        // char series: 1 - a t
        assert!(data.char_series[0].congruent_shared(&c.one()));
        assert!(data.char_series[1].congruent_shared(&data.matrix[(0, 0)].neg()));
    }

    #[test]
    fn ordinary_projector_fixes_unit_root_eisenstein() {
        let c = ctx(5, 8);
        let e12 = eisenstein(12, &c, 300).unwrap();
        let st = p_stabilize(&e12, RootChoice::Unit).unwrap();
        let data = up_matrix(&c, 12, 10, 280).unwrap();
        let proj = ordinary_project(&data, &st.form).unwrap();
        let window = data.q_window.min(proj.qprec());
        let digits_cap = data.certified.min(6);
        assert!(
            proj.series
                .truncate_q(window)
                .congruent(&st.form.series.truncate_q(window), digits_cap),
            "certified = {}",
            data.certified
        );
    }

    #[test]
    fn ordinary_projector_kills_beta_stabilization() {
        let c = ctx(5, 8);
        let e12 = eisenstein(12, &c, 300).unwrap();
        // beta-stabilization E - alpha V E with alpha = 1: U-eigenvalue p^{k-1}
        let beta_stab = e12.sub(&e12.v_op()).unwrap();
        let data = up_matrix(&c, 12, 10, 280).unwrap();
        let proj = ordinary_project(&data, &beta_stab).unwrap();
        let digits = data.certified.min(6);
        assert!(proj.series.congruent(&QSeries::zero(c, proj.qprec()), digits));
    }

    #[test]
    fn eigen_functional_normalization_and_linearity() {
        let c = ctx(11, 6);
        let qp = 11 * 36;
        let d = delta(&c, qp);
        let fdat = EigenformData::from_eigenform(&d, RootChoice::Unit).unwrap();
        let e12 = eisenstein(12, &c, qp).unwrap();
        let edat = EigenformData::from_eigenform(&e12, RootChoice::Unit).unwrap();
        let data = up_matrix(&c, 12, 6, qp).unwrap();
        // lambda(f^alpha) = 1
        let xf = data.coords(&fdat.stabilized).unwrap();
        let one = eigen_coefficient(&data, &xf, &fdat).unwrap();
        assert!(one.congruent(&c.one(), one.prec().min(4)), "got {one:?}");
        // lambda(g^alpha) = 0 for the Eisenstein line
        let xe = data.coords(&edat.stabilized).unwrap();
        let zero = eigen_coefficient(&data, &xe, &fdat).unwrap();
        assert!(zero.valuation() >= zero.prec().min(4), "got {zero:?}");
        // linearity: lambda(2 f^alpha + 5 g^alpha) = 2
        let combo: Vec<PadicElem> = xf
            .iter()
            .zip(&xe)
            .map(|(a, b)| a.mul(&c.from_u64(2)).add(&b.mul(&c.from_u64(5))))
            .collect();
        let lam = eigen_coefficient(&data, &combo, &fdat).unwrap();
        assert!(lam.congruent(&c.from_u64(2), lam.prec().min(4)), "got {lam:?}");
    }

    #[test]
    fn euler_factor_valuations() {
        let c = ctx(11, 8);
        let d = delta(&c, 200);
        let fdat = EigenformData::from_eigenform(&d, RootChoice::Unit).unwrap();
        // (k, l, m) = (26, 12, 12) has c = 24... use a weight-26 Eisenstein f
        let e26 = eisenstein(26, &c, 200).unwrap();
        let f26 = EigenformData::from_eigenform(&e26, RootChoice::Unit).unwrap();
        let fac = euler_factors(&f26, &fdat, &fdat).unwrap();
        assert_eq!(fac.c, 24);
        assert_eq!(fac.t, 1);
        // ordinary f: E0 = 1 mod p, E1 = 1 mod p; t >= 1 makes E a 1-unit too
        assert!(fac.e0.congruent(&c.one(), 1));
        assert!(fac.e1.congruent(&c.one(), 1));
        assert!(fac.e.congruent(&c.one(), 1));
        // v_11(beta_Delta) = 11: E_1(Delta-like data) would be 1 mod 11^10;
        // here check E1 of f has valuation gap k-2 = 24
        assert!(fac.e1.sub(&c.one()).valuation() >= 8.min(c.prec()));
    }

    #[test]
    fn ordinary_idempotent_commutes_with_hecke() {
        // T_2 preserves the weight-12 overconvergent space; on the truncated
        // model e_ord and T_2 commute to certified digits
        let c = ctx(5, 8);
        let d = 8usize;
        let qb = 2 * 5 * (d + 8);
        let data = up_matrix(&c, 12, d, qb).unwrap();
        let window = data.q_window;
        let mut t2 = Matrix::zero(c, d, d);
        let mut min_res = c.prec();
        for (j, b) in data.basis.iter().enumerate() {
            let tb = b.hecke(2).unwrap();
            let (coords, res) = express_in_basis(&tb.series, &data.basis, window.min(tb.qprec()));
            min_res = min_res.min(res);
            for (i, x) in coords.iter().enumerate() {
                t2[(i, j)] = *x;
            }
        }
        assert!(min_res >= 2, "T_2 matrix uncertified: {min_res}");
        let e = data.ordinary_idempotent().unwrap();
        let lhs = e.mul(&t2);
        let rhs = t2.mul(&e);
        assert!(lhs.congruent(&rhs, min_res.min(data.certified).min(4)));
    }

    #[test]
    fn rankin_zero_eisenstein_flag() {
        // odd k2 at conductor 1: the family member vanishes and the value is
        // flagged zero
        let c = ctx(5, 6);
        let q = 400usize;
        let e14 = eisenstein(14, &c, q).unwrap();
        let f = EigenformData::from_eigenform(&e14, RootChoice::Unit).unwrap();
        let d = delta(&c, q);
        let h = EigenformData::from_eigenform(&d, RootChoice::NonUnit).unwrap();
        let plan = PrecisionPlan { dim: 5, burn_in: 1, basis_qprec: 5 * 12 };
        let rv = rankin_value(&f, 1, &h, &plan, TwistRoute::ThetaDeplete).unwrap();
        assert!(rv.zero_eisenstein);
        assert!(rv.value.is_zero());
        assert_eq!(rv.t, 0);
    }

    #[test]
    fn parity_violation_rejected() {
        let c = ctx(11, 6);
        let d = delta(&c, 100);
        let fdat = EigenformData::from_eigenform(&d, RootChoice::Unit).unwrap();
        let e16 = eisenstein(16, &c, 100).unwrap();
        let f16 = EigenformData::from_eigenform(&e16, RootChoice::Unit).unwrap();
        // (16, 12, 12): k < l + m
        assert!(matches!(
            euler_factors(&f16, &fdat, &fdat),
            Err(Error::NotUnbalanced)
        ));
    }
}
