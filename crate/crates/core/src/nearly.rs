//! The finite-degree model of nearly overconvergent forms: vectors of
//! q-expansions filtered by degree, the vector action of the connection with
//! its graded factors, restriction to p-adic forms, and the overconvergent
//! projector with its weight poles.
//!
//! In splitting-adapted coordinates a degree-r form of weight k is the vector
//! (g_0, ..., g_r) with g_j of weight k - 2j, and the connection acts by
//! (nabla F)_j = theta(g_j) + c_j g_{j-1}.  The scalars c_j are not
//! hard-coded: they are read off the nilpotent model, where the weight-k
//! degree-b slot is realized by the monomial X^{k-b} Y^b and the Y-raising
//! coefficient of nabla_theta is literally the X-degree.  The frozen linear
//! law is c_j(k) = k - (j - 1), cross-checked against the model in the tests;
//! its zeros are exactly the projector's weight poles.

use crate::error::{Error, Result};
use crate::interp::{nabla_theta, NilpotentElem};
use crate::padic::{PadicCtx, PadicElem};
use crate::qexp::QExpansion;
use crate::series::QSeries;

/// Degree-r vector of q-expansions modeling the r-th filtration step.
#[derive(Debug, Clone)]
pub struct FilteredForm {
    pub weight: i64,
    /// components g_0..g_r; g_j carries weight k - 2j
    pub components: Vec<QExpansion>,
}

/// Scalars by which the connection maps the (j-1)-slot of a weight-k form
/// into the j-slot, for j = 1..=r.
#[derive(Debug, Clone)]
pub struct GradedFactorTable {
    pub weight: i64,
    pub factors: Vec<PadicElem>,
}

impl GradedFactorTable {
    /// The frozen linear law c_j = u_k - (j-1) with u_k = k.
    pub fn for_weight(weight: i64, r: usize, ctx: &PadicCtx) -> GradedFactorTable {
        let factors = (1..=r as i64).map(|j| ctx.from_i64(weight - (j - 1))).collect();
        GradedFactorTable { weight, factors }
    }

    /// c_j (1-based).
    pub fn factor(&self, j: usize) -> PadicElem {
        self.factors[j - 1]
    }
}

/// Read the Y-degree-raising scalar of nabla_theta on the weight-k degree-b
/// isotypic monomial X^{k-b} Y^b in the m = 0 model: the coefficient of
/// X^{k-b-1} Y^{b+1}.  Defined for k > b.
pub fn raising_scalar_from_model(
    weight: i64,
    b: usize,
    ctx: &PadicCtx,
) -> Result<PadicElem> {
    if weight <= b as i64 {
        return Err(Error::BadInput(format!(
            "model monomial needs weight > degree, got k = {weight}, b = {b}"
        )));
    }
    let a = (weight - b as i64) as usize;
    let one = QSeries::one(*ctx, 1);
    let mono = NilpotentElem::from_xyz_monomial(&one, a, b, 0, 0, a + b + 1)?;
    let image = nabla_theta(&mono);
    let coeff = image
        .terms()
        .get(&(a - 1, b + 1, 0))
        .map(|s| s.coeff(0))
        .unwrap_or_else(|| ctx.zero());
    Ok(coeff)
}

impl FilteredForm {
    pub fn degree(&self) -> usize {
        self.components.len() - 1
    }

    pub fn ctx(&self) -> PadicCtx {
        self.components[0].ctx()
    }

    /// Embed a p-adic form as a degree-0 filtered form.
    pub fn from_padic(g: &QExpansion) -> Result<FilteredForm> {
        let Some(k) = g.weight else {
            return Err(Error::BadInput("filtered forms need weight tags".into()));
        };
        Ok(FilteredForm { weight: k, components: vec![g.clone()] })
    }

    pub fn new(weight: i64, components: Vec<QExpansion>) -> Result<FilteredForm> {
        if components.is_empty() {
            return Err(Error::BadInput("a filtered form needs >= 1 component".into()));
        }
        for (j, g) in components.iter().enumerate() {
            if let Some(w) = g.weight {
                if w != weight - 2 * j as i64 {
                    return Err(Error::WeightMismatch(w, weight - 2 * j as i64));
                }
            }
        }
        Ok(FilteredForm { weight, components })
    }

    /// Zero-pad into a deeper filtration step.
    pub fn pad_to_degree(&self, r: usize) -> FilteredForm {
        let mut components = self.components.clone();
        let ctx = self.ctx();
        let q = self.components[0].qprec();
        while components.len() <= r {
            let j = components.len() as i64;
            components.push(QExpansion::new(
                QSeries::zero(ctx, q),
                Some(self.weight - 2 * j),
                self.components[0].level,
            ));
        }
        FilteredForm { weight: self.weight, components }
    }

    pub fn sub(&self, other: &FilteredForm) -> Result<FilteredForm> {
        if self.weight != other.weight {
            return Err(Error::WeightMismatch(self.weight, other.weight));
        }
        let r = self.degree().max(other.degree());
        let a = self.pad_to_degree(r);
        let b = other.pad_to_degree(r);
        let components: Result<Vec<_>> = a
            .components
            .iter()
            .zip(&b.components)
            .map(|(x, y)| x.sub(y))
            .collect();
        Ok(FilteredForm { weight: self.weight, components: components? })
    }

    /// The Y = 0 slot in splitting coordinates: the q-expansion shadow.
    pub fn restriction(&self) -> QExpansion {
        self.components[0].clone()
    }

    /// Griffiths-transversal connection action:
    /// (nabla F)_j = theta(g_j) + c_j g_{j-1}, with the graded factors of
    /// this form's weight; degree rises by 1 and weight by 2.
    pub fn nabla(&self) -> Result<FilteredForm> {
        let r = self.degree();
        let ctx = self.ctx();
        let table = GradedFactorTable::for_weight(self.weight, r + 1, &ctx);
        let mut components = Vec::with_capacity(r + 2);
        for j in 0..=r + 1 {
            let mut slot = if j <= r {
                let t = self.components[j].theta();
                QExpansion { weight: Some(self.weight + 2 - 2 * j as i64), ..t }
            } else {
                QExpansion::new(
                    QSeries::zero(ctx, self.components[0].qprec()),
                    Some(self.weight + 2 - 2 * j as i64),
                    self.components[0].level,
                )
            };
            if j >= 1 {
                let lower = self.components[j - 1].scal(&table.factor(j));
                slot = slot.add(&QExpansion {
                    weight: slot.weight,
                    ..lower
                })?;
            }
            components.push(slot);
        }
        FilteredForm::new(self.weight + 2, components)
    }
}

/// Overconvergent projection: strip graded pieces top-down.  At each step the
/// top slot F_j is divided by the graded factor c_j of the weight-(k-2)
/// auxiliary form, so the poles sit exactly where those factors vanish
/// (k = j + 1 for the j-th division).  Divisions by factors of positive
/// valuation charge the ledger; a factor vanishing at working precision is a
/// pole.  Returns the degree-0 remainder.
pub fn oc_projection(f: &FilteredForm) -> Result<QExpansion> {
    let ctx = f.ctx();
    let mut cur = f.clone();
    for j in (1..=f.degree()).rev() {
        let top = cur.components[j].clone();
        if top.series.is_zero() {
            cur.components.truncate(j);
            continue;
        }
        let c_j = GradedFactorTable::for_weight(f.weight - 2, j, &ctx).factor(j);
        let v = c_j.valuation();
        if v >= ctx.prec() {
            return Err(Error::PoleAtWeight(j));
        }
        // G is the degree-(j-1), weight-(k-2) form with only the top slot set
        let g_top = if v == 0 {
            top.scal(&c_j.invert()?)
        } else {
            // divide every coefficient exactly by c_j = p^v * unit
            let unit_inv = c_j.div_p_pow(v)?.invert()?;
            let coeffs: Result<Vec<_>> = top
                .series
                .coeffs()
                .iter()
                .map(|a| {
                    if a.valuation() < v {
                        Err(Error::PrecisionExhausted(format!(
                            "graded factor with valuation {v} does not divide slot {j}"
                        )))
                    } else {
                        Ok(a.div_p_pow(v)?.mul(&unit_inv))
                    }
                })
                .collect();
            QExpansion {
                series: QSeries::from_coeffs(coeffs?, ctx.with_prec(ctx.prec() - v)),
                weight: top.weight,
                level: top.level,
                eps_p: top.eps_p,
            }
        };
        let mut g_components = Vec::with_capacity(j);
        for i in 0..j {
            let w = Some(f.weight - 2 - 2 * i as i64);
            if i + 1 == j {
                g_components.push(QExpansion { weight: w.map(|x| x), ..g_top.clone() });
            } else {
                g_components.push(QExpansion::new(
                    QSeries::zero(g_top.ctx(), g_top.qprec()),
                    w,
                    g_top.level,
                ));
            }
        }
        let g = FilteredForm { weight: f.weight - 2, components: g_components };
        let correction = g.nabla()?;
        cur = cur.sub(&correction)?;
        debug_assert!(cur.components[j].series.min_valuation() >= cur.components[j].series.min_prec());
        cur.components.truncate(j);
    }
    Ok(cur.components[0].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qexp::{delta, eisenstein};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ctx() -> PadicCtx {
        PadicCtx::new(5, 8).unwrap()
    }

    fn random_form(k: i64, q: usize, ctx: &PadicCtx, rng: &mut ChaCha8Rng) -> QExpansion {
        let coeffs = (0..q).map(|_| ctx.from_u64(rng.gen_range(0..ctx.modulus()))).collect();
        QExpansion::new(QSeries::from_coeffs(coeffs, *ctx), Some(k), 1)
    }

    #[test]
    fn factors_match_model() {
        let c = ctx();
        for k in 3i64..=12 {
            let table = GradedFactorTable::for_weight(k, 3, &c);
            for j in 1..=3usize {
                if k > (j as i64 - 1) {
                    let model = raising_scalar_from_model(k, j - 1, &c).unwrap();
                    assert!(table.factor(j).congruent_shared(&model), "k={k} j={j}");
                }
            }
        }
    }

    #[test]
    fn degree_zero_nabla() {
        let c = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = random_form(6, 8, &c, &mut rng);
        let f = FilteredForm::from_padic(&g).unwrap();
        let nf = f.nabla().unwrap();
        assert_eq!(nf.degree(), 1);
        assert_eq!(nf.weight, 8);
        // (theta g, c_1 g) with c_1 = u_6 - 0 = 6
        assert!(nf.components[0].congruent_shared(&g.theta()));
        assert!(nf.components[1].congruent_shared(&g.scal(&c.from_u64(6))));
    }

    #[test]
    fn restriction_intertwines_nabla_with_theta() {
        let c = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let k = rng.gen_range(2..20);
            let r = rng.gen_range(0..3usize);
            let comps: Vec<_> = (0..=r)
                .map(|j| random_form(k - 2 * j as i64, 6, &c, &mut rng))
                .collect();
            let f = FilteredForm::new(k, comps).unwrap();
            let lhs = f.nabla().unwrap().restriction();
            let rhs = f.restriction().theta();
            assert!(lhs.congruent_shared(&rhs));
            assert_eq!(f.nabla().unwrap().degree(), f.degree() + 1);
        }
    }

    #[test]
    fn projection_identity_on_degree_zero() {
        let c = ctx();
        let e = eisenstein(4, &c, 12).unwrap();
        let f = FilteredForm::from_padic(&e).unwrap();
        assert!(oc_projection(&f).unwrap().congruent_shared(&e));
    }

    #[test]
    fn projection_kills_exact_nabla_images() {
        let c = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        // weight of G chosen so c_1 = u_k is a unit
        for k in [6i64, 7, 9, 13] {
            let g = random_form(k, 8, &c, &mut rng);
            let f = FilteredForm::from_padic(&g).unwrap().nabla().unwrap();
            let proj = oc_projection(&f).unwrap();
            // remainder theta(g) - theta(g) = 0
            assert!(proj.series.congruent(&QSeries::zero(c, 8), proj.series.min_prec()));
        }
    }

    #[test]
    fn projection_of_shifted_image_recovers_summand() {
        let c = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        // F = nabla(G) + embed(h): projector returns h exactly
        let g = random_form(10, 8, &c, &mut rng);
        let h = random_form(12, 8, &c, &mut rng);
        let f = FilteredForm::from_padic(&g)
            .unwrap()
            .nabla()
            .unwrap()
            .sub(&FilteredForm::from_padic(&h).unwrap().pad_to_degree(1))
            .unwrap();
        let proj = oc_projection(&f).unwrap();
        assert!(proj.congruent_shared(&h.scal(&c.one().neg())));
    }

    #[test]
    fn pole_locus_matches_vanishing_factors() {
        let c = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let r = 3usize;
        let mut observed = Vec::new();
        for k in 0i64..=30 {
            let comps: Vec<_> = (0..=r)
                .map(|j| random_form(k - 2 * j as i64, 6, &c, &mut rng))
                .collect();
            let f = FilteredForm::new(k, comps).unwrap();
            match oc_projection(&f) {
                Err(Error::PoleAtWeight(_)) => observed.push(k),
                Ok(_) | Err(Error::PrecisionExhausted(_)) => {}
                Err(e) => panic!("unexpected error at k = {k}: {e}"),
            }
        }
        // poles where some c_j(k-2) = k - j - 1 vanishes, j <= r
        let expected: Vec<i64> = (0..=30)
            .filter(|k| (1..=r as i64).any(|j| k - j - 1 == 0))
            .collect();
        assert_eq!(observed, expected);
    }

    #[test]
    fn graded_step_through_delta() {
        // nabla on the degree-0 delta slot lands in slot 1 with factor u_12
        let c = ctx();
        let d = delta(&c, 12);
        let f = FilteredForm::from_padic(&d).unwrap();
        let nf = f.nabla().unwrap();
        assert!(nf.components[1].congruent_shared(&d.scal(&c.from_u64(12))));
    }
}
