//! Self-test suites behind the CLI `selftest` subcommand: condensed,
//! deterministic versions of the per-module invariants, each returning a
//! pass/fail with timing.  The full acceptance run lives in the integration
//! tests; this is the operational smoke matrix.

use std::time::Instant;

use num_rational::Ratio;

use crate::error::Result;
use crate::interp::{
    falling_factorial_apply, lemma_formula_rhs, measure_gauge, nabla_theta, perturbation_check,
    BanachElem, NilpotentElem, OcChain,
};
use crate::mahler::{char_eval, finite_difference_coeffs, nu_exponent, rho_bruteforce, LocAnChar};
use crate::nearly::{raising_scalar_from_model, FilteredForm, GradedFactorTable};
use crate::padic::{hensel_root, teichmuller, PadicCtx, PadicElem};
use crate::qexp::{eisenstein, victor_miller, QExpansion};
use crate::series::QSeries;

pub struct CheckResult {
    pub module: &'static str,
    pub name: &'static str,
    pub ok: bool,
    pub detail: String,
    pub ms: u128,
}

struct Check {
    module: &'static str,
    name: &'static str,
    run: fn(bool) -> Result<()>,
}

// deterministic linear-congruential stream; good enough for smoke inputs
fn lcg(state: &mut u64) -> u64 {
    *state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    *state >> 33
}

fn random_series(ctx: PadicCtx, q: usize, state: &mut u64) -> QSeries {
    let coeffs = (0..q).map(|_| ctx.from_u64(lcg(state) % ctx.modulus())).collect();
    QSeries::from_coeffs(coeffs, ctx)
}

fn check_teichmuller(_fast: bool) -> Result<()> {
    for p in [3u64, 5, 7, 11] {
        let ctx = PadicCtx::new(p, 6)?;
        for x in 1..p {
            let t = teichmuller(x, &ctx)?;
            anyhow(t.pow(p - 1) == ctx.one(), "teichmuller power")?;
        }
    }
    Ok(())
}

fn check_hensel(_fast: bool) -> Result<()> {
    let ctx = PadicCtx::new(7, 6)?;
    let b = ctx.from_i64(-5);
    let c = ctx.from_u64(6);
    let r1 = hensel_root(&b, &c, 2)?;
    let r2 = hensel_root(&b, &c, 3)?;
    anyhow(r1.mul(&r2) == c, "root product = constant term")?;
    anyhow(r1.add(&r2) == b.neg(), "root sum = -linear term")
}

fn check_nu_table(_fast: bool) -> Result<()> {
    for p in [2u64, 3, 5] {
        for n in 1..=5u32 {
            for m in 0..=n {
                anyhow(
                    nu_exponent(n, m, p) == rho_bruteforce(n, m, p),
                    "nu closed form vs brute force",
                )?;
                if m < n {
                    anyhow(
                        nu_exponent(n, m + 1, p) - nu_exponent(n, m, p) == p.pow(n - (m + 1)),
                        "nu recurrence",
                    )?;
                }
            }
        }
    }
    Ok(())
}

fn check_mahler_roundtrip(fast: bool) -> Result<()> {
    let mut st = 17u64;
    for p in [2u64, 3, 5, 7] {
        let ctx = PadicCtx::new(p, 6)?;
        let k = if fast { 16 } else { 48 };
        let vals: Vec<PadicElem> =
            (0..k).map(|_| ctx.from_u64(lcg(&mut st) % ctx.modulus())).collect();
        let f = finite_difference_coeffs(&vals, ctx);
        for (i, v) in vals.iter().enumerate() {
            anyhow(f.eval(&ctx.from_u64(i as u64)) == *v, "mahler roundtrip")?;
        }
    }
    Ok(())
}

fn check_char_mult(fast: bool) -> Result<()> {
    let mut st = 23u64;
    let trials = if fast { 20 } else { 100 };
    for p in [3u64, 5] {
        let ctx = PadicCtx::new(p, 5)?;
        let chi = LocAnChar::new(1, ctx.from_u64(7));
        for _ in 0..trials {
            let a = 1 + lcg(&mut st) % (ctx.modulus() - 1);
            let b = 1 + lcg(&mut st) % (ctx.modulus() - 1);
            if a % p == 0 || b % p == 0 {
                continue;
            }
            let ab = ctx.from_u64(a).mul(&ctx.from_u64(b));
            let lhs = char_eval(&chi, ab.residue(), &ctx)?;
            let rhs = char_eval(&chi, a, &ctx)?.mul(&char_eval(&chi, b, &ctx)?);
            anyhow(lhs == rhs, "character multiplicativity")?;
        }
    }
    Ok(())
}

fn check_oracle_sweep(fast: bool) -> Result<()> {
    let mut st = 31u64;
    let kmax = if fast { 4 } else { 8 };
    for p in [3u64, 5] {
        let ctx = PadicCtx::new(p, 8)?;
        for m in [1u32, 2] {
            for a in 0..=3usize {
                for b in 0..=(3 - a) {
                    for cdeg in 0..=(3 - a - b).min(1) {
                        for k in 0..=kmax {
                            let s = random_series(ctx, 8, &mut st);
                            let x = NilpotentElem::from_xyz_monomial(&s, a, b, cdeg, m, 10)?;
                            let lhs = falling_factorial_apply(&nabla_theta, k, &x, &ctx)?;
                            let rhs = lemma_formula_rhs(&s, a, b, cdeg, k, m, 10)?;
                            anyhow(
                                lhs.congruent_shared(&rhs),
                                "combinatorial formula oracle",
                            )?;
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn check_norm_tables(_fast: bool) -> Result<()> {
    let ctx = PadicCtx::new(5, 8)?;
    let mut st = 37u64;
    let mut tables = Vec::new();
    for m in [1u32, 2] {
        let mut gens = Vec::new();
        for (a, b, c) in [(0, 0, 0), (1, 0, 0), (0, 1, 0), (2, 1, 0), (1, 1, 1)] {
            let s = random_series(ctx, 6, &mut st);
            // unit-ball generators need a unit coefficient somewhere
            let mut s = s;
            s.set_coeff(0, ctx.one());
            gens.push(NilpotentElem::rescaled_monomial(s, a, b, c, m, 12)?);
        }
        let gauge = measure_gauge(&nabla_theta, &gens, 9, Ratio::new(1, 2), &ctx)?;
        // integrality: the derivation does not increase the sup-norm
        for g in &gens {
            let img = nabla_theta(g);
            anyhow(
                img.min_valuation() >= g.min_valuation().min(0),
                "nabla preserves the unit ball",
            )?;
        }
        tables.push(gauge.norm_exps);
    }
    anyhow(tables[0] == tables[1], "norm table independent of m")
}

fn check_perturbation(fast: bool) -> Result<()> {
    let ctx = PadicCtx::new(5, 10)?;
    let mut st = 41u64;
    let mut gens = Vec::new();
    for (a, b) in [(0usize, 0usize), (1, 0), (0, 1)] {
        let mut s = random_series(ctx, 4, &mut st);
        s.set_coeff(0, ctx.one());
        gens.push(NilpotentElem::rescaled_monomial(s, a, b, 0, 1, 8)?);
    }
    let w = {
        let mut s = random_series(ctx, 4, &mut st);
        s.set_coeff(0, ctx.one());
        s
    };
    let t2 = move |v: &NilpotentElem| v.scal(&w.coeff(0)).add(&v.scal(&w.coeff(1)));
    let kmax = if fast { 10 } else { 20 };
    let report =
        perturbation_check(&nabla_theta, &t2, &gens, Ratio::new(1, 2), None, kmax, &ctx)?;
    anyhow(report.pass, "perturbation bound at the threshold")
}

fn check_oc_chain(_fast: bool) -> Result<()> {
    let chain = OcChain::synthesize(
        Ratio::from_integer(1),
        Ratio::from_integer(1),
        Ratio::new(1, 4),
        5,
        40,
    );
    let rep =
        crate::interp::overconvergence_bound_check(&chain, Ratio::new(1, 2), Ratio::new(9, 10));
    anyhow(rep.pass, "overconvergence estimate")?;
    let bad =
        crate::interp::overconvergence_bound_check(&chain, Ratio::new(1, 4), Ratio::new(1, 2));
    anyhow(!bad.coef_positive, "gamma = eps must fail")
}

fn check_commutation(fast: bool) -> Result<()> {
    let mut st = 47u64;
    let trials = if fast { 10 } else { 100 };
    for p in [2u64, 3, 5, 11] {
        let ctx = PadicCtx::new(p, 6)?;
        for _ in 0..trials {
            let q = 2 * p as usize + (lcg(&mut st) % 8) as usize;
            let f = QExpansion::new(random_series(ctx, q * p as usize, &mut st), None, 1);
            let phi_seed = lcg(&mut st);
            let phi = |n: u64| ctx.from_u64((n.wrapping_mul(phi_seed) >> 7) % ctx.modulus());
            let phip = |n: u64| phi(p * n);
            // U phi = phi(p -) U
            let lhs = f.cont_action(phi).up()?;
            let rhs = f.up()?.cont_action(phip);
            anyhow(lhs.congruent_shared(&rhs), "U phi = phi(p-) U")?;
            // phi V = V phi(p -)
            let lhs = f.v_op().cont_action(phi);
            let rhs = f.cont_action(phip).v_op();
            anyhow(lhs.congruent_shared(&rhs), "phi V = V phi(p-)")?;
            // depletion = 1 - V U = indicator action, idempotent
            let dep = f.deplete();
            let via = f.sub(&f.up()?.v_op())?;
            anyhow(dep.congruent_shared(&via), "deplete = 1 - V U")?;
            anyhow(dep.deplete().congruent_shared(&dep), "deplete idempotent")?;
        }
    }
    Ok(())
}

fn check_classical_bases(_fast: bool) -> Result<()> {
    let ctx = PadicCtx::new(7, 8)?;
    let e4 = eisenstein(4, &ctx, 20)?;
    let e8 = eisenstein(8, &ctx, 20)?;
    anyhow(e4.mul(&e4).congruent_shared(&e8), "E4^2 = E8")?;
    let vm = victor_miller(12, &ctx, 24)?;
    anyhow(vm.len() == 2, "dim M_12 = 2")?;
    let d = crate::qexp::delta(&ctx, 24);
    anyhow(vm[1].congruent_shared(&d), "cuspidal member of VM(12) is delta")?;
    let t2 = d.hecke(2)?;
    anyhow(
        t2.congruent_shared(&d.scal(&ctx.from_i64(-24))),
        "T_2 delta = -24 delta",
    )
}

fn check_graded_factors(_fast: bool) -> Result<()> {
    let ctx = PadicCtx::new(5, 8)?;
    for k in 3i64..=10 {
        let table = GradedFactorTable::for_weight(k, 2, &ctx);
        for j in 1..=2usize {
            if k > j as i64 - 1 {
                let model = raising_scalar_from_model(k, j - 1, &ctx)?;
                anyhow(
                    table.factor(j).congruent_shared(&model),
                    "graded factor matches the nilpotent model",
                )?;
            }
        }
    }
    Ok(())
}

fn check_intertwining(fast: bool) -> Result<()> {
    let ctx = PadicCtx::new(5, 8)?;
    let mut st = 53u64;
    let trials = if fast { 10 } else { 100 };
    for _ in 0..trials {
        let k = 3 + (lcg(&mut st) % 15) as i64;
        let r = (lcg(&mut st) % 3) as usize;
        let comps: Vec<QExpansion> = (0..=r)
            .map(|j| {
                QExpansion::new(random_series(ctx, 6, &mut st), Some(k - 2 * j as i64), 1)
            })
            .collect();
        let f = FilteredForm::new(k, comps)?;
        let lhs = f.nabla()?.restriction();
        let rhs = f.restriction().theta();
        anyhow(lhs.congruent_shared(&rhs), "restriction intertwines nabla and theta")?;
    }
    Ok(())
}

fn check_ordinary_projector(fast: bool) -> Result<()> {
    let ctx = PadicCtx::new(5, 8)?;
    let q = 280usize;
    let e12 = eisenstein(12, &ctx, q + 40)?;
    let st = crate::qexp::p_stabilize(&e12, crate::qexp::RootChoice::Unit)?;
    let d = if fast { 6 } else { 10 };
    let data = crate::lfun::up_matrix(&ctx, 12, d, q)?;
    let proj = crate::lfun::ordinary_project(&data, &st.form)?;
    let window = data.q_window.min(proj.qprec());
    anyhow(
        proj.series
            .truncate_q(window)
            .congruent(&st.form.series.truncate_q(window), data.certified.min(4)),
        "e_ord fixes the unit-root stabilization",
    )?;
    let beta_stab = e12.sub(&e12.v_op())?;
    let killed = crate::lfun::ordinary_project(&data, &beta_stab)?;
    anyhow(
        killed
            .series
            .congruent(&QSeries::zero(ctx, killed.qprec()), data.certified.min(4)),
        "e_ord kills the beta-stabilization",
    )
}

fn anyhow(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(crate::error::Error::BadInput(format!("check failed: {what}")))
    }
}

const CHECKS: &[Check] = &[
    Check { module: "padic-core", name: "teichmuller-roots", run: check_teichmuller },
    Check { module: "padic-core", name: "hensel-quadratic", run: check_hensel },
    Check { module: "mahler", name: "nu-table", run: check_nu_table },
    Check { module: "mahler", name: "mahler-roundtrip", run: check_mahler_roundtrip },
    Check { module: "mahler", name: "char-multiplicative", run: check_char_mult },
    Check { module: "operator-interp", name: "oracle-sweep", run: check_oracle_sweep },
    Check { module: "operator-interp", name: "norm-tables", run: check_norm_tables },
    Check { module: "operator-interp", name: "perturbation", run: check_perturbation },
    Check { module: "operator-interp", name: "oc-estimate", run: check_oc_chain },
    Check { module: "qexp", name: "commutation-suite", run: check_commutation },
    Check { module: "qexp", name: "classical-bases", run: check_classical_bases },
    Check { module: "nearly-oc", name: "graded-factors", run: check_graded_factors },
    Check { module: "nearly-oc", name: "intertwining", run: check_intertwining },
    Check { module: "padic-lfun", name: "ordinary-projector", run: check_ordinary_projector },
];

pub fn modules() -> Vec<&'static str> {
    let mut v: Vec<&'static str> = CHECKS.iter().map(|c| c.module).collect();
    v.dedup();
    v
}

/// Run the suites, optionally filtered to one module, optionally in the
/// reduced fast mode.
pub fn run_selftest(module: Option<&str>, fast: bool) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for check in CHECKS {
        if let Some(m) = module {
            if m != check.module {
                continue;
            }
        }
        let start = Instant::now();
        let res = (check.run)(fast);
        let ms = start.elapsed().as_millis();
        out.push(CheckResult {
            module: check.module,
            name: check.name,
            ok: res.is_ok(),
            detail: res.err().map(|e| e.to_string()).unwrap_or_default(),
            ms,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_selftest_passes() {
        let results = run_selftest(None, true);
        assert!(!results.is_empty());
        for r in &results {
            assert!(r.ok, "{}/{}: {}", r.module, r.name, r.detail);
        }
    }
}
