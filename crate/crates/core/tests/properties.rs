//! Property tests for the algebraic layers: ring laws, expansion
//! round-trips, and operator identities on randomized inputs.

use proptest::prelude::*;

use padicmf::io::{parse_qexp, write_qexp};
use padicmf::mahler::finite_difference_coeffs;
use padicmf::padic::PadicCtx;
use padicmf::qexp::QExpansion;
use padicmf::series::QSeries;

fn ctx_for(pi: u8, prec: u8) -> PadicCtx {
    let p = [2u64, 3, 5, 7][pi as usize % 4];
    PadicCtx::new(p, 3 + (prec % 5) as u32).unwrap()
}

fn series_from(ctx: PadicCtx, raw: &[u64]) -> QSeries {
    let coeffs = raw.iter().map(|&x| ctx.from_u64(x % ctx.modulus())).collect();
    QSeries::from_coeffs(coeffs, ctx)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mahler_roundtrip(pi in 0u8..4, prec in 0u8..5, raw in prop::collection::vec(any::<u64>(), 1..40)) {
        let ctx = ctx_for(pi, prec);
        let vals: Vec<_> = raw.iter().map(|&x| ctx.from_u64(x % ctx.modulus())).collect();
        let f = finite_difference_coeffs(&vals, ctx);
        for (i, v) in vals.iter().enumerate() {
            prop_assert_eq!(f.eval_at_integer(i as u64), *v);
        }
    }

    #[test]
    fn series_ring_laws(pi in 0u8..4, a in prop::collection::vec(any::<u64>(), 8), b in prop::collection::vec(any::<u64>(), 8), c in prop::collection::vec(any::<u64>(), 8)) {
        let ctx = ctx_for(pi, 3);
        let (f, g, h) = (series_from(ctx, &a), series_from(ctx, &b), series_from(ctx, &c));
        // distributivity and the Leibniz rule for theta
        prop_assert_eq!(f.add(&g).mul(&h), f.mul(&h).add(&g.mul(&h)));
        let lhs = f.mul(&g).theta();
        let rhs = f.theta().mul(&g).add(&f.mul(&g.theta()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn depletion_idempotent_and_kills(pi in 0u8..4, a in prop::collection::vec(any::<u64>(), 1..30)) {
        let ctx = ctx_for(pi, 4);
        let f = QExpansion::new(series_from(ctx, &a), None, 1);
        let dep = f.deplete();
        prop_assert!(dep.deplete().congruent_shared(&dep));
        let p = ctx.p() as usize;
        for n in (0..f.qprec()).step_by(p) {
            prop_assert!(dep.coeff(n).is_zero());
        }
        // up of v is the identity
        prop_assert!(f.v_op().up().unwrap().congruent_shared(&f));
    }

    #[test]
    fn qexp_text_roundtrip(pi in 0u8..4, a in prop::collection::vec(any::<u64>(), 1..24), k in prop::option::of(-30i64..60)) {
        let ctx = ctx_for(pi, 4);
        let mut f = QExpansion::new(series_from(ctx, &a), k, 1);
        f.eps_p = ctx.one();
        let back = parse_qexp(&write_qexp(&f)).unwrap();
        prop_assert!(back.congruent_shared(&f));
        prop_assert_eq!(back.weight, f.weight);
        // serialization is deterministic
        prop_assert_eq!(write_qexp(&f), write_qexp(&back));
    }

    #[test]
    fn teichmuller_multiplicative(pi in 1u8..4, x in 1u64..200, y in 1u64..200) {
        let ctx = ctx_for(pi, 4);
        let p = ctx.p();
        prop_assume!(x % p != 0 && y % p != 0);
        let tx = padicmf::padic::teichmuller(x % p, &ctx).unwrap();
        let ty = padicmf::padic::teichmuller(y % p, &ctx).unwrap();
        let txy = padicmf::padic::teichmuller(x * y % p, &ctx).unwrap();
        prop_assert_eq!(tx.mul(&ty), txy);
    }
}
