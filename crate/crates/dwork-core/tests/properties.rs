use proptest::prelude::*;

use dwork_core::cy3::{cy3_basis, cy3_lie_defect};
use dwork_core::groupaction::{act, generic_point, group_defect, group_elem, recover, subgroups, Subgroup};
use dwork_core::liealg::{amsy_decompose, bracket, compose, Decomposition};
use dwork_core::modular::{weighted_degree, Weights};
use dwork_core::{model, phi_matrix, stirling2, CMode, VecField};
use symcore::{rat, QuotientCtx, RatFn, Var};

fn params_for(n: usize, raw: &[(i64, i64)]) -> Vec<RatFn> {
    subgroups(n)
        .iter()
        .zip(raw.iter().cycle())
        .map(|(s, &(p, q))| {
            let p = if matches!(s, Subgroup::Mult(_)) && p == 0 { 1 } else { p };
            RatFn::from_rat(&rat(p, q))
        })
        .collect()
}

fn raw_params() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-7i64..=7, 1i64..=5), 1..14)
}

/// Sum of k_i * G_i over R and the basis fields.
fn combo(n: usize, ks: &[i64]) -> VecField {
    let m = model(n, &CMode::Matched).unwrap();
    let ctx = m.ctx();
    let mut gens = vec![m.r().unwrap().clone()];
    gens.extend(m.basis().unwrap().values().cloned());
    gens.iter()
        .zip(ks.iter().cycle())
        .fold(VecField::zero(), |acc, (g, &k)| acc.add(&g.scale(&RatFn::from_i64(k), ctx), ctx))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn group_elements_preserve_phi(n in 1usize..=5, raw in raw_params()) {
        let ps = params_for(n, &raw);
        let g = group_elem(n, &ps).unwrap();
        prop_assert!(group_defect(&g.mat, &phi_matrix(n), &QuotientCtx::plain()).is_zero());
        prop_assert!(g.mat.is_upper_triangular());
        prop_assert_eq!(recover(n, &g.mat).unwrap(), ps);
    }

    #[test]
    fn right_action_on_numeric_elements(n in 1usize..=4, a in raw_params(), b in raw_params()) {
        let m = model(n, &CMode::Matched).unwrap();
        let spec = m.spec();
        let ctx = QuotientCtx::plain();
        let g = group_elem(n, &params_for(n, &a)).unwrap().mat;
        let h = group_elem(n, &params_for(n, &b)).unwrap().mat;
        let pt = generic_point(spec);
        let lhs = act(spec, &act(spec, &pt, &g).unwrap(), &h).unwrap();
        let rhs = act(spec, &pt, &g.mul(&h, &ctx)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn bracket_is_antisymmetric(n in 1usize..=3, ks in prop::collection::vec(-3i64..=3, 1..6), ls in prop::collection::vec(-3i64..=3, 1..6)) {
        let m = model(n, &CMode::Matched).unwrap();
        let ctx = m.ctx();
        let v = combo(n, &ks);
        let w = combo(n, &ls);
        prop_assert!(bracket(&v, &w, ctx).add(&bracket(&w, &v, ctx), ctx).is_zero());
    }

    #[test]
    fn decompose_inverts_compose(n in 1usize..=3, ks in prop::collection::vec((-4i64..=4, 0usize..3), 1..8)) {
        let m = model(n, &CMode::Matched).unwrap();
        let ctx = m.ctx();
        let coef = |i: usize| {
            let (k, v) = ks[i % ks.len()];
            let x = RatFn::var(Var::t(1 + v));
            ctx.add(&RatFn::from_i64(k), &ctx.mul(&x, &RatFn::from_i64(i as i64 % 3)))
        };
        let d = Decomposition {
            f0: coef(0),
            f: m.basis().unwrap().keys().enumerate().map(|(i, idx)| (*idx, coef(i + 1))).collect(),
        };
        let v = compose(&m, &d).unwrap();
        prop_assert_eq!(amsy_decompose(&m, &v).unwrap(), d);
    }

    #[test]
    fn weighted_degree_is_additive(e in prop::collection::vec(0u32..4, 3), f in prop::collection::vec(0u32..4, 3)) {
        let ctx = QuotientCtx::plain();
        let w: Weights = [(Var::t(1), 1), (Var::t(2), 2), (Var::t(3), 3)].into_iter().collect();
        let mono = |e: &[u32]| {
            (0..3).fold(RatFn::one(), |acc, i| ctx.mul(&acc, &ctx.pow(&RatFn::var(Var::t(i + 1)), e[i] as i32).unwrap()))
        };
        let a = mono(&e);
        let b = mono(&f);
        let da = weighted_degree(&a, &w).unwrap();
        let db = weighted_degree(&b, &w).unwrap();
        prop_assert_eq!(weighted_degree(&ctx.mul(&a, &b), &w), Some(da + db));
        prop_assert_eq!(weighted_degree(&ctx.div(&a, &b).unwrap(), &w), Some(da - db));
    }

    #[test]
    fn stirling_row_sums_are_bell_numbers(n in 0usize..10) {
        let bell = [1u64, 1, 2, 5, 15, 52, 203, 877, 4140, 21147];
        let s: num_bigint::BigInt = (0..=n).map(|k| stirling2(n, k)).sum();
        prop_assert_eq!(s, num_bigint::BigInt::from(bell[n]));
    }

    #[test]
    fn cy3_combinations_stay_in_lie_algebra(h in 1usize..=3, ks in prop::collection::vec(-3i64..=3, 1..10)) {
        let ctx = QuotientCtx::plain();
        let b = cy3_basis(h).unwrap();
        let mut x = symcore::MatF::zero(b.size(), b.size());
        for ((_, g), k) in b.gens.iter().zip(ks.iter().cycle()) {
            x = x.add(&g.scale(&RatFn::from_i64(*k), &ctx), &ctx);
        }
        prop_assert!(cy3_lie_defect(&b.phi, &x).is_zero());
        let y = b.gens[ks.len() % b.gens.len()].1.clone();
        let c = x.commutator(&y, &ctx);
        prop_assert!(cy3_lie_defect(&b.phi, &c).is_zero());
        prop_assert!(b.decompose_lie(&c).is_some());
    }
}
