use engel_core::catalog::builtin_lie_q;
use engel_core::field::{Field, Rationals};
use engel_core::lie::{
    engel_test, nilradical, sequence_values, solvable_radical, symbolic_in_xy, verify_nilradical, verify_solvable_radical,
    EngelKind, EngelOptions, LieAlgebra,
};
use engel_core::poly::poly_eval;
use engel_core::suites::RADICAL_SLICE;
use engel_core::words::SequenceId;
use proptest::prelude::*;

fn algebra() -> impl Strategy<Value = &'static str> {
    prop::sample::select(RADICAL_SLICE.to_vec())
}

fn coords(max_dim: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, max_dim)
}

fn vec_in(l: &LieAlgebra<Rationals>, c: &[i64]) -> Vec<num_rational::BigRational> {
    l.qvec(&c[..l.dim()])
}

#[test]
fn radicals_are_certified() {
    for name in RADICAL_SLICE {
        let l = builtin_lie_q(name).unwrap();
        let r = solvable_radical(&l).unwrap();
        assert!(l.is_ideal(&r) && l.is_solvable_subalgebra(&r).unwrap(), "{name}");
        assert!(verify_solvable_radical(&l, &r).unwrap(), "{name}");
        let n = nilradical(&l).unwrap();
        assert!(verify_nilradical(&l, &n).unwrap(), "{name}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    /// If (-ad[x,y])^n x vanishes for some n <= 3d it already vanishes at n = d.
    #[test]
    fn nilpotent_orbit_dies_by_dimension(name in algebra(), cx in coords(9), cy in coords(9)) {
        let l = builtin_lie_q(name).unwrap();
        let d = l.dim();
        let (x, y) = (vec_in(&l, &cx), vec_in(&l, &cy));
        let t = l.bracket(&x, &y);
        let mut u = x.clone();
        let mut at_d = None;
        let mut first = None;
        for n in 1..=3 * d {
            u = l.bracket(&u, &t);
            if n == d {
                at_d = Some(l.is_zero_vector(&u));
            }
            if first.is_none() && l.is_zero_vector(&u) {
                first = Some(n);
            }
        }
        if first.is_some() {
            prop_assert_eq!(at_d, Some(true));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn totally_engel_matches_nilradical(name in algebra(), cy in coords(9)) {
        let l = builtin_lie_q(name).unwrap();
        let y = vec_in(&l, &cy);
        let n = nilradical(&l).unwrap();
        let ideal = l.ideal_generated(&y);
        prop_assert_eq!(n.contains(&Rationals, &y), l.is_nilpotent_subalgebra(&ideal).unwrap());
    }

    #[test]
    fn symbolic_matches_numeric(name in algebra(), cx in coords(9), cy in coords(9)) {
        let l = builtin_lie_q(name).unwrap();
        prop_assume!(l.dim() <= 6);
        let d = l.dim();
        let (x, y) = (vec_in(&l, &cx), vec_in(&l, &cy));
        let spec = SequenceId::VLie.spec();
        let symbolic = symbolic_in_xy(&l, &spec, d + 1);
        let numeric = sequence_values(&l, &spec, &x, &y, None, d + 1);
        let point: Vec<_> = x.iter().chain(&y).cloned().collect();
        for (k, p) in symbolic.iter().enumerate() {
            prop_assert!(p.total_degree().unwrap_or(0) < 2 * (d as u32 + 1));
            prop_assert_eq!(poly_eval(p, &point).unwrap(), numeric[d][k].clone());
        }
    }

    #[test]
    fn direct_sum_respects_components(cy in coords(5), left in any::<bool>(), kind in prop::sample::select(vec![EngelKind::V, EngelKind::Strict])) {
        let sl2 = builtin_lie_q("sl2").unwrap();
        let b2 = builtin_lie_q("b2").unwrap();
        let sum = builtin_lie_q("sl2+b2").unwrap();
        let opts = EngelOptions::default();
        let (part, comp, y) = if left {
            let y = sl2.qvec(&cy[..3]);
            let padded: Vec<_> = y.iter().cloned().chain((0..b2.dim()).map(|_| Rationals.zero())).collect();
            (engel_test(&sl2, &y, kind, &opts).unwrap(), engel_test(&sum, &padded, kind, &opts).unwrap(), y)
        } else {
            let y = b2.qvec(&cy[..b2.dim()]);
            let padded: Vec<_> = (0..3).map(|_| Rationals.zero()).chain(y.iter().cloned()).collect();
            (engel_test(&b2, &y, kind, &opts).unwrap(), engel_test(&sum, &padded, kind, &opts).unwrap(), y)
        };
        prop_assert_eq!(part.verdict(), comp.verdict(), "y = {:?}", y);
    }
}
