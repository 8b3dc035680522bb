use std::sync::LazyLock;

use engel_core::catalog::{builtin_group, SMALL_GROUPS};
use engel_core::group::{engel_like_set, identity_holds, FiniteGroup, Strategy as Scan};
use engel_core::words::SequenceId;
use proptest::prelude::*;

static SL2_5: LazyLock<FiniteGroup> = LazyLock::new(|| builtin_group("sl2:5").unwrap());
static PSL3_3: LazyLock<FiniteGroup> = LazyLock::new(|| builtin_group("psl3:3").unwrap());
static SZ8: LazyLock<FiniteGroup> = LazyLock::new(|| builtin_group("sz:8").unwrap());
static PRODUCT: LazyLock<FiniteGroup> = LazyLock::new(|| builtin_group("alt:5*sym:4").unwrap());

fn triple(g: &'static FiniteGroup) -> impl Strategy<Value = (u32, u32, u32)> {
    let n = g.order() as u32;
    (0..n, 0..n, 0..n)
}

fn group_axioms(g: &FiniteGroup, (a, b, c): (u32, u32, u32)) -> Result<(), TestCaseError> {
    prop_assert_eq!(g.mul(a, g.mul(b, c)), g.mul(g.mul(a, b), c));
    prop_assert_eq!(g.mul(a, g.inv(a)), g.identity());
    prop_assert_eq!(g.mul(g.identity(), a), a);
    prop_assert_eq!(g.comm(a, b), g.mul(g.mul(a, b), g.mul(g.inv(a), g.inv(b))));
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(25_000))]

    #[test]
    fn tabled_group_axioms(t in triple(&SL2_5)) {
        group_axioms(&SL2_5, t)?;
    }

    #[test]
    fn matrix_group_axioms(t in triple(&PSL3_3)) {
        group_axioms(&PSL3_3, t)?;
    }

    #[test]
    fn suzuki_axioms(t in triple(&SZ8)) {
        group_axioms(&SZ8, t)?;
    }

    #[test]
    fn product_axioms(t in triple(&PRODUCT)) {
        group_axioms(&PRODUCT, t)?;
    }
}

#[test]
fn inverse_table_is_exact() {
    for name in SMALL_GROUPS {
        let g = builtin_group(name).unwrap();
        for a in g.all() {
            assert_eq!(g.mul(a, g.inv(a)), g.identity(), "{name}");
            assert_eq!(g.inv(g.inv(a)), a);
        }
    }
}

/// Once u_n(a,g) = 1 every later term is 1.
#[test]
fn correct_sequences_stay_trivial() {
    for name in SMALL_GROUPS {
        let g = builtin_group(name).unwrap();
        if g.order() > 60 {
            continue;
        }
        for id in SequenceId::GROUP {
            let seq = id.spec();
            for a in g.all() {
                for y in g.all() {
                    let mut c = seq.group_seed(&g, &a, &y);
                    let mut hit = false;
                    for n in 1..=10 {
                        if n > 1 {
                            c = seq.group_step(&g, &c, &a, &y);
                        }
                        assert!(!hit || c == g.identity(), "{name} {id} a={a} y={y} n={n}");
                        hit |= c == g.identity();
                    }
                }
            }
        }
    }
}

#[test]
fn radical_inside_engel_like_sets() {
    for name in SMALL_GROUPS {
        let g = builtin_group(name).unwrap();
        let r = g.solvable_radical();
        assert!(g.verify_solvable_radical(&r), "{name}");
        for id in [SequenceId::SBww, SequenceId::WGroup, SequenceId::EGroup] {
            let (set, _) = engel_like_set(&g, &id.spec()).unwrap();
            if id == SequenceId::EGroup {
                assert!(set.is_subset(&r), "{name}: Engel elements outside R");
            } else {
                assert!(r.is_subset(&set), "{name} {id}");
            }
        }
    }
}

#[test]
fn class_reps_match_full_scan() {
    for name in SMALL_GROUPS {
        let g = builtin_group(name).unwrap();
        if g.order() > 360 {
            continue;
        }
        for id in SequenceId::GROUP {
            let seq = id.spec();
            for n in [1, 3, 6] {
                let full = identity_holds(&g, &seq, n, Scan::Full).unwrap().0;
                let reps = identity_holds(&g, &seq, n, Scan::ClassReps).unwrap().0;
                assert_eq!(full.least, reps.least, "{name} {id} n={n}");
                assert_eq!(full.witness.is_some(), reps.witness.is_some(), "{name} {id} n={n}");
                assert!(reps.pairs <= full.pairs);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// The image of a u-Engel element in G/N is u-Engel.
    #[test]
    fn quotients_keep_engel_elements(which in 0..SMALL_GROUPS.len(), seed in any::<prop::sample::Index>(), seq in 0..4usize) {
        let g = builtin_group(SMALL_GROUPS[which]).unwrap();
        prop_assume!(g.order() <= 200);
        let x = seed.index(g.order()) as u32;
        let n = g.normal_closure(&[x]);
        let (q, map) = g.quotient(&n).unwrap();
        prop_assert_eq!(q.order() * n.order(), g.order());
        let spec = SequenceId::GROUP[seq].spec();
        let (set_g, _) = engel_like_set(&g, &spec).unwrap();
        let (set_q, _) = engel_like_set(&q, &spec).unwrap();
        for &y in set_g.members() {
            prop_assert!(set_q.contains(map[y as usize]));
        }
    }
}
