use engel_core::catalog::builtin_group;
use engel_core::group::{
    cr_radical, direct_product, engel_automorphism_test, engel_like_set, identity_holds, parse_cycles,
    semidirect_product, Automorphism, Strategy, DEFAULT_ORDER_CAP,
};
use engel_core::words::SequenceId;
use engel_core::{Error, Verdict};

#[test]
fn engel_sets_match_fitting() {
    let e = SequenceId::EGroup.spec();
    let s4 = builtin_group("sym:4").unwrap();
    let (set, _) = engel_like_set(&s4, &e).unwrap();
    assert_eq!(set.order(), 4);
    assert_eq!(set, s4.fitting_subgroup());

    let a5 = builtin_group("alt:5").unwrap();
    assert_eq!(engel_like_set(&a5, &e).unwrap().0.order(), 1);

    for name in ["dihedral:4", "q8"] {
        let g = builtin_group(name).unwrap();
        assert_eq!(engel_like_set(&g, &e).unwrap().0.order(), g.order(), "{name}");
    }
}

#[test]
fn closures_and_radicals() {
    let a5 = builtin_group("alt:5").unwrap();
    for x in [1, 7, 30] {
        assert_eq!(a5.normal_closure(&[x]).order(), 60);
    }
    assert_eq!(a5.normal_closure(&[]).order(), 1);

    let g = builtin_group("alt:5*sym:4").unwrap();
    let r = g.solvable_radical();
    assert_eq!(r.order(), 24);
    assert!(r.members().iter().all(|&x| g.key(x)[0] == 0));
    assert!(g.verify_solvable_radical(&r));
    let (q, _) = g.quotient(&r).unwrap();
    assert_eq!(q.solvable_radical().order(), 1);
}

#[test]
fn s_identity_on_small_groups() {
    let s = SequenceId::SBww.spec();
    for (name, least) in [("sym:3", 3), ("sym:4", 4), ("dihedral:6", 3), ("sl2:3", 4)] {
        let g = builtin_group(name).unwrap();
        let (r, report) = identity_holds(&g, &s, 10, Strategy::ClassReps).unwrap();
        assert_eq!(r.least, Some(least), "{name}");
        assert_eq!(report.verdict, Verdict::Holds);
    }
    let a5 = builtin_group("alt:5").unwrap();
    let (r, report) = identity_holds(&a5, &s, 10, Strategy::ClassReps).unwrap();
    assert!(r.witness.is_some());
    assert!(report.is_well_formed());
}

#[test]
fn class_reps_agree_with_full() {
    for name in ["sym:4", "sl2:3", "alt:5"] {
        let g = builtin_group(name).unwrap();
        for id in SequenceId::GROUP {
            let seq = id.spec();
            for n in [2, 5] {
                let a = identity_holds(&g, &seq, n, Strategy::Full).unwrap().0;
                let b = identity_holds(&g, &seq, n, Strategy::ClassReps).unwrap().0;
                assert_eq!(a.least, b.least, "{name} {id} {n}");
                assert_eq!(a.witness.is_some(), b.witness.is_some());
            }
        }
    }
}

#[test]
fn cr_radical_examples() {
    let w = builtin_group("wr2(alt:5)").unwrap();
    assert_eq!(w.order(), 7200);
    let cr = cr_radical(&w).unwrap();
    assert_eq!(cr.radical.order(), 3600);
    assert_eq!(cr.components.len(), 1);
    assert_eq!(cr.components[0].factors, 2);

    let g = builtin_group("alt:5*psl2:7").unwrap();
    let cr = cr_radical(&g).unwrap();
    assert_eq!(cr.radical.order(), g.order());
    assert_eq!(cr.components.len(), 2);

    let a5 = builtin_group("alt:5").unwrap();
    assert_eq!(cr_radical(&a5).unwrap().radical.order(), 60);
    assert_eq!(cr_radical(&builtin_group("sym:4").unwrap()).unwrap_err(), Error::NotSemisimple(24));
}

#[test]
fn holomorph_of_a5() {
    let a5 = builtin_group("alt:5").unwrap();
    let sigma = Automorphism::permutation_conjugation(&a5, &parse_cycles("(1 2)", 5).unwrap()).unwrap();
    let h = semidirect_product(&a5, std::slice::from_ref(&sigma), DEFAULT_ORDER_CAP).unwrap();
    assert_eq!(h.invariant(), builtin_group("sym:5").unwrap().invariant());

    let e = SequenceId::EGroup.spec();
    let report = engel_automorphism_test(&a5, &sigma, &e, DEFAULT_ORDER_CAP).unwrap();
    assert_eq!(report.verdict, Verdict::NotEngel);
    assert!(report.is_well_formed());

    let id = Automorphism::identity(&a5);
    let report = engel_automorphism_test(&a5, &id, &e, DEFAULT_ORDER_CAP).unwrap();
    assert_eq!(report.verdict, Verdict::Engel);

    let u = SequenceId::UBggkpp.spec();
    assert!(matches!(
        engel_automorphism_test(&a5, &id, &u, DEFAULT_ORDER_CAP),
        Err(Error::SequenceNotAutocorrect(_))
    ));
}

#[test]
fn swap_on_a5_squared() {
    let a5 = builtin_group("alt:5").unwrap();
    let sq = direct_product(&a5, &a5, DEFAULT_ORDER_CAP).unwrap();
    let swap = Automorphism::swap(&sq).unwrap();
    let report = engel_automorphism_test(&sq, &swap, &SequenceId::WGroup.spec(), DEFAULT_ORDER_CAP).unwrap();
    assert_eq!(report.verdict, Verdict::NotEngel);
    assert!(report.witness.is_some());
}

#[test]
fn large_simple_orders() {
    assert_eq!(builtin_group("psl3:3").unwrap().order(), 5616);
}
