use engel_core::field::{Field, FiniteField, Rationals};
use engel_core::poly::{poly_eval, poly_mul, MultiPoly};
use engel_core::words::{generate, GroupWord, SequenceId, SequenceKind, SequenceTerm, Symbol, DEFAULT_WORD_CAP};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = num_rational::BigRational> {
    (-1000i64..1000, 1i64..500).prop_map(|(n, d)| Rationals.div(&Rationals.from_i64(n), &Rationals.from_i64(d)).unwrap())
}

macro_rules! field_axioms {
    ($module:ident, $field:expr, $elem:expr) => {
        mod $module {
            use super::*;

            proptest! {
                #![proptest_config(ProptestConfig::with_cases(10_000))]

                #[test]
                fn ring_laws(a in $elem, b in $elem, c in $elem) {
                    let f = $field;
                    prop_assert_eq!(f.mul(&a, &f.mul(&b, &c)), f.mul(&f.mul(&a, &b), &c));
                    prop_assert_eq!(f.add(&a, &f.add(&b, &c)), f.add(&f.add(&a, &b), &c));
                    prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
                    prop_assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
                    prop_assert!(f.is_zero(&f.add(&a, &f.neg(&a))));
                    prop_assert_eq!(f.sub(&a, &b), f.add(&a, &f.neg(&b)));
                }

                #[test]
                fn inverses(a in $elem) {
                    let f = $field;
                    if f.is_zero(&a) {
                        prop_assert!(f.inv(&a).is_err());
                    } else {
                        prop_assert!(f.is_one(&f.mul(&a, &f.inv(&a).unwrap())));
                    }
                }

                #[test]
                fn parse_inverts_format(a in $elem) {
                    let f = $field;
                    prop_assert_eq!(f.parse(&f.format(&a)).unwrap(), a);
                }
            }
        }
    };
}

fn gf(p: u32, k: u32) -> FiniteField {
    FiniteField::with_order(p, k).unwrap()
}

fn element_of(f: FiniteField) -> impl Strategy<Value = <FiniteField as Field>::Elem> {
    let all = f.elements().unwrap();
    (0..all.len()).prop_map(move |i| all[i])
}

field_axioms!(rationals, Rationals, rational());
field_axioms!(gf5, gf(5, 1), element_of(gf(5, 1)));
field_axioms!(gf8, gf(2, 3), element_of(gf(2, 3)));
field_axioms!(gf49, gf(7, 2), element_of(gf(7, 2)));

#[test]
fn rationals_do_not_overflow() {
    let q = Rationals;
    let mut x = q.from_i64(-2);
    for _ in 0..7 {
        x = q.mul(&x, &x);
    }
    assert_eq!(q.format(&x), format!("{}", num_bigint::BigInt::from(2).pow(128)));
}

const NVARS: usize = 3;

fn poly() -> impl Strategy<Value = MultiPoly<Rationals>> {
    prop::collection::vec((-5i64..=5, prop::collection::vec(0usize..NVARS, 0..4)), 0..5).prop_map(|terms| {
        let q = Rationals;
        let mut p = MultiPoly::zero(&q, NVARS);
        for (c, vars) in terms {
            let mut t = MultiPoly::constant(&q, NVARS, q.from_i64(c));
            for v in vars {
                t = t.mul(&MultiPoly::variable(&q, NVARS, v)).unwrap();
            }
            p = p.add(&t).unwrap();
        }
        p
    })
}

fn point() -> impl Strategy<Value = Vec<num_rational::BigRational>> {
    prop::collection::vec(rational(), NVARS)
}

proptest! {
    #[test]
    fn polynomial_ring_laws(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(p.mul(&q.add(&r).unwrap()).unwrap(), p.mul(&q).unwrap().add(&p.mul(&r).unwrap()).unwrap());
        prop_assert_eq!(p.mul(&q.mul(&r).unwrap()).unwrap(), p.mul(&q).unwrap().mul(&r).unwrap());
        prop_assert_eq!(p.mul(&q).unwrap(), q.mul(&p).unwrap());
        prop_assert!(p.sub(&p).unwrap().is_identically_zero());
    }

    #[test]
    fn evaluation_is_a_homomorphism(p in poly(), q in poly(), x in point()) {
        let f = Rationals;
        let pq = poly_mul(&p, &q).unwrap();
        prop_assert_eq!(poly_eval(&pq, &x).unwrap(), f.mul(&poly_eval(&p, &x).unwrap(), &poly_eval(&q, &x).unwrap()));
        let s = p.add(&q).unwrap();
        prop_assert_eq!(poly_eval(&s, &x).unwrap(), f.add(&poly_eval(&p, &x).unwrap(), &poly_eval(&q, &x).unwrap()));
    }
}

fn word() -> impl Strategy<Value = GroupWord> {
    prop::collection::vec((prop::bool::ANY, -3i32..=3), 0..12).prop_map(|syl| {
        GroupWord::from_syllables(syl.into_iter().map(|(s, e)| (if s { Symbol::X } else { Symbol::Y }, e)))
    })
}

proptest! {
    #[test]
    fn free_group_laws(a in word(), b in word(), c in word()) {
        prop_assert_eq!(a.mul(&b.mul(&c)), a.mul(&b).mul(&c));
        prop_assert!(a.mul(&a.inverse()).is_identity());
        let reduced = GroupWord::from_syllables(a.syllables().iter().copied());
        prop_assert_eq!(&reduced, &a);
        prop_assert_eq!(a.mul(&b).exponent_sum(Symbol::Y), a.exponent_sum(Symbol::Y) + b.exponent_sum(Symbol::Y));
    }

    #[test]
    fn conjugate_rewrite_multiplies_back(a in word()) {
        let s = a.exponent_sum(Symbol::Y) as i32;
        let w = a.mul(&GroupWord::letter(Symbol::Y).pow(-s));
        let rw = w.conjugate_rewrite().expect("y-exponent sum is zero");
        prop_assert_eq!(GroupWord::from_conjugates(&rw), w);
    }

    #[test]
    fn unbalanced_words_have_no_rewrite(a in word()) {
        let s = a.exponent_sum(Symbol::Y) as i32;
        let w = a.mul(&GroupWord::letter(Symbol::Y).pow(1 - s));
        prop_assert!(w.conjugate_rewrite().is_none());
    }
}

#[test]
fn generation_is_prefix_stable() {
    for id in SequenceId::ALL {
        let spec = id.spec();
        let limit = if id.kind() == SequenceKind::Group { 5 } else { 7 };
        let words: Vec<String> = (1..=limit).map(|n| generate(&spec, n, DEFAULT_WORD_CAP).unwrap().to_string()).collect();
        for n in (1..=limit).rev() {
            let again = generate(&spec, n, DEFAULT_WORD_CAP).unwrap();
            assert_eq!(again.to_string(), words[n - 1], "{id} n={n}");
            if let SequenceTerm::Group(w) = again {
                assert!(w.len() <= DEFAULT_WORD_CAP);
            }
        }
    }
}
