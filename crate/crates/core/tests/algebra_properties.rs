mod common;

use common::*;
use num_bigint::BigInt;
use proptest::prelude::*;
use proptrace::algebra::{equivalent, nf_full, nf_struct, root_set, simplify_fraction, RootSet};
use proptrace::expr::{eval_at, EqSet, Expr};
use proptrace::rational::Rational;
use proptrace::tasks::shuffled_variant;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SAMPLES: [(i64, i64); 5] = [(-3, 1), (-1, 2), (0, 1), (2, 3), (5, 1)];

fn difference(s: &EqSet, i: usize) -> Expr {
    let eq = &s.equations()[i];
    Expr::sum(vec![eq.lhs.clone(), Expr::neg(eq.rhs.clone())])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(384))]

    #[test]
    fn nf_full_is_idempotent(s in any_eqset()) {
        if let Ok(once) = nf_full(&s) {
            prop_assert_eq!(nf_full(&once).unwrap(), once);
        }
    }

    #[test]
    fn nf_struct_is_idempotent(s in any_eqset()) {
        let once = nf_struct(&s);
        prop_assert_eq!(nf_struct(&once), once);
    }

    /// The normalized polynomial is a nonzero multiple of lhs - rhs at every sample point.
    #[test]
    fn nf_full_is_sound(s in quad_eqset()) {
        let nf = nf_full(&s).unwrap();
        // equations were deduplicated and sorted; match each original one
        for i in 0..s.len() {
            let d = difference(&s, i);
            let dv: Vec<Rational> = SAMPLES.iter().map(|&(n, q)| eval_at(&d, &raw(n, q)).unwrap()).collect();
            let matches_some = nf.equations().iter().any(|out| {
                let pv: Vec<Rational> = SAMPLES.iter().map(|&(n, q)| eval_at(&out.lhs, &raw(n, q)).unwrap()).collect();
                let scale = dv.iter().zip(&pv).find(|(a, _)| !a.is_zero()).map(|(a, b)| b.checked_div(a).unwrap());
                match scale {
                    None => pv.iter().all(Rational::is_zero),
                    Some(k) => !k.is_zero() && dv.iter().zip(&pv).all(|(a, b)| (&k * a).value_eq(b)),
                }
            });
            prop_assert!(matches_some, "{} -> {}", s, nf);
        }
    }

    #[test]
    fn nf_struct_refines_nf_full(s in quad_eqset(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = shuffled_variant(&s, &mut rng);
        prop_assert_eq!(nf_struct(&v), nf_struct(&s));
        prop_assert_eq!(nf_full(&v).unwrap(), nf_full(&s).unwrap());
    }

    #[test]
    fn nf_struct_refines_on_random_pairs(a in rooted_eqset(), b in rooted_eqset()) {
        if nf_struct(&a) == nf_struct(&b) {
            prop_assert_eq!(nf_full(&a).unwrap(), nf_full(&b).unwrap());
        }
    }

    #[test]
    fn equivalence_is_an_equivalence(a in rooted_eqset(), b in rooted_eqset(), c in rooted_eqset()) {
        let e = |x: &EqSet, y: &EqSet| equivalent(x, y).unwrap();
        prop_assert!(e(&a, &a));
        prop_assert_eq!(e(&a, &b), e(&b, &a));
        if e(&a, &b) && e(&b, &c) {
            prop_assert!(e(&a, &c));
        }
    }

    #[test]
    fn simplify_fraction_is_fixed_and_exact(n in -10_000i64..10_000, d in 1i64..10_000) {
        let r = raw(n, d);
        let out = simplify_fraction(&r);
        prop_assert_eq!(simplify_fraction(&out), out.clone());
        prop_assert_eq!(BigInt::from(n) * out.denom(), out.numer() * BigInt::from(d));
        prop_assert!(out.is_reduced());
    }
}

/// Trial substitution over the integers in [-5, 5].
fn integer_roots(b: i64, c: i64) -> Vec<i64> {
    (-5..=5).filter(|r| r * r + b * r + c == 0).collect()
}

#[test]
fn monic_quadratics_with_integer_roots() {
    for r1 in -5i64..=5 {
        for r2 in r1..=5 {
            let (b, c) = (-(r1 + r2), r1 * r2);
            let s = proptrace::parse_eqset(&format!("x^2 + {b}*x + {c} = 0")).unwrap();
            let RootSet::Finite(roots) = root_set(&s).unwrap() else { panic!("finite") };
            let got: Vec<String> = roots.iter().map(ToString::to_string).collect();
            let mut want: Vec<String> = integer_roots(b, c).iter().map(ToString::to_string).collect();
            want.sort();
            let mut got_sorted = got.clone();
            got_sorted.sort();
            assert_eq!(got_sorted, want, "x^2 + {b}x + {c}");
        }
    }
}
