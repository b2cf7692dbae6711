mod common;

use common::*;
use proptest::prelude::*;
use proptrace::expr::{is_zero_derived, term_count, EqSet, Equation, Expr};
use proptrace::parse::parse_eqset;
use proptrace::render::render;
use proptrace::tasks::shuffled_variant;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn all_flat(s: &EqSet) -> bool {
    s.equations().iter().all(|eq| eq.lhs.is_flat() && eq.rhs.is_flat())
}

/// Nonzero summands counted by walking the tree directly.
fn oracle_count(e: &Expr) -> usize {
    let folded_zero = proptrace::algebra::fold_constant(e).is_some_and(|c| c.is_zero());
    if folded_zero {
        return 0;
    }
    match e {
        Expr::Sum(items) => items.iter().filter(|i| !i.is_literal_zero()).count(),
        other => usize::from(!other.is_literal_zero()),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn render_parse_round_trip(s in any_eqset()) {
        let text = render(&s);
        let back = parse_eqset(&text);
        prop_assert_eq!(back, Ok(s), "{}", text);
    }

    #[test]
    fn constructed_trees_are_flat(s in any_eqset()) {
        prop_assert!(all_flat(&s));
        prop_assert!(all_flat(&parse_eqset(&render(&s)).unwrap()));
    }

    #[test]
    fn term_count_ignores_order(s in any_eqset(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = shuffled_variant(&s, &mut rng);
        prop_assert_eq!(term_count(&s), term_count(&v));
    }

    #[test]
    fn term_count_matches_tree_walk(s in any_eqset()) {
        let expected: usize = s
            .equations()
            .iter()
            .map(|eq| oracle_count(&eq.lhs) + oracle_count(&eq.rhs))
            .sum();
        prop_assert_eq!(term_count(&s), expected);
    }

    #[test]
    fn zero_derivation_is_symmetric(l in any_expr(), r in any_expr()) {
        let eq = Equation::new(l, r);
        prop_assert_eq!(is_zero_derived(&eq), is_zero_derived(&eq.swapped()));
    }

    #[test]
    fn parser_never_panics(text in "[-+*/^()=x0-9 a-z.]{0,40}") {
        let _ = parse_eqset(&text);
    }
}
