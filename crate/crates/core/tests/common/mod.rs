#![allow(dead_code)]

use num_bigint::BigInt;
use proptest::prelude::*;
use proptrace::expr::{EqSet, Equation, Expr};
use proptrace::rational::Rational;

pub fn raw(n: i64, d: i64) -> Rational {
    Rational::new_raw(BigInt::from(n), BigInt::from(d)).unwrap()
}

pub fn small_const() -> impl Strategy<Value = Expr> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| Expr::Const(raw(n, d)))
}

/// Arbitrary trees, including square roots and higher powers.
pub fn any_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![3 => Just(Expr::Var), 2 => small_const()];
    leaf.prop_recursive(4, 24, 4, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::sum),
            prop::collection::vec(inner.clone(), 2..3).prop_map(Expr::prod),
            (inner.clone(), 2u32..4).prop_map(|(b, n)| Expr::pow(b, n)),
            inner.clone().prop_map(Expr::neg),
            prop_oneof![
                (0i64..30).prop_map(|n| Expr::sqrt(Expr::int(n))),
                inner.prop_map(Expr::sqrt),
            ],
        ]
    })
}

pub fn any_eqset() -> impl Strategy<Value = EqSet> {
    prop::collection::vec((any_expr(), any_expr()), 1..3).prop_map(|pairs| {
        EqSet::new(pairs.into_iter().map(|(l, r)| Equation::new(l, r)).collect())
    })
}

/// One summand of degree at most two, in one of several written shapes.
fn quad_term() -> impl Strategy<Value = Expr> {
    let c = -5i64..=5;
    let p = -4i64..=4;
    prop_oneof![
        small_const(),
        (c.clone(), 1u32..=2).prop_map(|(c, k)| Expr::prod(vec![Expr::int(c), Expr::pow(Expr::Var, k)])),
        (c.clone(), p.clone()).prop_map(|(c, p)| {
            Expr::prod(vec![Expr::int(c), Expr::pow(Expr::sum(vec![Expr::Var, Expr::int(p)]), 2)])
        }),
        (p.clone(), p.clone()).prop_map(|(p, q)| {
            Expr::prod(vec![
                Expr::sum(vec![Expr::Var, Expr::int(p)]),
                Expr::sum(vec![Expr::neg(Expr::Var), Expr::int(q)]),
            ])
        }),
        (p.clone()).prop_map(|p| Expr::pow(Expr::sum(vec![Expr::neg(Expr::Var), Expr::int(p)]), 2)),
        Just(Expr::neg(Expr::Var)),
        (c, p).prop_map(|(c, p)| Expr::prod(vec![Expr::int(c), Expr::sum(vec![Expr::Var, Expr::int(p)])])),
    ]
}

/// Sqrt-free side of degree at most two.
pub fn quad_side() -> impl Strategy<Value = Expr> {
    prop::collection::vec(quad_term(), 1..4).prop_map(Expr::sum)
}

pub fn quad_eqset() -> impl Strategy<Value = EqSet> {
    prop::collection::vec((quad_side(), quad_side()), 1..3).prop_map(|pairs| {
        EqSet::new(pairs.into_iter().map(|(l, r)| Equation::new(l, r)).collect())
    })
}

/// Equation sets built from a small pool of roots, so that random pairs
/// are often equivalent.
pub fn rooted_eqset() -> impl Strategy<Value = EqSet> {
    let root = -2i64..=2;
    prop_oneof![
        prop::collection::vec(root.clone(), 1..3).prop_map(|rs| {
            EqSet::new(rs.into_iter().map(|r| Equation::new(Expr::Var, Expr::int(r))).collect())
        }),
        (root.clone(), root.clone()).prop_map(|(a, b)| {
            let f = |r: i64| Expr::sum(vec![Expr::Var, Expr::int(-r)]);
            EqSet::single(Equation::new(Expr::prod(vec![f(a), f(b)]), Expr::zero()))
        }),
        (root.clone(), root.clone()).prop_map(|(a, b)| {
            // x^2 - (a+b) x + ab = 0, expanded
            EqSet::single(Equation::new(
                Expr::sum(vec![
                    Expr::pow(Expr::Var, 2),
                    Expr::prod(vec![Expr::int(-(a + b)), Expr::Var]),
                    Expr::int(a * b),
                ]),
                Expr::zero(),
            ))
        }),
        root.clone().prop_map(|r| {
            EqSet::single(Equation::new(Expr::pow(Expr::sum(vec![Expr::Var, Expr::int(-r)]), 2), Expr::zero()))
        }),
        root.prop_map(|r| {
            EqSet::single(Equation::new(Expr::prod(vec![Expr::int(2), Expr::Var]), Expr::int(2 * r)))
        }),
        Just(EqSet::single(Equation::new(Expr::pow(Expr::Var, 2), Expr::int(-1)))),
        Just(EqSet::single(Equation::new(Expr::Var, Expr::Var))),
    ]
}
