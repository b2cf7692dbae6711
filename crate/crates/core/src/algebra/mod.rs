//! Normal forms, exact roots and semantic equivalence.

mod poly;
mod structural;
mod surd;

pub use poly::{equivalent, nf_full, poly_of, root_set, Poly, RootSet};
pub use structural::{
    normalize_expr, nf_struct, struct_key, struct_key_equation, NFactor, NSum, StructKey,
};
pub use surd::{rational_sqrt, squarefree_split, ExactNumber, MixedRadicals, Surd, MAX_CONSTANT_BITS};

use crate::expr::Expr;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("degree {degree} exceeds the supported maximum of 2")]
    DegreeTooHigh { degree: usize },
    #[error("expression is not a polynomial in x")]
    NotPolynomial,
    #[error("square root of a negative number")]
    NegativeRadicand,
    #[error("constants mix several distinct square roots")]
    UnsupportedRadical,
    #[error("numbers grow beyond the supported size")]
    TooLarge,
}

/// The reduced form `n'/d'` of `n/d`, with `n' = n/gcd(n,d)` and `d' = d/gcd(n,d)`.
pub fn simplify_fraction(r: &Rational) -> Rational {
    r.reduced()
}

/// Exact value of an `x`-free expression, if every square root in it can be
/// taken (non-negative rational radicands) and nothing overflows.
pub fn fold_constant(e: &Expr) -> Option<Surd> {
    match e {
        Expr::Const(c) => Some(Surd::from_rational(c.reduced())),
        Expr::Var => None,
        Expr::Sum(items) => {
            let mut acc = Surd::zero();
            for item in items {
                acc = acc.add(&fold_constant(item)?);
            }
            Some(acc)
        }
        Expr::Prod(items) => {
            let mut acc = Surd::one();
            for item in items {
                acc = acc.mul(&fold_constant(item)?);
                if acc.bits() > MAX_CONSTANT_BITS {
                    return None;
                }
            }
            Some(acc)
        }
        Expr::Pow(b, n) => fold_constant(b)?.pow_bounded(*n, MAX_CONSTANT_BITS),
        Expr::Neg(b) => Some(fold_constant(b)?.neg()),
        Expr::Sqrt(b) => Surd::sqrt_of(&fold_constant(b)?.as_rational()?),
    }
}

/// Rational value of an `x`-free expression.
pub fn fold_rational(e: &Expr) -> Option<Rational> {
    fold_constant(e)?.as_rational()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_expr;
    use num_bigint::BigInt;

    /// Euclid on absolute values; independent of the library gcd.
    fn euclid(mut a: i64, mut b: i64) -> i64 {
        a = a.abs();
        b = b.abs();
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        a
    }

    fn raw(n: i64, d: i64) -> Rational {
        Rational::new_raw(BigInt::from(n), BigInt::from(d)).unwrap()
    }

    #[test]
    fn simplify_fraction_examples() {
        assert_eq!(simplify_fraction(&raw(6, 4)), raw(3, 2));
        assert_eq!(simplify_fraction(&raw(0, 5)), raw(0, 1));
        assert_eq!(simplify_fraction(&raw(-4, 6)), raw(-2, 3));
    }

    #[test]
    fn simplify_fraction_against_euclid() {
        for n in -30i64..=30 {
            for d in 1i64..=30 {
                let out = simplify_fraction(&raw(n, d));
                let g = if n == 0 { d } else { euclid(n, d) };
                assert_eq!(out, raw(n / g, d / g), "{n}/{d}");
                assert_eq!(simplify_fraction(&out), out);
                // value preserved: n * d' == n' * d
                assert_eq!(
                    BigInt::from(n) * out.denom(),
                    out.numer() * BigInt::from(d)
                );
            }
        }
    }

    #[test]
    fn folding() {
        let f = |t: &str| fold_constant(&parse_expr(t).unwrap());
        assert_eq!(f("9 - 9"), Some(Surd::zero()));
        assert_eq!(f("1/2*(2+sqrt(36))"), Some(Surd::from_int(4)));
        assert_eq!(f("sqrt(8)").unwrap().to_string(), "2*sqrt(2)");
        assert_eq!(f("x"), None);
        assert_eq!(f("sqrt(-4)"), None);
        assert_eq!(f("((9^64)^64)^64"), None);
    }
}
