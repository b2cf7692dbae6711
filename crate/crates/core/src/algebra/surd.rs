//! Exact constants of the form `q0 + q1*sqrt(d1) + q2*sqrt(d2) + ...`.
//!
//! The radicands are squarefree, which makes the representation canonical and
//! closes it under addition and multiplication. Roots of quadratics with
//! rational coefficients need at most one radicand; that case is
//! [`ExactNumber`].

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::expr::Expr;
use crate::rational::Rational;

/// Largest coefficient size (in bits) kept while folding constants.
pub const MAX_CONSTANT_BITS: u64 = 4096;

/// Splits `n > 0` into `(outside, inside)` with `n = outside^2 * inside` and
/// `inside` squarefree.
///
/// Trial division is exhaustive below 10^12; above that, whatever cofactor is
/// left after dividing out primes below 10^6 is treated as squarefree unless
/// it is itself a perfect square.
pub fn squarefree_split(n: &BigInt) -> (BigInt, BigInt) {
    assert!(n.is_positive(), "squarefree_split needs a positive integer");
    if let Some(small) = n.to_u64() {
        let (o, i) = squarefree_split_u64(small);
        return (BigInt::from(o), BigInt::from(i));
    }
    let mut rest = n.clone();
    let mut outside = BigInt::one();
    let mut inside = BigInt::one();
    let mut p = BigInt::from(2u32);
    let limit = BigInt::from(1_000_000u32);
    while &p * &p <= rest && p <= limit {
        let mut count = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            count += 1;
        }
        for _ in 0..count / 2 {
            outside *= &p;
        }
        if count % 2 == 1 {
            inside *= &p;
        }
        p += if p == BigInt::from(2u32) { 1u32 } else { 2u32 };
    }
    let root = rest.sqrt();
    if &root * &root == rest {
        outside *= root;
    } else {
        inside *= rest;
    }
    (outside, inside)
}

fn squarefree_split_u64(mut n: u64) -> (u64, u64) {
    let mut outside = 1u64;
    let mut inside = 1u64;
    let mut p = 2u64;
    while p.saturating_mul(p) <= n && p <= 1_000_000 {
        let mut count = 0;
        while n.is_multiple_of(p) {
            n /= p;
            count += 1;
        }
        for _ in 0..count / 2 {
            outside *= p;
        }
        if count % 2 == 1 {
            inside *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let root = n.sqrt();
    if root * root == n {
        outside *= root;
    } else {
        inside *= n;
    }
    (outside, inside)
}

/// Exact square root of a non-negative rational, when it is rational.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let r = r.reduced();
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &n * &n == *r.numer() && &d * &d == *r.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// A finite sum of rational multiples of square roots of squarefree integers.
/// Radicand 1 holds the rational part. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Surd {
    parts: BTreeMap<BigInt, Rational>,
}

impl Surd {
    pub fn zero() -> Surd {
        Surd::default()
    }

    pub fn one() -> Surd {
        Surd::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Surd {
        let mut s = Surd::zero();
        s.add_part(BigInt::one(), r.reduced());
        s
    }

    pub fn from_int(n: i64) -> Surd {
        Surd::from_rational(Rational::from(n))
    }

    fn add_part(&mut self, radicand: BigInt, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let sum = match self.parts.get(&radicand) {
            Some(existing) => existing + &coeff,
            None => coeff,
        };
        if sum.is_zero() {
            self.parts.remove(&radicand);
        } else {
            self.parts.insert(radicand, sum);
        }
    }

    /// `sqrt(r)` for `r >= 0`, with the square part pulled out.
    pub fn sqrt_of(r: &Rational) -> Option<Surd> {
        if r.is_negative() {
            return None;
        }
        if r.is_zero() {
            return Some(Surd::zero());
        }
        let r = r.reduced();
        // sqrt(n/d) = sqrt(n*d)/d
        let (outside, inside) = squarefree_split(&(r.numer() * r.denom()));
        let mut s = Surd::zero();
        s.add_part(inside, Rational::new(outside, r.denom().clone()));
        Some(s)
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|r| r.is_one())
    }

    pub fn is_minus_one(&self) -> bool {
        self.as_rational().is_some_and(|r| (-r).is_one())
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self.parts.len() {
            0 => Some(Rational::zero()),
            1 => self.parts.get(&BigInt::one()).cloned(),
            _ => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    /// Sign of the first stored component: a canonical orientation, not the
    /// numeric sign.
    pub fn leading_sign(&self) -> i8 {
        match self.parts.values().next() {
            None => 0,
            Some(c) if c.is_negative() => -1,
            Some(_) => 1,
        }
    }

    pub fn bits(&self) -> u64 {
        self.parts.values().map(Rational::bits).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Surd) -> Surd {
        let mut out = self.clone();
        for (d, c) in &other.parts {
            out.add_part(d.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Surd) -> Surd {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Surd {
        Surd {
            parts: self.parts.iter().map(|(d, c)| (d.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> Surd {
        if k.is_zero() {
            return Surd::zero();
        }
        Surd {
            parts: self.parts.iter().map(|(d, c)| (d.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Surd) -> Surd {
        let mut out = Surd::zero();
        for (d1, c1) in &self.parts {
            for (d2, c2) in &other.parts {
                // sqrt(d1)*sqrt(d2) = g*sqrt((d1/g)*(d2/g)), g = gcd(d1, d2)
                let g = d1.gcd(d2);
                let radicand = (d1 / &g) * (d2 / &g);
                let coeff = &(c1 * c2) * &Rational::from_integer(g);
                out.add_part(radicand, coeff);
            }
        }
        out
    }

    /// `self^exp`, or `None` when the coefficients would exceed `max_bits`.
    pub fn pow_bounded(&self, exp: u32, max_bits: u64) -> Option<Surd> {
        if let Some(r) = self.as_rational() {
            return r.pow_bounded(exp, max_bits).map(Surd::from_rational);
        }
        let mut acc = Surd::one();
        for _ in 0..exp {
            acc = acc.mul(self);
            if acc.bits() > max_bits {
                return None;
            }
        }
        Some(acc)
    }

    /// Multiplicative inverse; available when at most one radicand other
    /// than 1 is present.
    pub fn inverse(&self) -> Option<Surd> {
        if self.is_zero() {
            return None;
        }
        if let Some(r) = self.as_rational() {
            return r.recip().map(Surd::from_rational);
        }
        let e = ExactNumber::try_from(self).ok()?;
        // 1/(p + q*sqrt(d)) = (p - q*sqrt(d)) / (p^2 - q^2*d)
        let norm = &(&e.rational * &e.rational)
            - &(&(&e.coeff * &e.coeff) * &Rational::from_integer(e.radicand.clone()));
        let inv = norm.recip()?;
        let conj = ExactNumber {
            rational: e.rational.clone(),
            coeff: -&e.coeff,
            radicand: e.radicand.clone(),
        };
        Some(Surd::from(&conj).scale(&inv))
    }

    pub fn div(&self, other: &Surd) -> Option<Surd> {
        other.inverse().map(|inv| self.mul(&inv))
    }

    pub fn to_f64(&self) -> f64 {
        self.parts
            .iter()
            .map(|(d, c)| c.to_f64() * d.to_f64().unwrap_or(f64::NAN).sqrt())
            .sum()
    }

    /// The canonical written form: rational part first, then each radical in
    /// increasing radicand order (`1-sqrt(2)`, `1/2*sqrt(5)`).
    pub fn to_expr(&self) -> Expr {
        let mut items = Vec::new();
        for (d, c) in &self.parts {
            if d.is_one() {
                items.push(Expr::Const(c.clone()));
                continue;
            }
            let root = Expr::sqrt(Expr::Const(Rational::from_integer(d.clone())));
            let item = if c.is_one() {
                root
            } else if (-c).is_one() {
                Expr::neg(root)
            } else {
                Expr::prod(vec![Expr::Const(c.clone()), root])
            };
            items.push(item);
        }
        Expr::sum(items)
    }
}

impl From<Rational> for Surd {
    fn from(r: Rational) -> Self {
        Surd::from_rational(r)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

/// A real number `rational + coeff*sqrt(radicand)` with `radicand`
/// squarefree. Pure rationals have `coeff = 0` and `radicand = 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ExactNumber {
    pub rational: Rational,
    pub coeff: Rational,
    pub radicand: BigInt,
}

impl ExactNumber {
    pub fn from_rational(r: Rational) -> Self {
        ExactNumber { rational: r.reduced(), coeff: Rational::zero(), radicand: BigInt::one() }
    }

    pub fn is_rational(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        Surd::from(self).to_f64()
    }

    pub fn to_expr(&self) -> Expr {
        Surd::from(self).to_expr()
    }
}

impl From<&ExactNumber> for Surd {
    fn from(e: &ExactNumber) -> Surd {
        let mut s = Surd::from_rational(e.rational.clone());
        s.add_part(e.radicand.clone(), e.coeff.reduced());
        s
    }
}

/// The surd has more than one distinct radical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedRadicals;

impl TryFrom<&Surd> for ExactNumber {
    type Error = MixedRadicals;

    fn try_from(s: &Surd) -> Result<Self, MixedRadicals> {
        let mut rational = Rational::zero();
        let mut radical: Option<(BigInt, Rational)> = None;
        for (d, c) in &s.parts {
            if d.is_one() {
                rational = c.clone();
            } else if radical.is_some() {
                return Err(MixedRadicals);
            } else {
                radical = Some((d.clone(), c.clone()));
            }
        }
        let (radicand, coeff) = radical.unwrap_or((BigInt::one(), Rational::zero()));
        Ok(ExactNumber { rational, coeff, radicand })
    }
}

impl fmt::Display for ExactNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_i64s(n, d)
    }

    #[test]
    fn squarefree_parts() {
        let cases = [(8u64, 2u64, 2u64), (72, 6, 2), (1, 1, 1), (49, 7, 1), (30, 1, 30)];
        for (n, o, i) in cases {
            assert_eq!(
                squarefree_split(&BigInt::from(n)),
                (BigInt::from(o), BigInt::from(i)),
                "{n}"
            );
        }
        let big = BigInt::from(u64::MAX) * BigInt::from(4u32);
        let (o, i) = squarefree_split(&big);
        assert_eq!(&o * &o * &i, big);
    }

    #[test]
    fn sqrt_extracts_squares() {
        assert_eq!(Surd::sqrt_of(&q(9, 1)).unwrap(), Surd::from_int(3));
        assert_eq!(Surd::sqrt_of(&q(8, 1)).unwrap().to_string(), "2*sqrt(2)");
        assert_eq!(Surd::sqrt_of(&q(1, 2)).unwrap().to_string(), "1/2*sqrt(2)");
        assert!(Surd::sqrt_of(&q(-1, 1)).is_none());
        assert_eq!(rational_sqrt(&q(9, 4)), Some(q(3, 2)));
        assert_eq!(rational_sqrt(&q(2, 1)), None);
    }

    #[test]
    fn ring_operations() {
        let r2 = Surd::sqrt_of(&q(2, 1)).unwrap();
        let r3 = Surd::sqrt_of(&q(3, 1)).unwrap();
        assert_eq!(r2.mul(&r2), Surd::from_int(2));
        assert_eq!(r2.mul(&r3), Surd::sqrt_of(&q(6, 1)).unwrap());
        let a = Surd::one().add(&r2);
        let b = Surd::one().sub(&r2);
        assert_eq!(a.mul(&b), Surd::from_int(-1));
        assert!(a.add(&a.neg()).is_zero());
    }

    #[test]
    fn inverse_of_single_radical() {
        let a = Surd::one().add(&Surd::sqrt_of(&q(2, 1)).unwrap());
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Surd::one());
        let mixed = Surd::sqrt_of(&q(2, 1)).unwrap().add(&Surd::sqrt_of(&q(3, 1)).unwrap());
        assert!(mixed.inverse().is_none());
        assert!(Surd::zero().inverse().is_none());
    }

    #[test]
    fn written_form() {
        let minus = Surd::one().sub(&Surd::sqrt_of(&q(2, 1)).unwrap());
        assert_eq!(minus.to_string(), "1-sqrt(2)");
        assert_eq!(Surd::zero().to_string(), "0");
        assert_eq!(Surd::from_rational(q(-3, 4)).to_string(), "-3/4");
    }
}
