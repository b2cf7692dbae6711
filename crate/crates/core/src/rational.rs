//! Exact rational numbers over arbitrary-precision integers.
//!
//! A [`Rational`] keeps the numerator and denominator exactly as they were
//! built, so `6/4` stays `6/4` until something asks for the reduced form.
//! Arithmetic always returns reduced results.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// An exact fraction `numer / denom` with `denom > 0`.
///
/// Equality is structural: `6/4 != 3/2`. Use [`Rational::value_eq`] to compare
/// values. Ordering is by value, with structural tie-breaking so that it stays
/// consistent with `Eq`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rational {
    numer: BigInt,
    denom: BigInt,
}

impl Rational {
    /// Builds `numer / denom` without reducing. The sign is moved to the
    /// numerator. Returns `None` for a zero denominator.
    pub fn new_raw(numer: BigInt, denom: BigInt) -> Option<Self> {
        if denom.is_zero() {
            return None;
        }
        if denom.is_negative() {
            Some(Rational { numer: -numer, denom: -denom })
        } else {
            Some(Rational { numer, denom })
        }
    }

    /// Builds the reduced fraction `numer / denom`. Panics on a zero denominator.
    pub fn new(numer: BigInt, denom: BigInt) -> Self {
        Rational::new_raw(numer, denom)
            .expect("zero denominator")
            .reduced()
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational { numer: n.into(), denom: BigInt::one() }
    }

    pub fn from_i64s(numer: i64, denom: i64) -> Self {
        Rational::new(BigInt::from(numer), BigInt::from(denom))
    }

    pub fn zero() -> Self {
        Rational::from_integer(0)
    }

    pub fn one() -> Self {
        Rational::from_integer(1)
    }

    pub fn numer(&self) -> &BigInt {
        &self.numer
    }

    pub fn denom(&self) -> &BigInt {
        &self.denom
    }

    pub fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.numer == self.denom
    }

    pub fn is_negative(&self) -> bool {
        self.numer.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        (&self.numer % &self.denom).is_zero()
    }

    /// True when stored in lowest terms.
    pub fn is_reduced(&self) -> bool {
        self.numer.gcd(&self.denom).is_one()
    }

    /// The canonical `n'/d'` form with `gcd(|n'|, d') = 1`.
    pub fn reduced(&self) -> Rational {
        if self.numer.is_zero() {
            return Rational::zero();
        }
        let g = self.numer.gcd(&self.denom);
        Rational { numer: &self.numer / &g, denom: &self.denom / &g }
    }

    pub fn value_eq(&self, other: &Rational) -> bool {
        &self.numer * &other.denom == &other.numer * &self.denom
    }

    pub fn value_cmp(&self, other: &Rational) -> Ordering {
        (&self.numer * &other.denom).cmp(&(&other.numer * &self.denom))
    }

    pub fn abs(&self) -> Rational {
        Rational { numer: self.numer.abs(), denom: self.denom.clone() }
    }

    pub fn recip(&self) -> Option<Rational> {
        Rational::new_raw(self.denom.clone(), self.numer.clone()).map(|r| r.reduced())
    }

    pub fn checked_div(&self, other: &Rational) -> Option<Rational> {
        other.recip().map(|r| self * &r)
    }

    /// `self^exp`, refusing results whose numerator or denominator would
    /// exceed `max_bits`.
    pub fn pow_bounded(&self, exp: u32, max_bits: u64) -> Option<Rational> {
        let r = self.reduced();
        let bits = r.numer.bits().max(r.denom.bits());
        if bits.saturating_mul(exp as u64) > max_bits {
            return None;
        }
        Some(Rational {
            numer: num_traits::pow(r.numer, exp as usize),
            denom: num_traits::pow(r.denom, exp as usize),
        })
    }

    /// Number of bits in the larger of numerator and denominator.
    pub fn bits(&self) -> u64 {
        self.numer.bits().max(self.denom.bits())
    }

    pub fn to_f64(&self) -> f64 {
        match (self.numer.to_f64(), self.denom.to_f64()) {
            (Some(n), Some(d)) => n / d,
            _ => f64::NAN,
        }
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value_cmp(other)
            .then_with(|| self.denom.cmp(&other.denom))
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom.is_one() {
            write!(f, "{}", self.numer)
        } else {
            write!(f, "{}/{}", self.numer, self.denom)
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer, self.denom)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

impl Add for &Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        Rational::new(
            &self.numer * &rhs.denom + &rhs.numer * &self.denom,
            &self.denom * &rhs.denom,
        )
    }
}

impl Sub for &Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        Rational::new(
            &self.numer * &rhs.denom - &rhs.numer * &self.denom,
            &self.denom * &rhs.denom,
        )
    }
}

impl Mul for &Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        Rational::new(&self.numer * &rhs.numer, &self.denom * &rhs.denom)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational { numer: -&self.numer, denom: self.denom.clone() }
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational { numer: -self.numer, denom: self.denom }
    }
}
