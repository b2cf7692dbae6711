use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::surd::{ExactNumber, Surd, MAX_CONSTANT_BITS};
use super::AlgebraError;
use crate::expr::{EqSet, Equation, Expr};
use crate::rational::Rational;

/// Intermediate degree bound while expanding; the final bound is 2.
const MAX_WORKING_DEGREE: usize = 64;

/// Dense univariate polynomial, `coeffs[k]` multiplies `x^k`. No trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Poly {
    coeffs: Vec<Surd>,
}

impl Poly {
    pub fn constant(c: Surd) -> Poly {
        Poly { coeffs: vec![c] }.trimmed()
    }

    pub fn x() -> Poly {
        Poly { coeffs: vec![Surd::zero(), Surd::one()] }
    }

    pub fn coeffs(&self) -> &[Surd] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Surd {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial at degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn trimmed(mut self) -> Poly {
        while self.coeffs.last().is_some_and(Surd::is_zero) {
            self.coeffs.pop();
        }
        self
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k).add(&other.coeff(k))).collect();
        Poly { coeffs }.trimmed()
    }

    pub fn neg(&self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(Surd::neg).collect() }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly, AlgebraError> {
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::default());
        }
        let degree = self.degree() + other.degree();
        if degree > MAX_WORKING_DEGREE {
            return Err(AlgebraError::DegreeTooHigh { degree });
        }
        let mut coeffs = vec![Surd::zero(); degree + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        if coeffs.iter().any(|c| c.bits() > MAX_CONSTANT_BITS) {
            return Err(AlgebraError::TooLarge);
        }
        Ok(Poly { coeffs }.trimmed())
    }

    pub fn scale(&self, k: &Surd) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| c.mul(k)).collect() }.trimmed()
    }

    /// The polynomial written as a descending-degree sum of monomials.
    pub fn to_expr(&self) -> Expr {
        let mut items = Vec::new();
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            items.push(monomial(c, k as u32));
        }
        Expr::sum(items)
    }
}

/// `c * x^k` in its usual written form.
pub(crate) fn monomial(c: &Surd, k: u32) -> Expr {
    if k == 0 {
        return c.to_expr();
    }
    let power = Expr::pow(Expr::Var, k);
    if c.is_one() {
        power
    } else if c.is_minus_one() {
        Expr::neg(power)
    } else {
        Expr::prod(vec![c.to_expr(), power])
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

/// Fully expands `e` into a polynomial in `x`.
pub fn poly_of(e: &Expr) -> Result<Poly, AlgebraError> {
    match e {
        Expr::Const(c) => Ok(Poly::constant(Surd::from_rational(c.reduced()))),
        Expr::Var => Ok(Poly::x()),
        Expr::Sum(items) => {
            let mut acc = Poly::default();
            for item in items {
                acc = acc.add(&poly_of(item)?);
            }
            Ok(acc)
        }
        Expr::Prod(items) => {
            let mut acc = Poly::constant(Surd::one());
            for item in items {
                acc = acc.mul(&poly_of(item)?)?;
            }
            Ok(acc)
        }
        Expr::Pow(b, n) => {
            let base = poly_of(b)?;
            let mut acc = Poly::constant(Surd::one());
            for _ in 0..*n {
                acc = acc.mul(&base)?;
            }
            Ok(acc)
        }
        Expr::Neg(b) => Ok(poly_of(b)?.neg()),
        Expr::Sqrt(b) => {
            let inner = poly_of(b)?;
            if inner.degree() > 0 {
                return Err(AlgebraError::NotPolynomial);
            }
            let value = inner.coeff(0);
            let r = value.as_rational().ok_or(AlgebraError::UnsupportedRadical)?;
            let root = Surd::sqrt_of(&r).ok_or(AlgebraError::NegativeRadicand)?;
            Ok(Poly::constant(root))
        }
    }
}

fn equation_poly(eq: &Equation) -> Result<Poly, AlgebraError> {
    Ok(poly_of(&eq.lhs)?.sub(&poly_of(&eq.rhs)?))
}

/// Scales to coprime integer coefficients with a positive leading
/// coefficient; polynomials with irrational coefficients are made monic.
fn canonical_scale(p: &Poly) -> Poly {
    if p.is_zero() {
        return p.clone();
    }
    let rationals: Option<Vec<Rational>> = p.coeffs.iter().map(Surd::as_rational).collect();
    match rationals {
        Some(rs) => {
            let mut lcm = BigInt::one();
            let mut gcd = BigInt::zero();
            for r in &rs {
                lcm = lcm.lcm(r.denom());
                gcd = gcd.gcd(r.numer());
            }
            let mut factor = Rational::new(lcm, gcd);
            if rs.last().is_some_and(Rational::is_negative) {
                factor = -factor;
            }
            p.scale(&Surd::from_rational(factor))
        }
        None => match p.coeffs.last().and_then(Surd::inverse) {
            Some(inv) => p.scale(&inv),
            None => {
                if p.coeffs.last().is_some_and(|c| c.leading_sign() < 0) {
                    p.neg()
                } else {
                    p.clone()
                }
            }
        },
    }
}

/// Every equation as `P(x) = 0`, fully expanded and collected, descending
/// degree, coprime integer coefficients, positive leading coefficient;
/// duplicates removed and equations in text order.
pub fn nf_full(s: &EqSet) -> Result<EqSet, AlgebraError> {
    let mut rendered: BTreeSet<(String, Equation)> = BTreeSet::new();
    for eq in s.equations() {
        let p = canonical_scale(&equation_poly(eq)?);
        let out = Equation::new(p.to_expr(), Expr::zero());
        rendered.insert((out.to_string(), out));
    }
    Ok(EqSet::new(rendered.into_iter().map(|(_, e)| e).collect()))
}

/// Real solution set of an equation set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RootSet {
    Finite(BTreeSet<ExactNumber>),
    AllReals,
}

impl RootSet {
    pub fn empty() -> RootSet {
        RootSet::Finite(BTreeSet::new())
    }

    pub fn union(self, other: RootSet) -> RootSet {
        match (self, other) {
            (RootSet::AllReals, _) | (_, RootSet::AllReals) => RootSet::AllReals,
            (RootSet::Finite(mut a), RootSet::Finite(b)) => {
                a.extend(b);
                RootSet::Finite(a)
            }
        }
    }

    pub fn contains(&self, v: &ExactNumber) -> bool {
        match self {
            RootSet::AllReals => true,
            RootSet::Finite(roots) => roots.contains(v),
        }
    }

    /// Roots in increasing numeric order.
    pub fn sorted(&self) -> Vec<ExactNumber> {
        match self {
            RootSet::AllReals => Vec::new(),
            RootSet::Finite(roots) => {
                let mut v: Vec<_> = roots.iter().cloned().collect();
                v.sort_by(|a, b| a.to_f64().total_cmp(&b.to_f64()).then_with(|| a.cmp(b)));
                v
            }
        }
    }
}

impl fmt::Display for RootSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootSet::AllReals => write!(f, "all reals"),
            RootSet::Finite(_) => {
                let items: Vec<String> = self.sorted().iter().map(ToString::to_string).collect();
                write!(f, "{{{}}}", items.join(", "))
            }
        }
    }
}

fn exact(s: &Surd) -> Result<ExactNumber, AlgebraError> {
    ExactNumber::try_from(s).map_err(|_| AlgebraError::UnsupportedRadical)
}

fn poly_roots(p: &Poly) -> Result<RootSet, AlgebraError> {
    match p.degree() {
        _ if p.is_zero() => Ok(RootSet::AllReals),
        0 => Ok(RootSet::empty()),
        1 => {
            let inv = p.coeff(1).inverse().ok_or(AlgebraError::UnsupportedRadical)?;
            let root = p.coeff(0).neg().mul(&inv);
            Ok(RootSet::Finite([exact(&root)?].into_iter().collect()))
        }
        2 => {
            let inv = p.coeff(2).inverse().ok_or(AlgebraError::UnsupportedRadical)?;
            let b = p.coeff(1).mul(&inv);
            let c = p.coeff(0).mul(&inv);
            // x^2 + b x + c = 0  =>  x = (-b +- sqrt(b^2 - 4c)) / 2
            let disc = b.mul(&b).sub(&c.scale(&Rational::from(4)));
            let disc = disc.as_rational().ok_or(AlgebraError::UnsupportedRadical)?;
            if disc.is_negative() {
                return Ok(RootSet::empty());
            }
            let root = Surd::sqrt_of(&disc).expect("non-negative");
            let half = Rational::from_i64s(1, 2);
            let minus_b = b.neg();
            let r1 = minus_b.add(&root).scale(&half);
            let r2 = minus_b.sub(&root).scale(&half);
            Ok(RootSet::Finite([exact(&r1)?, exact(&r2)?].into_iter().collect()))
        }
        degree => Err(AlgebraError::DegreeTooHigh { degree }),
    }
}

/// Union of the real solutions of every equation in the set.
pub fn root_set(s: &EqSet) -> Result<RootSet, AlgebraError> {
    let mut acc = RootSet::empty();
    for eq in s.equations() {
        acc = acc.union(poly_roots(&equation_poly(eq)?)?);
    }
    Ok(acc)
}

/// Same real solution set.
pub fn equivalent(a: &EqSet, b: &EqSet) -> Result<bool, AlgebraError> {
    Ok(root_set(a)? == root_set(b)?)
}
