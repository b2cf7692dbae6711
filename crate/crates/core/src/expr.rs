//! Expression trees, equations and equation sets over the single unknown `x`.

use std::fmt;

use crate::algebra::fold_constant;
use crate::rational::Rational;

/// A polynomial-ish expression in `x` with exact rational constants.
///
/// Build nodes through the smart constructors ([`Expr::sum`], [`Expr::prod`],
/// [`Expr::pow`]) so that sums and products stay flat.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Expr {
    Const(Rational),
    Var,
    Sum(Vec<Expr>),
    Prod(Vec<Expr>),
    Pow(Box<Expr>, u32),
    Neg(Box<Expr>),
    Sqrt(Box<Expr>),
}

impl Expr {
    pub fn int(n: i64) -> Expr {
        Expr::Const(Rational::from_integer(n))
    }

    pub fn constant(r: Rational) -> Expr {
        Expr::Const(r)
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    /// Flattening sum. An empty list is `0`, a singleton is its element.
    pub fn sum(items: Vec<Expr>) -> Expr {
        let mut flat = Vec::with_capacity(items.len());
        for item in items {
            match item {
                Expr::Sum(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => Expr::zero(),
            1 => flat.pop().unwrap(),
            _ => Expr::Sum(flat),
        }
    }

    /// Flattening product. An empty list is `1`, a singleton is its element.
    pub fn prod(items: Vec<Expr>) -> Expr {
        let mut flat = Vec::with_capacity(items.len());
        for item in items {
            match item {
                Expr::Prod(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => Expr::int(1),
            1 => flat.pop().unwrap(),
            _ => Expr::Prod(flat),
        }
    }

    /// `base^exp`; exponent 1 is the base itself and exponent 0 is `1`.
    pub fn pow(base: Expr, exp: u32) -> Expr {
        match exp {
            0 => Expr::int(1),
            1 => base,
            _ => Expr::Pow(Box::new(base), exp),
        }
    }

    pub fn neg(inner: Expr) -> Expr {
        Expr::Neg(Box::new(inner))
    }

    pub fn sqrt(inner: Expr) -> Expr {
        Expr::Sqrt(Box::new(inner))
    }

    /// The additive inverse written the way a person would write it:
    /// `3 -> -3`, `-x -> x`, `2*x -> -2*x`, `x*(x-1) -> -x*(x-1)`.
    pub fn negated(&self) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(-c),
            Expr::Neg(inner) => (**inner).clone(),
            Expr::Prod(factors) => {
                let mut factors = factors.clone();
                match &factors[0] {
                    Expr::Const(c) => {
                        let flipped = -c;
                        if flipped.is_one() {
                            factors.remove(0);
                        } else {
                            factors[0] = Expr::Const(flipped);
                        }
                    }
                    Expr::Neg(inner) => factors[0] = (**inner).clone(),
                    Expr::Sum(_) | Expr::Prod(_) => return Expr::neg(self.clone()),
                    other => factors[0] = Expr::neg(other.clone()),
                }
                Expr::prod(factors)
            }
            other => Expr::neg(other.clone()),
        }
    }

    /// True when no `x` occurs in the tree.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Const(_) => true,
            Expr::Var => false,
            Expr::Sum(items) | Expr::Prod(items) => items.iter().all(Expr::is_constant),
            Expr::Pow(b, _) | Expr::Neg(b) | Expr::Sqrt(b) => b.is_constant(),
        }
    }

    pub fn is_literal_zero(&self) -> bool {
        matches!(self, Expr::Const(c) if c.is_zero())
    }

    /// Top-level summands: the children of a sum, or the expression itself.
    pub fn summands(&self) -> Vec<&Expr> {
        match self {
            Expr::Sum(items) => items.iter().collect(),
            other => vec![other],
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var => 1,
            Expr::Sum(items) | Expr::Prod(items) => 1 + items.iter().map(Expr::size).sum::<usize>(),
            Expr::Pow(b, _) | Expr::Neg(b) | Expr::Sqrt(b) => 1 + b.size(),
        }
    }

    /// True when no sum directly contains a sum and no product a product.
    pub fn is_flat(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Var => true,
            Expr::Sum(items) => {
                items.len() >= 2
                    && items.iter().all(|i| !matches!(i, Expr::Sum(_)) && i.is_flat())
            }
            Expr::Prod(items) => {
                items.len() >= 2
                    && items.iter().all(|i| !matches!(i, Expr::Prod(_)) && i.is_flat())
            }
            Expr::Pow(b, e) => *e >= 2 && b.is_flat(),
            Expr::Neg(b) | Expr::Sqrt(b) => b.is_flat(),
        }
    }
}

/// Failure of exact evaluation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("square root of a negative number")]
    NegativeRadicand,
    #[error("square root of {0} is irrational")]
    IrrationalSqrt(Rational),
    #[error("value too large to evaluate exactly")]
    TooLarge,
}

const EVAL_MAX_BITS: u64 = 1 << 16;

/// Exact value of `e` with `x := v`. Square roots must come out rational.
pub fn eval_at(e: &Expr, v: &Rational) -> Result<Rational, EvalError> {
    Ok(match e {
        Expr::Const(c) => c.reduced(),
        Expr::Var => v.reduced(),
        Expr::Sum(items) => {
            let mut acc = Rational::zero();
            for item in items {
                acc = &acc + &eval_at(item, v)?;
            }
            acc
        }
        Expr::Prod(items) => {
            let mut acc = Rational::one();
            for item in items {
                acc = &acc * &eval_at(item, v)?;
            }
            acc
        }
        Expr::Pow(b, n) => eval_at(b, v)?
            .pow_bounded(*n, EVAL_MAX_BITS)
            .ok_or(EvalError::TooLarge)?,
        Expr::Neg(b) => -eval_at(b, v)?,
        Expr::Sqrt(b) => {
            let r = eval_at(b, v)?;
            if r.is_negative() {
                return Err(EvalError::NegativeRadicand);
            }
            crate::algebra::rational_sqrt(&r).ok_or(EvalError::IrrationalSqrt(r))?
        }
    })
}

/// Which side of an equation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Equation {
    pub lhs: Expr,
    pub rhs: Expr,
}

impl Equation {
    pub fn new(lhs: Expr, rhs: Expr) -> Self {
        Equation { lhs, rhs }
    }

    pub fn side(&self, side: Side) -> &Expr {
        match side {
            Side::Left => &self.lhs,
            Side::Right => &self.rhs,
        }
    }

    pub fn side_mut(&mut self, side: Side) -> &mut Expr {
        match side {
            Side::Left => &mut self.lhs,
            Side::Right => &mut self.rhs,
        }
    }

    pub fn swapped(&self) -> Equation {
        Equation { lhs: self.rhs.clone(), rhs: self.lhs.clone() }
    }

    /// `x = c` with `c` free of `x`.
    pub fn is_solved(&self) -> bool {
        matches!(self.lhs, Expr::Var) && self.rhs.is_constant()
    }
}

/// A disjunction of equations: one state of a solution.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct EqSet {
    equations: Vec<Equation>,
}

impl EqSet {
    /// Panics on an empty list; an equation set always holds at least one equation.
    pub fn new(equations: Vec<Equation>) -> Self {
        assert!(!equations.is_empty(), "an equation set needs at least one equation");
        EqSet { equations }
    }

    pub fn single(eq: Equation) -> Self {
        EqSet { equations: vec![eq] }
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    pub fn into_equations(self) -> Vec<Equation> {
        self.equations
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    /// Every equation is `x = constant`.
    pub fn is_solved(&self) -> bool {
        self.equations.iter().all(Equation::is_solved)
    }
}

impl fmt::Display for EqSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::render::render(self))
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::render::render_equation(self))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::render::render_expr(self))
    }
}

/// True when the side is zero as written: a literal `0`, or a pure constant
/// that folds to zero (`9 - 9`). Folding never crosses `x`.
pub fn side_is_zero(e: &Expr) -> bool {
    if e.is_literal_zero() {
        return true;
    }
    e.is_constant() && fold_constant(e).is_some_and(|c| c.is_zero())
}

/// Nonzero top-level summands on one side, as written.
pub fn side_term_count(e: &Expr) -> usize {
    if side_is_zero(e) {
        return 0;
    }
    e.summands().into_iter().filter(|s| !s.is_literal_zero()).count()
}

/// Nonzero top-level summands over both sides of every equation.
pub fn term_count(s: &EqSet) -> usize {
    s.equations()
        .iter()
        .map(|eq| side_term_count(&eq.lhs) + side_term_count(&eq.rhs))
        .sum()
}

/// The equation has a zero side (`P = 0`, `0 = P`, or `0 = 0`).
pub fn is_zero_derived(e: &Equation) -> bool {
    side_is_zero(&e.lhs) || side_is_zero(&e.rhs)
}
