//! The structure-preserving normal form.
//!
//! Each equation becomes `lhs - rhs = 0` with like terms collected and
//! numeric factors folded, but no product containing `x` is distributed and
//! no power is expanded: `(-x+1)^2 - 9` stays a square minus nine, while
//! `1 - x` and `-x + 1` coincide. Inside every bracket the same
//! normalization applies recursively. A bracket raised to a power is
//! oriented so that its first term has a positive coefficient, the sign
//! moving to the outer coefficient (`(-x+1)^2 = (x-1)^2`, `2*(1-x) = -2*(x-1)`).

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet};

use super::surd::{Surd, MAX_CONSTANT_BITS};
use crate::expr::{EqSet, Equation, Expr};

/// A non-numeric factor of a normalized term.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum NFactor {
    X,
    /// A sum of at least two terms kept in brackets.
    Bracket(NSum),
    /// A square root that does not fold to a constant.
    Root(NSum),
    /// A constant too large to fold, kept as written.
    Opaque(Expr),
}

/// Product of factor powers, sorted; the key that identifies like terms.
pub type Core = Vec<(NFactor, u32)>;

/// A collected sum: core -> nonzero coefficient.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct NSum {
    terms: BTreeMap<Core, Surd>,
}

fn factor_degree(f: &NFactor) -> u64 {
    match f {
        NFactor::X => 1,
        NFactor::Bracket(s) => s.degree(),
        NFactor::Root(_) | NFactor::Opaque(_) => 0,
    }
}

fn core_degree(core: &Core) -> u64 {
    core.iter().map(|(f, e)| factor_degree(f) * u64::from(*e)).sum()
}

fn merge_cores(a: &Core, b: &Core) -> Core {
    let mut map: BTreeMap<NFactor, u32> = BTreeMap::new();
    for (f, e) in a.iter().chain(b.iter()) {
        *map.entry(f.clone()).or_insert(0) += e;
    }
    map.into_iter().collect()
}

impl NSum {
    pub fn zero() -> NSum {
        NSum::default()
    }

    fn term(coeff: Surd, core: Core) -> NSum {
        let mut s = NSum::zero();
        s.add_term(core, coeff);
        s
    }

    fn constant(c: Surd) -> NSum {
        NSum::term(c, Vec::new())
    }

    fn add_term(&mut self, core: Core, coeff: Surd) {
        if coeff.is_zero() {
            return;
        }
        let sum = match self.terms.get(&core) {
            Some(existing) => existing.add(&coeff),
            None => coeff,
        };
        if sum.is_zero() {
            self.terms.remove(&core);
        } else {
            self.terms.insert(core, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.terms.keys().map(core_degree).max().unwrap_or(0)
    }

    fn add(&mut self, other: NSum) {
        for (core, coeff) in other.terms {
            self.add_term(core, coeff);
        }
    }

    fn negated(&self) -> NSum {
        NSum {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c.neg())).collect(),
        }
    }

    fn single_term(&self) -> Option<(&Core, &Surd)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    fn as_constant(&self) -> Option<Surd> {
        if self.terms.is_empty() {
            return Some(Surd::zero());
        }
        match self.single_term() {
            Some((core, c)) if core.is_empty() => Some(c.clone()),
            _ => None,
        }
    }

    /// Terms in display order: descending degree, then core, then coefficient.
    pub fn ordered_terms(&self) -> Vec<(&Core, &Surd)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| {
            Reverse(core_degree(a.0))
                .cmp(&Reverse(core_degree(b.0)))
                .then_with(|| a.0.cmp(b.0))
                .then_with(|| a.1.cmp(b.1))
        });
        v
    }

    /// Written form of the collected sum.
    pub fn to_expr(&self) -> Expr {
        Expr::sum(
            self.ordered_terms()
                .into_iter()
                .map(|(core, coeff)| term_expr(core, coeff))
                .collect(),
        )
    }
}

fn factor_expr(f: &NFactor, exp: u32) -> Expr {
    let base = match f {
        NFactor::X => Expr::Var,
        NFactor::Bracket(s) => s.to_expr(),
        NFactor::Root(s) => Expr::sqrt(s.to_expr()),
        NFactor::Opaque(e) => e.clone(),
    };
    Expr::pow(base, exp)
}

fn term_expr(core: &Core, coeff: &Surd) -> Expr {
    if core.is_empty() {
        return coeff.to_expr();
    }
    let body = Expr::prod(core.iter().map(|(f, e)| factor_expr(f, *e)).collect());
    if coeff.is_one() {
        body
    } else if coeff.is_minus_one() {
        body.negated()
    } else {
        Expr::prod(vec![coeff.to_expr(), body])
    }
}

/// Orients a multi-term bracket so its first displayed term is positive.
/// Returns the oriented bracket and whether it was flipped.
fn orient(bracket: NSum) -> (NSum, bool) {
    let flip = bracket
        .ordered_terms()
        .first()
        .is_some_and(|(_, c)| c.leading_sign() < 0);
    if flip {
        (bracket.negated(), true)
    } else {
        (bracket, false)
    }
}

/// Single-term normalized value `coeff * core`.
struct Term {
    coeff: Surd,
    core: Core,
}

impl Term {
    fn one() -> Term {
        Term { coeff: Surd::one(), core: Vec::new() }
    }

    fn mul_term(&mut self, coeff: &Surd, core: &Core) {
        self.coeff = self.coeff.mul(coeff);
        self.core = merge_cores(&self.core, core);
    }

    fn into_sum(self) -> NSum {
        NSum::term(self.coeff, self.core)
    }
}

/// Normalizes an expression into a collected sum without distributing.
pub fn normalize_expr(e: &Expr) -> NSum {
    match e {
        Expr::Const(c) => NSum::constant(Surd::from_rational(c.reduced())),
        Expr::Var => NSum::term(Surd::one(), vec![(NFactor::X, 1)]),
        Expr::Sum(items) => {
            let mut acc = NSum::zero();
            for item in items {
                acc.add(normalize_expr(item));
            }
            acc
        }
        Expr::Neg(inner) => normalize_expr(inner).negated(),
        Expr::Prod(items) => {
            let mut acc = Term::one();
            for item in items {
                let n = normalize_expr(item);
                if n.is_zero() {
                    return NSum::zero();
                }
                match n.single_term() {
                    Some((core, coeff)) => acc.mul_term(coeff, core),
                    None => {
                        let (bracket, flipped) = orient(n);
                        let sign = if flipped { Surd::from_int(-1) } else { Surd::one() };
                        acc.mul_term(&sign, &vec![(NFactor::Bracket(bracket), 1)]);
                    }
                }
                if acc.coeff.bits() > MAX_CONSTANT_BITS {
                    return opaque(e);
                }
            }
            acc.into_sum()
        }
        Expr::Pow(base, exp) => {
            let n = normalize_expr(base);
            if n.is_zero() {
                return NSum::zero();
            }
            match n.single_term() {
                Some((core, coeff)) => {
                    let Some(c) = coeff.pow_bounded(*exp, MAX_CONSTANT_BITS) else {
                        // keep the oversized constant as written, scale the rest
                        let big = NFactor::Opaque(Expr::pow(coeff.to_expr(), *exp));
                        let mut core: Core =
                            core.iter().map(|(f, e)| (f.clone(), e * exp)).collect();
                        core = merge_cores(&core, &vec![(big, 1)]);
                        return NSum::term(Surd::one(), core);
                    };
                    let core = core.iter().map(|(f, e)| (f.clone(), e * exp)).collect();
                    NSum::term(c, core)
                }
                None => {
                    let (bracket, flipped) = orient(n);
                    let coeff = if flipped && exp % 2 == 1 {
                        Surd::from_int(-1)
                    } else {
                        Surd::one()
                    };
                    NSum::term(coeff, vec![(NFactor::Bracket(bracket), *exp)])
                }
            }
        }
        Expr::Sqrt(inner) => {
            let n = normalize_expr(inner);
            if let Some(root) = n
                .as_constant()
                .and_then(|c| c.as_rational())
                .and_then(|r| Surd::sqrt_of(&r))
            {
                return NSum::constant(root);
            }
            NSum::term(Surd::one(), vec![(NFactor::Root(n), 1)])
        }
    }
}

fn opaque(e: &Expr) -> NSum {
    NSum::term(Surd::one(), vec![(NFactor::Opaque(e.clone()), 1)])
}

/// Canonical fingerprint of an equation set under the structural normal form:
/// the set of normalized `lhs - rhs`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct StructKey(pub BTreeSet<NSum>);

/// Normalized `lhs - rhs` of one equation.
pub fn struct_key_equation(eq: &Equation) -> NSum {
    let mut n = normalize_expr(&eq.lhs);
    n.add(normalize_expr(&eq.rhs).negated());
    n
}

pub fn struct_key(s: &EqSet) -> StructKey {
    StructKey(s.equations().iter().map(struct_key_equation).collect())
}

/// Every equation as `(lhs - rhs, collected, brackets kept) = 0`;
/// duplicates removed and equations in text order.
pub fn nf_struct(s: &EqSet) -> EqSet {
    let mut out: BTreeSet<(String, Equation)> = BTreeSet::new();
    for n in struct_key(s).0 {
        let eq = Equation::new(n.to_expr(), Expr::zero());
        out.insert((eq.to_string(), eq));
    }
    EqSet::new(out.into_iter().map(|(_, e)| e).collect())
}

impl StructKey {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_eqset;

    fn nf(t: &str) -> EqSet {
        nf_struct(&parse_eqset(t).unwrap())
    }

    #[test]
    fn commuted_linear_equations_coincide() {
        assert_eq!(nf("1 - x = 3"), nf("-x + 1 = 3"));
        assert_eq!(nf("1 - x = 3").to_string(), "-x-2 = 0");
    }

    #[test]
    fn zero_derivation_keeps_normal_form() {
        assert_eq!(nf("(-x+1)^2 - 9 = 0"), nf("(-x+1)^2 = 9"));
        assert_eq!(nf("(-x+1)^2 = 9").to_string(), "(x-1)^2-9 = 0");
    }

    #[test]
    fn expansion_changes_normal_form() {
        assert_ne!(nf("x^2 - 2*x - 8 = 0"), nf("(-x+1)^2 = 9"));
    }

    #[test]
    fn brackets_are_not_distributed() {
        assert_ne!(nf("2*(x-3) = 0"), nf("2*x - 6 = 0"));
        assert_eq!(nf("2*(x-3) = 0"), nf("(x-3)*2 = 0"));
        assert_eq!(nf("2*(1-x) = 0"), nf("-2*(x-1) = 0"));
        assert_eq!(nf("x*(x-3) = 0"), nf("(-3+x)*x = 0"));
        assert_eq!(nf("2*3*x = 1"), nf("6*x = 1"));
        assert_eq!(nf("(x+1)*(x+1) = 0"), nf("(1+x)^2 = 0"));
    }

    #[test]
    fn overall_sign_is_kept() {
        assert_ne!(nf("-x = 2"), nf("x = -2"));
        assert_ne!(nf("2*x = 4"), nf("x = 2"));
    }

    #[test]
    fn constants_fold() {
        assert_eq!(nf("-x = 3 - 1"), nf("-x = 2"));
        assert_eq!(nf("x = 1/2*(2+sqrt(36))"), nf("x = 4"));
        assert_eq!(nf("x = 6/4"), nf("x = 3/2"));
        assert_eq!(nf("x = sqrt(8)"), nf("x = 2*sqrt(2)"));
    }

    #[test]
    fn equation_order_is_irrelevant() {
        assert_eq!(nf("x = 1 or x = 2"), nf("x = 2 or x = 1"));
        assert_eq!(nf("x = 1 or x = 1").len(), 1);
    }

    #[test]
    fn idempotent_on_samples() {
        for t in [
            "(-x+1)^2 = 9",
            "x*(2*x+4) = 0",
            "-(x+1) = 3 or 2*(1-x)^3 = x",
            "x = 1+sqrt(2) or x = 1-sqrt(2)",
            "sqrt(x+1) = sqrt(-2)",
            "((9^64)^64)^64 = x",
            "(1+sqrt(2))*x = 3",
        ] {
            let once = nf(t);
            assert_eq!(nf_struct(&once), once, "{t}");
        }
    }
}
