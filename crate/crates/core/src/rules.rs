//! The production rules for solving quadratic equations.
//!
//! Every rule acts either on all equations of a set at once or on one
//! designated equation; where it matters a [`Site`] also names a side and a
//! summand. Rules never change the solution set.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{fold_constant, fold_rational, poly_of, rational_sqrt};
use crate::expr::{side_is_zero, EqSet, Equation, Expr, Side};
use crate::rational::Rational;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RuleId {
    SqrtBothSides,
    MoveTerm,
    CollectTerms,
    NegateBothSides,
    DivByConst,
    Expand,
    FactorCommon,
    SplitZeroProduct,
    QuadraticFormula,
    Tidy,
}

impl RuleId {
    pub const ALL: [RuleId; 10] = [
        RuleId::SqrtBothSides,
        RuleId::MoveTerm,
        RuleId::CollectTerms,
        RuleId::NegateBothSides,
        RuleId::DivByConst,
        RuleId::Expand,
        RuleId::FactorCommon,
        RuleId::SplitZeroProduct,
        RuleId::QuadraticFormula,
        RuleId::Tidy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleId::SqrtBothSides => "SQRT_BOTH_SIDES",
            RuleId::MoveTerm => "MOVE_TERM",
            RuleId::CollectTerms => "COLLECT_TERMS",
            RuleId::NegateBothSides => "NEGATE_BOTH_SIDES",
            RuleId::DivByConst => "DIV_BY_CONST",
            RuleId::Expand => "EXPAND",
            RuleId::FactorCommon => "FACTOR_COMMON",
            RuleId::SplitZeroProduct => "SPLIT_ZERO_PRODUCT",
            RuleId::QuadraticFormula => "QUADRATIC_FORMULA",
            RuleId::Tidy => "TIDY",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            RuleId::SqrtBothSides => "A^2 = c with c >= 0 becomes A = sqrt(c) or A = -sqrt(c)",
            RuleId::MoveTerm => "move one summand to the other side, flipping its sign",
            RuleId::CollectTerms => "combine like summands on one side",
            RuleId::NegateBothSides => "-A = c becomes A = -c",
            RuleId::DivByConst => "k*A = c becomes A = c/k",
            RuleId::Expand => "multiply out one product or power",
            RuleId::FactorCommon => "a*x^2 + b*x = 0 becomes x*(a*x + b) = 0",
            RuleId::SplitZeroProduct => "A*B = 0 becomes A = 0 or B = 0",
            RuleId::QuadraticFormula => {
                "a*x^2 + b*x + c = 0 becomes x = (-b + sqrt(D))/(2a) or x = (-b - sqrt(D))/(2a)"
            }
            RuleId::Tidy => "simplify fractions, fold constants and evaluate square roots",
        }
    }

    /// Bookkeeping rules that do not count as a strategy step.
    pub fn is_minor(self) -> bool {
        self == RuleId::Tidy
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown rule `{0}`")]
pub struct UnknownRule(pub String);

impl FromStr for RuleId {
    type Err = UnknownRule;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleId::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| UnknownRule(s.to_string()))
    }
}

/// A catalog entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rule {
    pub id: RuleId,
    pub description: &'static str,
    pub minor: bool,
}

pub fn catalog() -> Vec<Rule> {
    RuleId::ALL
        .into_iter()
        .map(|id| Rule { id, description: id.description(), minor: id.is_minor() })
        .collect()
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "index")]
pub enum Scope {
    All,
    Equation(usize),
}

/// Where a rule fires.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Site {
    pub scope: Scope,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side: Option<Side>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
}

impl Site {
    pub fn all() -> Site {
        Site { scope: Scope::All, side: None, index: None }
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.scope {
            Scope::All => f.write_str("all")?,
            Scope::Equation(i) => write!(f, "eq {i}")?,
        }
        if let Some(side) = self.side {
            f.write_str(match side {
                Side::Left => " lhs",
                Side::Right => " rhs",
            })?;
        }
        if let Some(i) = self.index {
            write!(f, " #{i}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RuleError {
    #[error("{rule} does not apply at {site}")]
    InvalidSite { rule: RuleId, site: Site },
    #[error("{0} took the square root of a negative number")]
    NegativeRadicand(RuleId),
}

/// Site within one equation: side and summand index where relevant.
type Local = (Option<Side>, Option<usize>);

const SIDES: [Side; 2] = [Side::Left, Side::Right];

/// Every site at which the rule fires, in canonical order: the whole set
/// first, then each equation. Single-equation sets only use the whole set.
pub fn applicable_sites(rule: RuleId, s: &EqSet) -> Vec<Site> {
    if rule == RuleId::Tidy {
        return if tidy_set(s) != *s { vec![Site::all()] } else { Vec::new() };
    }
    let per_eq: Vec<Vec<Local>> = s.equations().iter().map(|eq| local_sites(rule, eq)).collect();
    let mut sites = Vec::new();
    for local in &per_eq[0] {
        if per_eq[1..].iter().all(|ls| ls.contains(local)) {
            sites.push(Site { scope: Scope::All, side: local.0, index: local.1 });
        }
    }
    if s.len() > 1 {
        for (i, locals) in per_eq.iter().enumerate() {
            for local in locals {
                sites.push(Site { scope: Scope::Equation(i), side: local.0, index: local.1 });
            }
        }
    }
    sites.sort();
    sites
}

pub fn apply_rule(rule: RuleId, site: Site, s: &EqSet) -> Result<EqSet, RuleError> {
    if !applicable_sites(rule, s).contains(&site) {
        return Err(RuleError::InvalidSite { rule, site });
    }
    apply_unchecked(rule, site, s)
}

/// [`apply_rule`] for a site already known to be applicable.
pub(crate) fn apply_unchecked(rule: RuleId, site: Site, s: &EqSet) -> Result<EqSet, RuleError> {
    if rule == RuleId::Tidy {
        return Ok(tidy_set(s));
    }
    let local = (site.side, site.index);
    let mut out = Vec::with_capacity(s.len() + 1);
    for (i, eq) in s.equations().iter().enumerate() {
        let hit = match site.scope {
            Scope::All => true,
            Scope::Equation(j) => i == j,
        };
        if hit {
            out.extend(apply_local(rule, local, eq)?);
        } else {
            out.push(eq.clone());
        }
    }
    Ok(EqSet::new(out))
}

fn local_sites(rule: RuleId, eq: &Equation) -> Vec<Local> {
    match rule {
        RuleId::SqrtBothSides => {
            if sqrt_shape(eq).is_some() {
                vec![(None, None)]
            } else {
                Vec::new()
            }
        }
        RuleId::MoveTerm => {
            let mut v = Vec::new();
            for side in SIDES {
                for (i, t) in eq.side(side).summands().into_iter().enumerate() {
                    if !t.is_literal_zero() {
                        v.push((Some(side), Some(i)));
                    }
                }
            }
            v
        }
        RuleId::CollectTerms => SIDES
            .into_iter()
            .filter(|&side| collect_side(eq.side(side)).is_some())
            .map(|side| (Some(side), None))
            .collect(),
        RuleId::NegateBothSides => match &eq.lhs {
            Expr::Neg(a) if !a.is_constant() && eq.rhs.is_constant() => vec![(None, None)],
            _ => Vec::new(),
        },
        RuleId::DivByConst => {
            if div_shape(eq).is_some() {
                vec![(None, None)]
            } else {
                Vec::new()
            }
        }
        RuleId::Expand => {
            let mut v = Vec::new();
            for side in SIDES {
                for (i, t) in eq.side(side).summands().into_iter().enumerate() {
                    if expansion(t).is_some() {
                        v.push((Some(side), Some(i)));
                    }
                }
            }
            v
        }
        RuleId::FactorCommon => {
            if factor_shape(eq).is_some() {
                vec![(None, None)]
            } else {
                Vec::new()
            }
        }
        RuleId::SplitZeroProduct => {
            if split_shape(eq).is_some() {
                vec![(None, None)]
            } else {
                Vec::new()
            }
        }
        RuleId::QuadraticFormula => {
            if quadratic_shape(eq).is_some() {
                vec![(None, None)]
            } else {
                Vec::new()
            }
        }
        RuleId::Tidy => Vec::new(),
    }
}

fn apply_local(rule: RuleId, local: Local, eq: &Equation) -> Result<Vec<Equation>, RuleError> {
    let invalid = || RuleError::InvalidSite {
        rule,
        site: Site { scope: Scope::All, side: local.0, index: local.1 },
    };
    match rule {
        RuleId::SqrtBothSides => {
            let (side, c) = sqrt_shape(eq).ok_or_else(invalid)?;
            if c.is_negative() {
                return Err(RuleError::NegativeRadicand(rule));
            }
            let Expr::Pow(base, _) = eq.side(side) else { return Err(invalid()) };
            let base = (**base).clone();
            let place = |value: Expr| {
                let mut e = eq.clone();
                *e.side_mut(side) = base.clone();
                *e.side_mut(side.other()) = value;
                e
            };
            if c.is_zero() {
                return Ok(vec![place(Expr::zero())]);
            }
            let (pos, neg) = match rational_sqrt(&c) {
                Some(r) => (Expr::Const(r.clone()), Expr::Const(-r)),
                None => {
                    let root = Expr::sqrt(Expr::Const(c));
                    (root.clone(), Expr::neg(root))
                }
            };
            Ok(vec![place(pos), place(neg)])
        }
        RuleId::MoveTerm => {
            let (Some(side), Some(index)) = local else { return Err(invalid()) };
            let mut items: Vec<Expr> = eq.side(side).summands().into_iter().cloned().collect();
            if index >= items.len() || items[index].is_literal_zero() {
                return Err(invalid());
            }
            let moved = items.remove(index);
            let dest = eq.side(side.other());
            let new_dest = if dest.is_literal_zero() {
                moved.negated()
            } else {
                Expr::sum(vec![dest.clone(), moved.negated()])
            };
            let mut e = eq.clone();
            *e.side_mut(side) = Expr::sum(items);
            *e.side_mut(side.other()) = new_dest;
            Ok(vec![e])
        }
        RuleId::CollectTerms => {
            let side = local.0.ok_or_else(invalid)?;
            let collected = collect_side(eq.side(side)).ok_or_else(invalid)?;
            let mut e = eq.clone();
            *e.side_mut(side) = collected;
            Ok(vec![e])
        }
        RuleId::NegateBothSides => match &eq.lhs {
            Expr::Neg(a) if !a.is_constant() && eq.rhs.is_constant() => {
                Ok(vec![Equation::new((**a).clone(), eq.rhs.negated())])
            }
            _ => Err(invalid()),
        },
        RuleId::DivByConst => {
            let (k, rest) = div_shape(eq).ok_or_else(invalid)?;
            let rhs = match &eq.rhs {
                Expr::Const(c) => Expr::Const(raw_quotient(c, &k)),
                other => Expr::prod(vec![Expr::Const(k.recip().ok_or_else(invalid)?), other.clone()]),
            };
            Ok(vec![Equation::new(rest, rhs)])
        }
        RuleId::Expand => {
            let (Some(side), Some(index)) = local else { return Err(invalid()) };
            let items: Vec<&Expr> = eq.side(side).summands();
            let target = items.get(index).ok_or_else(invalid)?;
            let expanded = expansion(target).ok_or_else(invalid)?;
            let mut out = Vec::with_capacity(items.len() + 2);
            for (i, t) in items.iter().enumerate() {
                if i == index {
                    if !expanded.is_literal_zero() {
                        out.push(expanded.clone());
                    }
                } else {
                    out.push((*t).clone());
                }
            }
            let mut e = eq.clone();
            *e.side_mut(side) = Expr::sum(out);
            Ok(vec![e])
        }
        RuleId::FactorCommon => {
            let (side, a, b) = factor_shape(eq).ok_or_else(invalid)?;
            let inner = Expr::sum(vec![linear_monomial(&a), Expr::Const(b)]);
            let mut e = eq.clone();
            *e.side_mut(side) = Expr::prod(vec![Expr::Var, inner]);
            Ok(vec![e])
        }
        RuleId::SplitZeroProduct => {
            let factors = split_shape(eq).ok_or_else(invalid)?;
            Ok(factors.into_iter().map(|f| Equation::new(f, Expr::zero())).collect())
        }
        RuleId::QuadraticFormula => {
            let (a, b, d) = quadratic_shape(eq).ok_or_else(invalid)?;
            let two_a = &Rational::from_integer(2) * &a;
            let scale = Expr::Const(two_a.recip().ok_or_else(invalid)?);
            let root = Expr::sqrt(Expr::Const(d.clone()));
            let solution = |r: Expr| {
                let numerator = if b.is_zero() { r } else { Expr::sum(vec![Expr::Const(-&b), r]) };
                Equation::new(Expr::Var, Expr::prod(vec![scale.clone(), numerator]))
            };
            if d.is_zero() {
                return Ok(vec![solution(Expr::Const(Rational::zero()))]);
            }
            Ok(vec![solution(root.clone()), solution(Expr::neg(root))])
        }
        RuleId::Tidy => Err(invalid()),
    }
}

/// `(side holding A^2, c)` for `A^2 = c` with `c` a rational constant.
fn sqrt_shape(eq: &Equation) -> Option<(Side, Rational)> {
    SIDES.into_iter().find_map(|side| match eq.side(side) {
        Expr::Pow(base, 2) if !base.is_constant() => {
            let c = fold_rational(eq.side(side.other()))?;
            (!c.is_negative()).then_some((side, c))
        }
        _ => None,
    })
}

/// `k*A = c`: returns `k` and `A`.
fn div_shape(eq: &Equation) -> Option<(Rational, Expr)> {
    let Expr::Prod(factors) = &eq.lhs else { return None };
    if !eq.rhs.is_constant() {
        return None;
    }
    let mut k = None;
    let mut rest = Vec::new();
    for f in factors {
        match f {
            Expr::Const(c) if k.is_none() => k = Some(c.clone()),
            Expr::Const(_) => return None,
            other if other.is_constant() => return None,
            other => rest.push(other.clone()),
        }
    }
    let k = k?;
    if k.is_zero() || k.value_eq(&Rational::one()) {
        return None;
    }
    Some((k, Expr::prod(rest)))
}

/// `c/k` without reducing: `6/3` stays `6/3`.
fn raw_quotient(c: &Rational, k: &Rational) -> Rational {
    let mut n = c.numer() * k.denom();
    let mut d = c.denom() * k.numer();
    if d < 0.into() {
        n = -n;
        d = -d;
    }
    Rational::new_raw(n, d).expect("k is nonzero")
}

/// Summand split into rational coefficient and the rest, as written:
/// `-3*x^2 -> (-3, x^2)`, `-x -> (-1, x)`, `x*(x-1) -> (1, x*(x-1))`.
fn coefficient_split(e: &Expr) -> (Rational, Expr) {
    match e {
        Expr::Const(c) => (c.clone(), Expr::int(1)),
        Expr::Neg(inner) => {
            let (c, core) = coefficient_split(inner);
            (-c, core)
        }
        Expr::Prod(factors) => match &factors[0] {
            Expr::Const(c) => (c.clone(), Expr::prod(factors[1..].to_vec())),
            _ => (Rational::one(), e.clone()),
        },
        other => (Rational::one(), other.clone()),
    }
}

fn with_coefficient(c: &Rational, core: Expr) -> Expr {
    if c.is_zero() {
        Expr::zero()
    } else if c.value_eq(&Rational::one()) {
        core
    } else if c.value_eq(&-Rational::one()) {
        core.negated()
    } else {
        Expr::prod(vec![Expr::Const(c.clone()), core])
    }
}

/// Combines like non-constant summands; `None` when there are none.
fn collect_side(side: &Expr) -> Option<Expr> {
    let items = side.summands();
    let split: Vec<(Rational, Expr)> = items.iter().map(|t| coefficient_split(t)).collect();
    let mut used = vec![false; items.len()];
    let mut out = Vec::new();
    let mut changed = false;
    for i in 0..items.len() {
        if used[i] {
            continue;
        }
        let (c, core) = &split[i];
        if core.is_constant() {
            out.push(items[i].clone());
            continue;
        }
        let mut total = c.clone();
        let mut merged = false;
        for j in i + 1..items.len() {
            if !used[j] && split[j].1 == *core {
                total = &total + &split[j].0;
                used[j] = true;
                merged = true;
            }
        }
        if merged {
            changed = true;
            if !total.is_zero() {
                out.push(with_coefficient(&total.reduced(), core.clone()));
            }
        } else {
            out.push(items[i].clone());
        }
    }
    changed.then(|| Expr::sum(out))
}

fn contains_bracket_product(e: &Expr) -> bool {
    match e {
        Expr::Prod(items) => items
            .iter()
            .any(|i| matches!(i, Expr::Sum(_)) || contains_bracket_product(i)),
        Expr::Pow(base, _) => matches!(**base, Expr::Sum(_)) || contains_bracket_product(base),
        Expr::Neg(inner) => contains_bracket_product(inner),
        Expr::Sum(items) => items.iter().any(contains_bracket_product),
        Expr::Const(_) | Expr::Var | Expr::Sqrt(_) => false,
    }
}

/// The multiplied-out form of a summand with a bracket in a product or power.
fn expansion(t: &Expr) -> Option<Expr> {
    if t.is_constant() || !contains_bracket_product(t) {
        return None;
    }
    let p = poly_of(t).ok()?;
    if p.degree() > 2 {
        return None;
    }
    let out = p.to_expr();
    (out != *t).then_some(out)
}

/// `c * x^k` with rational `c`, as written.
fn monomial_of(e: &Expr) -> Option<(Rational, u32)> {
    match e {
        Expr::Const(c) => Some((c.reduced(), 0)),
        Expr::Var => Some((Rational::one(), 1)),
        Expr::Pow(base, n) if matches!(**base, Expr::Var) => Some((Rational::one(), *n)),
        Expr::Neg(inner) => monomial_of(inner).map(|(c, k)| (-c, k)),
        Expr::Prod(items) => {
            let mut c = Rational::one();
            let mut k = 0;
            for item in items {
                let (ci, ki) = monomial_of(item)?;
                c = &c * &ci;
                k += ki;
            }
            Some((c, k))
        }
        _ => None,
    }
}

/// The side opposite a zero side, if any.
fn zero_equation_side(eq: &Equation) -> Option<Side> {
    if side_is_zero(&eq.rhs) {
        Some(Side::Left)
    } else if side_is_zero(&eq.lhs) {
        Some(Side::Right)
    } else {
        None
    }
}

/// `a*x^2 + b*x = 0`: returns the polynomial side, `a` and `b`.
fn factor_shape(eq: &Equation) -> Option<(Side, Rational, Rational)> {
    let side = zero_equation_side(eq)?;
    let items = eq.side(side).summands();
    if items.len() != 2 {
        return None;
    }
    let (c0, k0) = monomial_of(items[0])?;
    let (c1, k1) = monomial_of(items[1])?;
    if c0.is_zero() || c1.is_zero() {
        return None;
    }
    match (k0, k1) {
        (2, 1) => Some((side, c0, c1)),
        (1, 2) => Some((side, c1, c0)),
        _ => None,
    }
}

fn linear_monomial(a: &Rational) -> Expr {
    with_coefficient(a, Expr::Var)
}

/// Non-constant factors of `A*B*... = 0`.
fn split_shape(eq: &Equation) -> Option<Vec<Expr>> {
    let side = zero_equation_side(eq)?;
    let Expr::Prod(factors) = eq.side(side) else { return None };
    let mut out = Vec::new();
    for f in factors {
        if f.is_constant() {
            if fold_constant(f).is_none_or(|c| c.is_zero()) {
                return None;
            }
            continue;
        }
        let f = match f {
            Expr::Pow(base, _) => (**base).clone(),
            other => other.clone(),
        };
        out.push(f);
    }
    (out.len() >= 2).then_some(out)
}

/// `a*x^2 + b*x + c = 0` with a real discriminant: returns `a`, `b`, `D`.
fn quadratic_shape(eq: &Equation) -> Option<(Rational, Rational, Rational)> {
    let side = zero_equation_side(eq)?;
    let mut coeffs: [Option<Rational>; 3] = [None, None, None];
    for t in eq.side(side).summands() {
        let (c, k) = monomial_of(t)?;
        let slot = coeffs.get_mut(k as usize)?;
        if slot.is_some() || c.is_zero() {
            return None;
        }
        *slot = Some(c);
    }
    let [c, b, a] = coeffs;
    let a = a?;
    let b = b.unwrap_or_else(Rational::zero);
    let c = c.unwrap_or_else(Rational::zero);
    let d = &(&b * &b) - &(&(&Rational::from_integer(4) * &a) * &c);
    (!d.is_negative()).then_some((a, b, d))
}

/// Folds constants throughout the set until nothing changes.
pub fn tidy_set(s: &EqSet) -> EqSet {
    EqSet::new(
        s.equations()
            .iter()
            .map(|eq| Equation::new(tidy(&eq.lhs), tidy(&eq.rhs)))
            .collect(),
    )
}

pub fn tidy(e: &Expr) -> Expr {
    let mut cur = e.clone();
    loop {
        let next = tidy_once(&cur);
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

fn tidy_once(e: &Expr) -> Expr {
    if e.is_constant() {
        if let Some(v) = fold_constant(e) {
            return v.to_expr();
        }
    }
    match e {
        Expr::Const(_) | Expr::Var => e.clone(),
        Expr::Neg(inner) => match &**inner {
            Expr::Neg(x) => tidy_once(x),
            x => Expr::neg(tidy_once(x)),
        },
        Expr::Sqrt(inner) => Expr::sqrt(tidy_once(inner)),
        Expr::Pow(base, n) => Expr::pow(tidy_once(base), *n),
        Expr::Sum(items) => {
            let items: Vec<Expr> = items.iter().map(tidy_once).collect();
            let mut out = Vec::with_capacity(items.len());
            let mut constant: Option<(usize, Rational)> = None;
            let mut constants = 0;
            for item in &items {
                if let Expr::Const(c) = item {
                    constants += 1;
                    match &mut constant {
                        Some((_, acc)) => *acc = &*acc + c,
                        None => constant = Some((out.len(), c.clone())),
                    }
                    if constants == 1 {
                        out.push(item.clone());
                    }
                } else {
                    out.push(item.clone());
                }
            }
            if let Some((pos, total)) = constant {
                if total.is_zero() {
                    out.remove(pos);
                } else if constants > 1 {
                    out[pos] = Expr::Const(total);
                }
            }
            Expr::sum(out)
        }
        Expr::Prod(items) => {
            let items: Vec<Expr> = items.iter().map(tidy_once).collect();
            let mut out = Vec::with_capacity(items.len());
            let mut constant: Option<(usize, Rational)> = None;
            let mut constants = 0;
            for item in &items {
                if let Expr::Const(c) = item {
                    constants += 1;
                    match &mut constant {
                        Some((_, acc)) => *acc = &*acc * c,
                        None => constant = Some((out.len(), c.clone())),
                    }
                    if constants == 1 {
                        out.push(item.clone());
                    }
                } else {
                    out.push(item.clone());
                }
            }
            if let Some((pos, total)) = constant {
                if total.is_zero() {
                    return Expr::zero();
                } else if total.is_one() {
                    out.remove(pos);
                } else if constants > 1 {
                    out[pos] = Expr::Const(total);
                }
            }
            Expr::prod(out)
        }
    }
}
