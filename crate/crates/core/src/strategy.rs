//! Strategies over the rule catalog and the state graphs they generate.
//!
//! A strategy is a regular expression over rules. [`firsts`] computes the
//! rules a strategy admits next together with what remains of the strategy,
//! in the manner of a regular-expression derivative.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{fold_rational, poly_of, AlgebraError};
use crate::diagnosis::Profile;
use crate::expr::{side_is_zero, EqSet, Expr};
use crate::rules::{apply_unchecked, applicable_sites, RuleId, Site};

/// Largest supported lookahead, in non-minor steps.
pub const MAX_DEPTH: usize = 8;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Apply(RuleId),
    Seq(Vec<Strategy>),
    Choice(Vec<Strategy>),
    Many(Box<Strategy>),
    Option(Box<Strategy>),
    Succeed,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StrategyError {
    #[error("repetition body can succeed without applying a rule")]
    NonProgressingMany,
    #[error("lookahead {requested} exceeds the maximum of {MAX_DEPTH}")]
    DepthCapExceeded { requested: usize },
    #[error("the strategy does not reach a solved state within {MAX_DEPTH} steps")]
    NoDerivation,
    #[error("unknown strategy `{0}`")]
    UnknownStrategy(String),
}

impl Strategy {
    pub fn apply(rule: RuleId) -> Strategy {
        Strategy::Apply(rule)
    }

    /// Sequence, flattened, with `Succeed` dropped.
    pub fn seq(items: Vec<Strategy>) -> Strategy {
        let mut flat = Vec::with_capacity(items.len());
        for item in items {
            match item {
                Strategy::Succeed => {}
                Strategy::Seq(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => Strategy::Succeed,
            1 => flat.pop().unwrap(),
            _ => Strategy::Seq(flat),
        }
    }

    /// Choice, flattened, duplicates removed (first occurrence kept).
    pub fn choice(items: Vec<Strategy>) -> Strategy {
        let mut flat: Vec<Strategy> = Vec::with_capacity(items.len());
        for item in items {
            let parts = match item {
                Strategy::Choice(inner) => inner,
                other => vec![other],
            };
            for p in parts {
                if !flat.contains(&p) {
                    flat.push(p);
                }
            }
        }
        match flat.len() {
            0 => Strategy::Succeed,
            1 => flat.pop().unwrap(),
            _ => Strategy::Choice(flat),
        }
    }

    /// Repetition; refuses a body that may succeed without doing anything.
    pub fn many(body: Strategy) -> Result<Strategy, StrategyError> {
        if body.nullable() {
            return Err(StrategyError::NonProgressingMany);
        }
        Ok(Strategy::Many(Box::new(body)))
    }

    pub fn option(body: Strategy) -> Strategy {
        Strategy::Option(Box::new(body))
    }

    /// Can the strategy stop here?
    pub fn nullable(&self) -> bool {
        match self {
            Strategy::Apply(_) => false,
            Strategy::Seq(items) => items.iter().all(Strategy::nullable),
            Strategy::Choice(items) => items.iter().any(Strategy::nullable),
            Strategy::Many(_) | Strategy::Option(_) | Strategy::Succeed => true,
        }
    }

    /// Checks every repetition in the tree.
    pub fn validate(&self) -> Result<(), StrategyError> {
        match self {
            Strategy::Apply(_) | Strategy::Succeed => Ok(()),
            Strategy::Seq(items) | Strategy::Choice(items) => {
                items.iter().try_for_each(Strategy::validate)
            }
            Strategy::Many(body) => {
                if body.nullable() {
                    return Err(StrategyError::NonProgressingMany);
                }
                body.validate()
            }
            Strategy::Option(body) => body.validate(),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, items: &[Strategy], sep: &str| {
            f.write_str("(")?;
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    f.write_str(sep)?;
                }
                write!(f, "{item}")?;
            }
            f.write_str(")")
        };
        match self {
            Strategy::Apply(r) => write!(f, "{r}"),
            Strategy::Seq(items) => list(f, items, " ; "),
            Strategy::Choice(items) => list(f, items, " | "),
            Strategy::Many(body) => write!(f, "{body}*"),
            Strategy::Option(body) => write!(f, "{body}?"),
            Strategy::Succeed => f.write_str("succeed"),
        }
    }
}

/// A rule followed by an optional tidy-up.
fn step(rule: RuleId) -> Strategy {
    Strategy::seq(vec![Strategy::apply(rule), Strategy::option(Strategy::apply(RuleId::Tidy))])
}

fn many(body: Strategy) -> Strategy {
    Strategy::many(body).expect("catalog strategies repeat non-nullable bodies")
}

fn linear_body() -> Strategy {
    Strategy::seq(vec![
        many(Strategy::choice(vec![step(RuleId::MoveTerm), step(RuleId::CollectTerms)])),
        Strategy::option(Strategy::choice(vec![
            step(RuleId::NegateBothSides),
            step(RuleId::DivByConst),
        ])),
    ])
}

/// The built-in strategies.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyName {
    Linear,
    Sqrt,
    Factor,
    QuadraticFormula,
}

impl StrategyName {
    pub const ALL: [StrategyName; 4] = [
        StrategyName::Linear,
        StrategyName::Sqrt,
        StrategyName::Factor,
        StrategyName::QuadraticFormula,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StrategyName::Linear => "linear",
            StrategyName::Sqrt => "sqrt",
            StrategyName::Factor => "factor",
            StrategyName::QuadraticFormula => "quadratic-formula",
        }
    }

    pub fn strategy(self) -> Strategy {
        match self {
            StrategyName::Linear => linear_body(),
            StrategyName::Sqrt => Strategy::seq(vec![step(RuleId::SqrtBothSides), linear_body()]),
            StrategyName::Factor => Strategy::seq(vec![
                many(step(RuleId::CollectTerms)),
                Strategy::option(step(RuleId::FactorCommon)),
                step(RuleId::SplitZeroProduct),
                linear_body(),
            ]),
            StrategyName::QuadraticFormula => Strategy::seq(vec![
                many(step(RuleId::Expand)),
                many(step(RuleId::MoveTerm)),
                many(step(RuleId::CollectTerms)),
                step(RuleId::QuadraticFormula),
            ]),
        }
    }
}

impl fmt::Display for StrategyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyName {
    type Err = StrategyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        StrategyName::ALL
            .into_iter()
            .find(|n| n.name() == s)
            .ok_or_else(|| StrategyError::UnknownStrategy(s.to_string()))
    }
}

/// Picks a strategy from the shape of the task.
pub fn select_strategy(task: &EqSet) -> Result<StrategyName, AlgebraError> {
    let mut polys = Vec::with_capacity(task.len());
    for eq in task.equations() {
        polys.push(poly_of(&eq.lhs)?.sub(&poly_of(&eq.rhs)?));
    }
    let degree = polys.iter().map(|p| p.degree()).max().unwrap_or(0);
    if degree > 2 {
        return Err(AlgebraError::DegreeTooHigh { degree });
    }
    if degree <= 1 {
        return Ok(StrategyName::Linear);
    }
    if let [eq] = task.equations() {
        if matches!(&eq.lhs, Expr::Pow(base, 2) if !base.is_constant())
            && fold_rational(&eq.rhs).is_some_and(|c| !c.is_negative())
        {
            return Ok(StrategyName::Sqrt);
        }
        let p = &polys[0];
        if (side_is_zero(&eq.lhs) || side_is_zero(&eq.rhs))
            && p.coeff(0).is_zero()
            && !p.coeff(1).is_zero()
            && !p.coeff(2).is_zero()
        {
            return Ok(StrategyName::Factor);
        }
    }
    Ok(StrategyName::QuadraticFormula)
}

/// One admissible continuation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub rule: RuleId,
    pub site: Site,
    pub next: EqSet,
    pub residual: Strategy,
}

type SiteCache = HashMap<RuleId, Vec<Site>>;

fn derive(st: &Strategy, s: &EqSet, cache: &mut SiteCache, out: &mut Vec<(RuleId, Site, Strategy)>) {
    match st {
        Strategy::Apply(rule) => {
            let sites = cache.entry(*rule).or_insert_with(|| applicable_sites(*rule, s));
            out.extend(sites.iter().map(|site| (*rule, *site, Strategy::Succeed)));
        }
        Strategy::Seq(items) => {
            let Some((head, tail)) = items.split_first() else { return };
            let rest = Strategy::seq(tail.to_vec());
            let mut heads = Vec::new();
            derive(head, s, cache, &mut heads);
            out.extend(
                heads
                    .into_iter()
                    .map(|(r, site, res)| (r, site, Strategy::seq(vec![res, rest.clone()]))),
            );
            if head.nullable() {
                derive(&rest, s, cache, out);
            }
        }
        Strategy::Choice(items) => {
            for item in items {
                derive(item, s, cache, out);
            }
        }
        Strategy::Many(body) => {
            let mut inner = Vec::new();
            derive(body, s, cache, &mut inner);
            out.extend(
                inner
                    .into_iter()
                    .map(|(r, site, res)| (r, site, Strategy::seq(vec![res, st.clone()]))),
            );
        }
        Strategy::Option(body) => derive(body, s, cache, out),
        Strategy::Succeed => {}
    }
}

/// Every single-rule continuation the strategy admits at `s`, one per
/// (rule, site), in the order the strategy lists them (leftmost first).
pub fn firsts(st: &Strategy, s: &EqSet) -> Vec<Step> {
    let mut raw = Vec::new();
    derive(st, s, &mut SiteCache::new(), &mut raw);
    let mut order: Vec<(RuleId, Site)> = Vec::new();
    let mut residuals: HashMap<(RuleId, Site), Strategy> = HashMap::new();
    for (rule, site, res) in raw {
        match residuals.get_mut(&(rule, site)) {
            Some(existing) => {
                *existing = Strategy::choice(vec![existing.clone(), res]);
            }
            None => {
                order.push((rule, site));
                residuals.insert((rule, site), res);
            }
        }
    }
    order
        .into_iter()
        .filter_map(|(rule, site)| {
            let next = apply_unchecked(rule, site, s).ok()?;
            let residual = residuals.remove(&(rule, site))?;
            Some(Step { rule, site, next, residual })
        })
        .collect()
}

/// A state in the generated graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateNode {
    pub state: EqSet,
    /// Non-minor rules on the path.
    pub depth: usize,
    pub path: Vec<(RuleId, Site)>,
    pub residual: Strategy,
}

impl StateNode {
    pub fn root(state: EqSet, st: Strategy) -> StateNode {
        StateNode { state, depth: 0, path: Vec::new(), residual: st }
    }

    /// Non-minor rules on the path, in order.
    pub fn rules(&self) -> Vec<RuleId> {
        self.path.iter().map(|(r, _)| *r).filter(|r| !r.is_minor()).collect()
    }

    fn child(&self, step: Step) -> StateNode {
        let mut path = self.path.clone();
        path.push((step.rule, step.site));
        StateNode {
            state: step.next,
            depth: self.depth + usize::from(!step.rule.is_minor()),
            path,
            residual: step.residual,
        }
    }
}

/// Breadth-first exploration, one depth at a time. Minor rules stay within
/// the layer of their source.
pub struct Explorer {
    max_depth: usize,
    next_depth: usize,
    pending: Vec<StateNode>,
    seen: HashSet<(EqSet, Strategy)>,
}

impl Explorer {
    pub fn new(st: &Strategy, s: &EqSet, max_depth: usize) -> Result<Explorer, StrategyError> {
        if max_depth > MAX_DEPTH {
            return Err(StrategyError::DepthCapExceeded { requested: max_depth });
        }
        Ok(Explorer {
            max_depth,
            next_depth: 0,
            pending: vec![StateNode::root(s.clone(), st.clone())],
            seen: HashSet::new(),
        })
    }

    /// All nodes of the next depth (the first call yields depth 0: the root
    /// and its tidy-ups), or `None` past the cap or once nothing is left.
    pub fn next_layer(&mut self) -> Option<Vec<StateNode>> {
        if self.next_depth > self.max_depth || self.pending.is_empty() {
            return None;
        }
        let mut queue: VecDeque<StateNode> = VecDeque::new();
        for node in std::mem::take(&mut self.pending) {
            if self.seen.insert((node.state.clone(), node.residual.clone())) {
                queue.push_back(node);
            }
        }
        let expand = self.next_depth < self.max_depth;
        let mut layer = Vec::new();
        while let Some(node) = queue.pop_front() {
            for step in firsts(&node.residual, &node.state) {
                if step.rule.is_minor() {
                    if !self.seen.contains(&(step.next.clone(), step.residual.clone())) {
                        self.seen.insert((step.next.clone(), step.residual.clone()));
                        queue.push_back(node.child(step));
                    }
                } else if expand && !self.seen.contains(&(step.next.clone(), step.residual.clone())) {
                    self.pending.push(node.child(step));
                }
            }
            layer.push(node);
        }
        self.next_depth += 1;
        Some(layer)
    }
}

/// Distinct states at depths `1..=max_depth`, one per relation profile,
/// keeping the shallowest; sorted by depth, then rendered state.
pub fn reachable_states(
    st: &Strategy,
    s: &EqSet,
    max_depth: usize,
) -> Result<Vec<StateNode>, StrategyError> {
    let mut explorer = Explorer::new(st, s, max_depth)?;
    let mut best: BTreeMap<Profile, (usize, String, StateNode)> = BTreeMap::new();
    while let Some(layer) = explorer.next_layer() {
        for node in layer {
            if node.depth == 0 {
                continue;
            }
            let profile = Profile::of(&node.state);
            let rendered = node.state.to_string();
            let better = match best.get(&profile) {
                Some((d, r, _)) => (node.depth, &rendered) < (*d, r),
                None => true,
            };
            if better {
                best.insert(profile, (node.depth, rendered, node));
            }
        }
    }
    let mut out: Vec<(usize, String, StateNode)> = best.into_values().collect();
    out.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    Ok(out.into_iter().map(|(_, _, n)| n).collect())
}

/// The derivation a teacher would show.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelSolution {
    pub states: Vec<EqSet>,
    /// The non-minor rule leading to each later state; a tidy-up may follow it.
    pub rules: Vec<(RuleId, Site)>,
    /// What remains of the strategy at each state.
    pub residuals: Vec<Strategy>,
}

/// Applies the tidy-ups the strategy allows until none is left.
pub fn tidy_closure(state: EqSet, residual: Strategy) -> (EqSet, Strategy) {
    let (mut state, mut residual) = (state, residual);
    for _ in 0..4 {
        let Some(step) = firsts(&residual, &state).into_iter().find(|s| s.rule.is_minor()) else {
            break;
        };
        state = step.next;
        residual = step.residual;
    }
    (state, residual)
}

/// Shortest derivation to a solved state; among equally short ones the
/// strategy's leftmost choices win. Each step is a non-minor rule followed
/// by whatever tidy-up the strategy allows.
pub fn model_solution(task: &EqSet, st: &Strategy) -> Result<ModelSolution, StrategyError> {
    struct Entry {
        state: EqSet,
        residual: Strategy,
        parent: Option<(usize, RuleId, Site)>,
        depth: usize,
    }
    let mut entries = vec![Entry { state: task.clone(), residual: st.clone(), parent: None, depth: 0 }];
    let mut seen: HashSet<(EqSet, Strategy)> = HashSet::new();
    seen.insert((task.clone(), st.clone()));
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        if entries[i].state.is_solved() {
            return Ok(unwind(&entries, i, |e| (&e.state, &e.residual, e.parent)));
        }
        if entries[i].depth == MAX_DEPTH {
            continue;
        }
        for step in firsts(&entries[i].residual, &entries[i].state) {
            if step.rule.is_minor() {
                continue;
            }
            let (state, residual) = tidy_closure(step.next, step.residual);
            if seen.insert((state.clone(), residual.clone())) {
                let depth = entries[i].depth + 1;
                entries.push(Entry { state, residual, parent: Some((i, step.rule, step.site)), depth });
                queue.push_back(entries.len() - 1);
            }
        }
    }
    Err(StrategyError::NoDerivation)
}

fn unwind<E>(
    entries: &[E],
    last: usize,
    get: impl Fn(&E) -> (&EqSet, &Strategy, Option<(usize, RuleId, Site)>),
) -> ModelSolution {
    let mut states = Vec::new();
    let mut rules = Vec::new();
    let mut residuals = Vec::new();
    let mut cur = Some(last);
    while let Some(i) = cur {
        let (state, residual, parent) = get(&entries[i]);
        states.push(state.clone());
        residuals.push(residual.clone());
        cur = parent.map(|(p, rule, site)| {
            rules.push((rule, site));
            p
        });
    }
    states.reverse();
    rules.reverse();
    residuals.reverse();
    ModelSolution { states, rules, residuals }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_eqset;

    fn s(t: &str) -> EqSet {
        parse_eqset(t).unwrap()
    }

    fn rendered(m: &ModelSolution) -> Vec<String> {
        m.states.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn worked_model_solution() {
        let m = model_solution(&s("(-x+1)^2 = 9"), &StrategyName::Sqrt.strategy()).unwrap();
        assert_eq!(
            rendered(&m),
            ["(-x+1)^2 = 9", "-x+1 = 3 or -x+1 = -3", "-x = 2 or -x = -4", "x = -2 or x = 4"]
        );
        let rules: Vec<RuleId> = m.rules.iter().map(|r| r.0).collect();
        assert_eq!(rules, [RuleId::SqrtBothSides, RuleId::MoveTerm, RuleId::NegateBothSides]);
        assert_eq!(m.residuals.len(), m.states.len());
    }

    #[test]
    fn trivial_and_factor_solutions() {
        let m = model_solution(&s("x = 5"), &StrategyName::Linear.strategy()).unwrap();
        assert_eq!(rendered(&m), ["x = 5"]);
        let m = model_solution(&s("x^2 - 3*x = 0"), &StrategyName::Factor.strategy()).unwrap();
        assert_eq!(m.states.last().unwrap().to_string(), "x = 0 or x = 3");
        assert_eq!(
            rendered(&m),
            ["x^2-3*x = 0", "x*(x-3) = 0", "x = 0 or x-3 = 0", "x = 0 or x = 3"]
        );
    }

    #[test]
    fn quadratic_formula_solution() {
        let m = model_solution(&s("x^2 + 2*x = 8"), &StrategyName::QuadraticFormula.strategy())
            .unwrap();
        assert_eq!(
            rendered(&m),
            ["x^2+2*x = 8", "x^2+2*x-8 = 0", "x = 2 or x = -4"]
        );
    }

    #[test]
    fn firsts_examples() {
        let task = s("(-x+1)^2 = 9");
        let f = firsts(&StrategyName::Sqrt.strategy(), &task);
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].rule, RuleId::SqrtBothSides);
        assert!(firsts(&Strategy::Succeed, &task).is_empty());
        let both = Strategy::choice(vec![
            Strategy::apply(RuleId::Expand),
            Strategy::apply(RuleId::SqrtBothSides),
        ]);
        let rules: Vec<RuleId> = firsts(&both, &task).iter().map(|s| s.rule).collect();
        assert_eq!(rules, [RuleId::Expand, RuleId::SqrtBothSides]);
    }

    #[test]
    fn duplicate_continuations_merge() {
        let st = Strategy::choice(vec![
            Strategy::apply(RuleId::SqrtBothSides),
            Strategy::seq(vec![Strategy::apply(RuleId::SqrtBothSides), Strategy::apply(RuleId::Tidy)]),
        ]);
        let f = firsts(&st, &s("x^2 = 4"));
        assert_eq!(f.len(), 1);
        assert!(f[0].residual.nullable());
    }

    #[test]
    fn many_must_progress() {
        assert_eq!(
            Strategy::many(Strategy::option(Strategy::apply(RuleId::Tidy))),
            Err(StrategyError::NonProgressingMany)
        );
        for n in StrategyName::ALL {
            n.strategy().validate().unwrap();
        }
    }

    #[test]
    fn reachable_contains_model_states() {
        let nodes = reachable_states(&StrategyName::Sqrt.strategy(), &s("(-x+1)^2 = 9"), 3).unwrap();
        let find = |t: &str| {
            let p = Profile::of(&s(t));
            nodes.iter().find(|n| Profile::of(&n.state) == p).map(|n| n.depth)
        };
        assert_eq!(find("-x+1 = 3 or -x+1 = -3"), Some(1));
        assert_eq!(find("-x = 2 or -x = -4"), Some(2));
        assert_eq!(find("x = -2 or x = 4"), Some(3));
        assert!(nodes.windows(2).all(|w| w[0].depth <= w[1].depth));
    }

    #[test]
    fn reachable_through_choice() {
        let st = Strategy::choice(vec![
            StrategyName::Sqrt.strategy(),
            StrategyName::QuadraticFormula.strategy(),
        ]);
        let nodes = reachable_states(&st, &s("(-x+1)^2 = 9"), 2).unwrap();
        let want = Profile::of(&s("x^2 - 2*x - 8 = 0"));
        assert!(nodes.iter().any(|n| Profile::of(&n.state) == want));
        assert!(nodes.iter().any(|n| n.state.to_string() == "-x+1 = 3 or -x+1 = -3"));
    }

    #[test]
    fn depth_cap() {
        let st = StrategyName::Linear.strategy();
        assert_eq!(
            reachable_states(&st, &s("x = 1"), 9).unwrap_err(),
            StrategyError::DepthCapExceeded { requested: 9 }
        );
    }

    #[test]
    fn strategy_selection() {
        let pick = |t: &str| select_strategy(&s(t)).unwrap();
        assert_eq!(pick("(-x+1)^2 = 9"), StrategyName::Sqrt);
        assert_eq!(pick("x = 5"), StrategyName::Linear);
        assert_eq!(pick("x^2 + 2*x = 8"), StrategyName::QuadraticFormula);
        assert_eq!(pick("x^2 - 3*x = 0"), StrategyName::Factor);
        assert_eq!(pick("2*x + 3 = 7"), StrategyName::Linear);
        assert!(matches!(select_strategy(&s("x^3 = 1")), Err(AlgebraError::DegreeTooHigh { .. })));
    }

    #[test]
    fn serde_round_trip() {
        for n in StrategyName::ALL {
            let st = n.strategy();
            let json = serde_json_roundtrip(&st);
            assert_eq!(json, st);
        }
    }

    fn serde_json_roundtrip(st: &Strategy) -> Strategy {
        let text = serde_json::to_string(st).unwrap();
        serde_json::from_str(&text).unwrap()
    }
}
