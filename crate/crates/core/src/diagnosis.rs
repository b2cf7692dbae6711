//! Matching a student step against the states a strategy can reach.
//!
//! Three relations are checked in a fixed order: the structural normal
//! form, the number of nonzero terms, and whether equations were derived to
//! zero. A later relation is only looked at once the earlier ones hold.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{nf_struct, root_set, struct_key_equation, AlgebraError, NSum, RootSet, StructKey};
use crate::expr::{is_zero_derived, term_count, EqSet};
use crate::rules::{RuleId, Site};
use crate::strategy::{model_solution, firsts, tidy_closure, Explorer, StateNode, Strategy, StrategyError};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RelationId {
    ExpectedNormalForm,
    ExpectedTermCount,
    ExpectedZeroDerivation,
}

impl RelationId {
    pub const ALL: [RelationId; 3] = [
        RelationId::ExpectedNormalForm,
        RelationId::ExpectedTermCount,
        RelationId::ExpectedZeroDerivation,
    ];

    /// 1, 2 or 3: the checking order.
    pub fn number(self) -> u8 {
        match self {
            RelationId::ExpectedNormalForm => 1,
            RelationId::ExpectedTermCount => 2,
            RelationId::ExpectedZeroDerivation => 3,
        }
    }

    pub fn from_number(n: u8) -> Option<RelationId> {
        RelationId::ALL.into_iter().find(|r| r.number() == n)
    }

    pub fn feedback_code(self) -> &'static str {
        match self {
            RelationId::ExpectedNormalForm => "unexpected-structure-change",
            RelationId::ExpectedTermCount => "unexpected-term-count",
            RelationId::ExpectedZeroDerivation => "unexpected-zero-derivation",
        }
    }
}

impl fmt::Display for RelationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RelationId::ExpectedNormalForm => "EXPECTED_NORMAL_FORM",
            RelationId::ExpectedTermCount => "EXPECTED_TERM_COUNT",
            RelationId::ExpectedZeroDerivation => "EXPECTED_ZERO_DERIVATION",
        })
    }
}

/// Everything the relations look at. Two states with equal profiles satisfy
/// all three relations with each other.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Profile {
    pub key: StructKey,
    pub terms: usize,
    /// For each normalized equation, the zero-derivation flags of the
    /// equations that normalize to it.
    pub zero: BTreeMap<NSum, BTreeSet<bool>>,
}

impl Profile {
    pub fn of(s: &EqSet) -> Profile {
        let mut zero: BTreeMap<NSum, BTreeSet<bool>> = BTreeMap::new();
        for eq in s.equations() {
            zero.entry(struct_key_equation(eq)).or_default().insert(is_zero_derived(eq));
        }
        let key = StructKey(zero.keys().cloned().collect());
        Profile { key, terms: term_count(s), zero }
    }

    /// The first relation `self` (the input) violates against `candidate`.
    pub fn first_violation(&self, candidate: &Profile) -> Option<RelationId> {
        if self.key != candidate.key {
            Some(RelationId::ExpectedNormalForm)
        } else if self.terms != candidate.terms {
            Some(RelationId::ExpectedTermCount)
        } else if self.zero != candidate.zero {
            Some(RelationId::ExpectedZeroDerivation)
        } else {
            None
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum RelationOutcome {
    Match,
    Violation { relation: RelationId, detail: String },
}

fn zero_flags(s: &EqSet) -> String {
    let flags: Vec<&str> = s
        .equations()
        .iter()
        .map(|eq| if is_zero_derived(eq) { "zero" } else { "not zero" })
        .collect();
    flags.join(", ")
}

fn violation_detail(relation: RelationId, input: &EqSet, candidate: &EqSet) -> String {
    match relation {
        RelationId::ExpectedNormalForm => format!(
            "expected normal form {} but found {}",
            nf_struct(candidate),
            nf_struct(input)
        ),
        RelationId::ExpectedTermCount => format!(
            "expected {} terms but found {}",
            term_count(candidate),
            term_count(input)
        ),
        RelationId::ExpectedZeroDerivation => format!(
            "expected {} but found {}",
            zero_flags(candidate),
            zero_flags(input)
        ),
    }
}

/// Checks the relations in order and reports the first that fails.
pub fn check_relations(input: &EqSet, candidate: &EqSet) -> RelationOutcome {
    match Profile::of(input).first_violation(&Profile::of(candidate)) {
        None => RelationOutcome::Match,
        Some(relation) => RelationOutcome::Violation {
            relation,
            detail: violation_detail(relation, input, candidate),
        },
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Diagnosis {
    Correct {
        matched_state: EqSet,
        steps_combined: usize,
        rules: Vec<RuleId>,
        is_variant: bool,
        /// Strategy remaining at the matched state.
        residual: Strategy,
    },
    Finished {
        solution: EqSet,
    },
    Deviation {
        relation: RelationId,
        best_candidate: EqSet,
        feedback_code: &'static str,
        detail: String,
    },
    NotEquivalent,
    Unknown,
}

impl Diagnosis {
    pub fn class(&self) -> &'static str {
        match self {
            Diagnosis::Correct { .. } => "correct",
            Diagnosis::Finished { .. } => "finished",
            Diagnosis::Deviation { .. } => "deviation",
            Diagnosis::NotEquivalent => "not-equivalent",
            Diagnosis::Unknown => "unknown",
        }
    }
}

/// A failure of the diagnosis machinery, never feedback for the student.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiagnosisError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
}

/// Root set of a student input; an impossible square root means the input
/// cannot be equivalent to anything sensible.
fn input_roots(input: &EqSet) -> Result<Option<RootSet>, AlgebraError> {
    match root_set(input) {
        Ok(r) => Ok(Some(r)),
        Err(AlgebraError::NegativeRadicand) => Ok(None),
        Err(e) => Err(e),
    }
}

/// The best match for the input among the states reachable from `prev`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    /// Shallowest matching node at depth >= 1, if any.
    pub matched: Option<StateNode>,
    /// Some explored state at the matched depth is written exactly like the input.
    pub exact: bool,
    /// The input only restates `prev` (or a tidy-up of it).
    pub restates_prev: bool,
    /// Closest non-matching candidate: first violated relation and its state.
    pub best_miss: Option<(RelationId, StateNode)>,
    /// Nodes were found beyond depth 0.
    pub any_reachable: bool,
}

/// Searches the states reachable from `(prev, st)` layer by layer, stopping
/// at the first layer containing a match.
pub fn trace(
    prev: &EqSet,
    input: &EqSet,
    st: &Strategy,
    max_lookahead: usize,
) -> Result<Trace, StrategyError> {
    let target = Profile::of(input);
    let mut explorer = Explorer::new(st, prev, max_lookahead)?;
    let mut out = Trace {
        matched: None,
        exact: false,
        restates_prev: false,
        best_miss: None,
        any_reachable: false,
    };
    // (relations satisfied, depth, rendered) of the best miss so far
    let mut best_rank: Option<(u8, usize, String)> = None;
    while let Some(layer) = explorer.next_layer() {
        let mut matches: Vec<(String, StateNode)> = Vec::new();
        let mut exact = false;
        for node in layer {
            if node.depth > 0 {
                out.any_reachable = true;
            }
            let profile = Profile::of(&node.state);
            match target.first_violation(&profile) {
                None => {
                    if node.depth == 0 {
                        out.restates_prev = true;
                        continue;
                    }
                    exact |= node.state == *input;
                    matches.push((node.state.to_string(), node));
                }
                Some(relation) => {
                    let satisfied = relation.number() - 1;
                    let better = match &best_rank {
                        None => true,
                        Some((s, _, _)) if satisfied != *s => satisfied > *s,
                        Some((_, d, _)) if node.depth != *d => node.depth < *d,
                        Some((_, _, r)) => node.state.to_string() < *r,
                    };
                    if better {
                        best_rank = Some((satisfied, node.depth, node.state.to_string()));
                        out.best_miss = Some((relation, node));
                    }
                }
            }
        }
        if !matches.is_empty() {
            matches.sort_by(|a, b| a.0.cmp(&b.0));
            out.matched = Some(matches.swap_remove(0).1);
            out.exact = exact;
            return Ok(out);
        }
    }
    Ok(out)
}

/// Classifies one student step taken from `prev`, where `st` is what remains
/// of the strategy at `prev` and `task` is the original problem.
pub fn diagnose(
    prev: &EqSet,
    input: &EqSet,
    st: &Strategy,
    task: &EqSet,
    max_lookahead: usize,
) -> Result<Diagnosis, DiagnosisError> {
    let prev_roots = root_set(prev)?;
    let Some(roots) = input_roots(input)? else {
        return Ok(Diagnosis::NotEquivalent);
    };
    if roots != prev_roots {
        return Ok(Diagnosis::NotEquivalent);
    }
    if input.is_solved() && roots == root_set(task)? {
        return Ok(Diagnosis::Finished { solution: input.clone() });
    }
    let t = trace(prev, input, st, max_lookahead)?;
    if let Some(node) = t.matched {
        return Ok(Diagnosis::Correct {
            steps_combined: node.depth,
            rules: node.rules(),
            is_variant: !t.exact,
            matched_state: node.state,
            residual: node.residual,
        });
    }
    if t.restates_prev || !t.any_reachable {
        return Ok(Diagnosis::Unknown);
    }
    match t.best_miss {
        Some((relation, node)) => Ok(Diagnosis::Deviation {
            relation,
            feedback_code: relation.feedback_code(),
            detail: violation_detail(relation, input, &node.state),
            best_candidate: node.state,
        }),
        None => Ok(Diagnosis::Unknown),
    }
}

/// Where the strategy stands at `state` when solving `task`: the matching
/// reachable node's state and residual, or `None` if `state` is not on the
/// strategy within `max_lookahead` steps.
pub fn strategy_at(
    task: &EqSet,
    st: &Strategy,
    state: &EqSet,
    max_lookahead: usize,
) -> Result<Option<(EqSet, Strategy)>, StrategyError> {
    if Profile::of(state) == Profile::of(task) {
        return Ok(Some((task.clone(), st.clone())));
    }
    let t = trace(task, state, st, max_lookahead)?;
    Ok(t.matched.map(|n| (n.state, n.residual)))
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Hint {
    pub rule: RuleId,
    pub site: Site,
    pub description: String,
    pub result_state: EqSet,
    /// Strategy remaining once the hinted step is taken.
    pub residual: Strategy,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("the strategy has no further steps")]
pub struct StrategyExhausted;

/// The next step of the strategy from `prev`: the first step of the model
/// solution from there, or else the first admissible rule.
pub fn hint(prev: &EqSet, st: &Strategy) -> Result<Hint, StrategyExhausted> {
    if prev.is_solved() {
        return Err(StrategyExhausted);
    }
    if let Ok(m) = model_solution(prev, st) {
        let (rule, site) = *m.rules.first().ok_or(StrategyExhausted)?;
        return Ok(Hint {
            rule,
            site,
            description: rule.description().to_string(),
            result_state: m.states[1].clone(),
            residual: m.residuals[1].clone(),
        });
    }
    let step = firsts(st, prev).into_iter().next().ok_or(StrategyExhausted)?;
    let (result_state, residual) = tidy_closure(step.next, step.residual);
    Ok(Hint {
        rule: step.rule,
        site: step.site,
        description: step.rule.description().to_string(),
        result_state,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_eqset;
    use crate::strategy::StrategyName;

    fn s(t: &str) -> EqSet {
        parse_eqset(t).unwrap()
    }

    fn run(prev: &str, input: &str) -> Diagnosis {
        let task = s("(-x+1)^2 = 9");
        diagnose(&s(prev), &s(input), &StrategyName::Sqrt.strategy(), &task, 5).unwrap()
    }

    #[test]
    fn relation_examples() {
        let v = |a: &str, b: &str| match check_relations(&s(a), &s(b)) {
            RelationOutcome::Match => 0,
            RelationOutcome::Violation { relation, .. } => relation.number(),
        };
        assert_eq!(v("(-x+1)^2 - 9 = 0", "(-x+1)^2 = 9"), 3);
        assert_eq!(v("x^2 - 2*x - 8 = 0", "(-x+1)^2 = 9"), 1);
        assert_eq!(v("1 - x = 3 or 1 - x = -3", "-x+1 = 3 or -x+1 = -3"), 0);
        assert_eq!(v("-x = 3 - 1", "-x = 2"), 2);
    }

    #[test]
    fn worked_walkthrough() {
        let task = "(-x+1)^2 = 9";
        match run(task, "(-x+1)^2 - 9 = 0") {
            Diagnosis::Deviation { relation, feedback_code, .. } => {
                assert_eq!(relation, RelationId::ExpectedZeroDerivation);
                assert_eq!(feedback_code, "unexpected-zero-derivation");
            }
            other => panic!("{other:?}"),
        }
        match run(task, "x^2 - 2*x - 8 = 0") {
            Diagnosis::Deviation { relation, feedback_code, .. } => {
                assert_eq!(relation, RelationId::ExpectedNormalForm);
                assert_eq!(feedback_code, "unexpected-structure-change");
            }
            other => panic!("{other:?}"),
        }
        match run(task, "1 - x = 3 or 1 - x = -3") {
            Diagnosis::Correct { steps_combined, rules, is_variant, .. } => {
                assert_eq!(steps_combined, 1);
                assert_eq!(rules, [RuleId::SqrtBothSides]);
                assert!(is_variant);
            }
            other => panic!("{other:?}"),
        }
        match run(task, "-x = 2 or -x = -4") {
            Diagnosis::Correct { steps_combined, is_variant, .. } => {
                assert_eq!(steps_combined, 2);
                assert!(!is_variant);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(run(task, "x = -2 or x = 4"), Diagnosis::Finished { .. }));
        assert!(matches!(run(task, "x = 99"), Diagnosis::NotEquivalent));
    }

    #[test]
    fn not_equivalent_singletons() {
        let d = diagnose(&s("x = 5"), &s("x = 7"), &StrategyName::Linear.strategy(), &s("x = 5"), 5)
            .unwrap();
        assert_eq!(d, Diagnosis::NotEquivalent);
    }

    #[test]
    fn negative_radicand_input_is_wrong() {
        assert_eq!(run("(-x+1)^2 = 9", "x = sqrt(-4)"), Diagnosis::NotEquivalent);
    }

    #[test]
    fn restatement_is_unknown() {
        assert_eq!(run("(-x+1)^2 = 9", "(1-x)^2 = 9"), Diagnosis::Unknown);
    }

    #[test]
    fn exhausted_strategy_is_unknown() {
        let d = diagnose(&s("-x = 2"), &s("-x - 2 = 0"), &Strategy::Succeed, &s("-x = 2"), 5).unwrap();
        assert_eq!(d, Diagnosis::Unknown);
    }

    #[test]
    fn hints() {
        let st = StrategyName::Sqrt.strategy();
        let h = hint(&s("(-x+1)^2 = 9"), &st).unwrap();
        assert_eq!(h.rule, RuleId::SqrtBothSides);
        assert_eq!(h.result_state.to_string(), "-x+1 = 3 or -x+1 = -3");
        assert_eq!(hint(&s("x = -2 or x = 4"), &st), Err(StrategyExhausted));
        let m = model_solution(&s("(-x+1)^2 = 9"), &st).unwrap();
        let h = hint(&m.states[2], &m.residuals[2]).unwrap();
        assert_eq!(h.rule, RuleId::NegateBothSides);
        assert_eq!(h.result_state.to_string(), "x = -2 or x = 4");
    }

    #[test]
    fn locating_a_state_on_the_strategy() {
        let st = StrategyName::Sqrt.strategy();
        let task = s("(-x+1)^2 = 9");
        let (state, residual) = strategy_at(&task, &st, &s("1-x = 3 or 1-x = -3"), 5).unwrap().unwrap();
        assert_eq!(state.to_string(), "-x+1 = 3 or -x+1 = -3");
        let d = diagnose(&state, &s("x = -2 or x = 4"), &residual, &task, 5).unwrap();
        assert!(matches!(d, Diagnosis::Finished { .. }));
        assert_eq!(strategy_at(&task, &st, &task, 5).unwrap(), Some((task.clone(), st.clone())));
        assert_eq!(strategy_at(&task, &st, &s("x^2 - 2*x - 8 = 0"), 3).unwrap(), None);
    }

    #[test]
    fn cap_is_an_infrastructure_error() {
        let st = StrategyName::Sqrt.strategy();
        let e = diagnose(&s("(-x+1)^2 = 9"), &s("(-x+1)^2 - 9 = 0"), &st, &s("(-x+1)^2 = 9"), 9);
        assert!(matches!(e, Err(DiagnosisError::Strategy(StrategyError::DepthCapExceeded { .. }))));
    }
}
