//! JSON shapes shared by the HTTP API, the event log and the command line.

use proptrace::diagnosis::{Diagnosis, Hint};
use proptrace::rules::RuleId;
use serde::{Deserialize, Serialize};

/// Display colour of a diagnosed step.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    Green,
    Yellow,
    Red,
}

pub fn tier(d: &Diagnosis) -> Tier {
    match d {
        Diagnosis::Correct { .. } | Diagnosis::Finished { .. } => Tier::Green,
        Diagnosis::Deviation { .. } | Diagnosis::Unknown => Tier::Yellow,
        Diagnosis::NotEquivalent => Tier::Red,
    }
}

/// A diagnosis as sent to clients.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct StepRecord {
    pub class: String,
    pub tier: Tier,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps_combined: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rules: Option<Vec<RuleId>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub is_variant: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matched_state: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feedback_code: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub best_candidate: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl From<&Diagnosis> for StepRecord {
    fn from(d: &Diagnosis) -> Self {
        let mut r = StepRecord {
            class: d.class().to_string(),
            tier: tier(d),
            steps_combined: None,
            rules: None,
            is_variant: None,
            matched_state: None,
            relation: None,
            feedback_code: None,
            best_candidate: None,
            detail: None,
        };
        match d {
            Diagnosis::Correct { matched_state, steps_combined, rules, is_variant, .. } => {
                r.steps_combined = Some(*steps_combined);
                r.rules = Some(rules.clone());
                r.is_variant = Some(*is_variant);
                r.matched_state = Some(matched_state.to_string());
            }
            Diagnosis::Finished { solution } => r.matched_state = Some(solution.to_string()),
            Diagnosis::Deviation { relation, best_candidate, feedback_code, detail } => {
                r.relation = Some(relation.number());
                r.feedback_code = Some(feedback_code.to_string());
                r.best_candidate = Some(best_candidate.to_string());
                r.detail = Some(detail.clone());
            }
            Diagnosis::NotEquivalent | Diagnosis::Unknown => {}
        }
        r
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct HintRecord {
    pub rule: RuleId,
    pub description: String,
    pub result_state: String,
}

impl From<&Hint> for HintRecord {
    fn from(h: &Hint) -> Self {
        HintRecord {
            rule: h.rule,
            description: h.description.clone(),
            result_state: h.result_state.to_string(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CreatedRecord {
    pub id: String,
    pub task: String,
    pub strategy: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SessionSummary {
    pub id: String,
    pub task: String,
    pub strategy: String,
    pub accepted_states: Vec<String>,
    pub finished: bool,
    pub events: usize,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptrace::diagnosis::RelationId;
    use proptrace::parse_eqset;
    use proptrace::strategy::Strategy;

    fn all_kinds() -> Vec<Diagnosis> {
        let s = parse_eqset("x = 1").unwrap();
        vec![
            Diagnosis::Correct {
                matched_state: s.clone(),
                steps_combined: 2,
                rules: vec![RuleId::MoveTerm],
                is_variant: true,
                residual: Strategy::Succeed,
            },
            Diagnosis::Finished { solution: s.clone() },
            Diagnosis::Deviation {
                relation: RelationId::ExpectedTermCount,
                best_candidate: s,
                feedback_code: "unexpected-term-count",
                detail: String::new(),
            },
            Diagnosis::NotEquivalent,
            Diagnosis::Unknown,
        ]
    }

    #[test]
    fn tiers_cover_every_class() {
        let tiers: Vec<Tier> = all_kinds().iter().map(tier).collect();
        assert_eq!(tiers, [Tier::Green, Tier::Green, Tier::Yellow, Tier::Red, Tier::Yellow]);
    }

    #[test]
    fn record_fields_follow_the_class() {
        let v: Vec<serde_json::Value> = all_kinds()
            .iter()
            .map(|d| serde_json::to_value(StepRecord::from(d)).unwrap())
            .collect();
        assert_eq!(v[0]["steps_combined"], 2);
        assert_eq!(v[0]["rules"][0], "MOVE_TERM");
        assert_eq!(v[2]["relation"], 2);
        assert_eq!(v[2]["feedback_code"], "unexpected-term-count");
        assert!(v[3].get("relation").is_none());
        assert_eq!(v[3]["tier"], "red");
        for (val, d) in v.iter().zip(all_kinds()) {
            let back: StepRecord = serde_json::from_value(val.clone()).unwrap();
            assert_eq!(back, StepRecord::from(&d));
        }
    }
}
