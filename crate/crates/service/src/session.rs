//! Sessions as state machines over an append-only event log.

use proptrace::diagnosis::{diagnose, hint, Diagnosis, DiagnosisError};
use proptrace::parse::{parse_eqset, ParseError};
use proptrace::strategy::{Strategy, StrategyName};
use proptrace::EqSet;
use serde::{Deserialize, Serialize};

use crate::record::{HintRecord, SessionSummary, StepRecord};

/// Strategy position after an accepted step.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Cursor {
    pub state: String,
    pub residual: Strategy,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EventKind {
    Created { id: String, task: String, strategy: StrategyName },
    Step {
        input: String,
        record: StepRecord,
        /// Set when the step was accepted.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cursor: Option<Cursor>,
    },
    Hint { record: HintRecord },
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Event {
    /// Milliseconds since the Unix epoch, UTC.
    pub ts_ms: u64,
    #[serde(flatten)]
    pub kind: EventKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReplayError {
    #[error("the log is empty")]
    Empty,
    #[error("line {line}: {message}")]
    Json { line: usize, message: String },
    #[error("line {line}: the first event must create the session")]
    NotCreatedFirst { line: usize },
    #[error("line {line}: the session was already created")]
    DuplicateCreated { line: usize },
    #[error("line {line}: timestamp goes backwards")]
    NonMonotone { line: usize },
    #[error("line {line}: {source}")]
    Parse { line: usize, source: ParseError },
    #[error("line {line}: invalid strategy in cursor")]
    Strategy { line: usize },
}

#[derive(Debug, thiserror::Error)]
pub enum StepError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Diagnosis(#[from] DiagnosisError),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Session {
    pub id: String,
    pub task: EqSet,
    pub strategy: StrategyName,
    /// The task followed by every accepted input, as typed.
    pub accepted_states: Vec<EqSet>,
    /// Canonical state the strategy is at, and what remains of it.
    pub position: EqSet,
    pub residual: Strategy,
    pub finished: bool,
    pub events: Vec<Event>,
}

impl Session {
    /// A session from its `created` event.
    pub fn from_created(event: Event) -> Result<Session, ReplayError> {
        let EventKind::Created { id, task, strategy } = &event.kind else {
            return Err(ReplayError::NotCreatedFirst { line: 1 });
        };
        let task = parse_eqset(task).map_err(|source| ReplayError::Parse { line: 1, source })?;
        Ok(Session {
            id: id.clone(),
            accepted_states: vec![task.clone()],
            position: task.clone(),
            residual: strategy.strategy(),
            strategy: *strategy,
            task,
            finished: false,
            events: vec![event],
        })
    }

    /// Applies a later event. Live operation and replay both go through here.
    pub fn apply(&mut self, event: Event) -> Result<(), ReplayError> {
        let line = self.events.len() + 1;
        if self.events.last().is_some_and(|last| event.ts_ms < last.ts_ms) {
            return Err(ReplayError::NonMonotone { line });
        }
        match &event.kind {
            EventKind::Created { .. } => return Err(ReplayError::DuplicateCreated { line }),
            EventKind::Step { input, record, cursor } => {
                if let Some(cursor) = cursor {
                    let accepted = parse_eqset(input).map_err(|source| ReplayError::Parse { line, source })?;
                    let position =
                        parse_eqset(&cursor.state).map_err(|source| ReplayError::Parse { line, source })?;
                    cursor.residual.validate().map_err(|_| ReplayError::Strategy { line })?;
                    self.accepted_states.push(accepted);
                    self.position = position;
                    self.residual = cursor.residual.clone();
                    self.finished |= record.class == "finished";
                }
            }
            EventKind::Hint { .. } => {}
        }
        self.events.push(event);
        Ok(())
    }

    fn next_ts(&self, now_ms: u64) -> u64 {
        self.events.last().map_or(now_ms, |e| e.ts_ms.max(now_ms))
    }

    /// Diagnoses `input` against the current position; the event is not applied.
    pub fn step_event(
        &self,
        input_text: &str,
        max_lookahead: usize,
        now_ms: u64,
    ) -> Result<(Event, Diagnosis), StepError> {
        let input = parse_eqset(input_text)?;
        let d = diagnose(&self.position, &input, &self.residual, &self.task, max_lookahead)?;
        let cursor = match &d {
            Diagnosis::Correct { matched_state, residual, .. } => {
                Some(Cursor { state: matched_state.to_string(), residual: residual.clone() })
            }
            Diagnosis::Finished { solution } => {
                Some(Cursor { state: solution.to_string(), residual: Strategy::Succeed })
            }
            _ => None,
        };
        let event = Event {
            ts_ms: self.next_ts(now_ms),
            kind: EventKind::Step { input: input_text.to_string(), record: StepRecord::from(&d), cursor },
        };
        Ok((event, d))
    }

    /// The hint at the current position; `None` once the strategy is exhausted.
    pub fn hint_event(&self, now_ms: u64) -> Option<Event> {
        let h = hint(&self.position, &self.residual).ok()?;
        Some(Event { ts_ms: self.next_ts(now_ms), kind: EventKind::Hint { record: HintRecord::from(&h) } })
    }

    pub fn summary(&self) -> SessionSummary {
        SessionSummary {
            id: self.id.clone(),
            task: self.task.to_string(),
            strategy: self.strategy.name().to_string(),
            accepted_states: self.accepted_states.iter().map(ToString::to_string).collect(),
            finished: self.finished,
            events: self.events.len(),
        }
    }
}

/// Rebuilds a session from its log. A final line without a newline is a
/// write cut short by a crash and is ignored.
pub fn replay(text: &str) -> Result<Session, ReplayError> {
    let complete = match text.rfind('\n') {
        Some(i) => &text[..=i],
        None => "",
    };
    let mut session: Option<Session> = None;
    for (i, line) in complete.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let event: Event = serde_json::from_str(line)
            .map_err(|e| ReplayError::Json { line: i + 1, message: e.to_string() })?;
        match &mut session {
            None => session = Some(Session::from_created(event)?),
            Some(s) => s.apply(event)?,
        }
    }
    session.ok_or(ReplayError::Empty)
}

/// One log line, newline included.
pub fn log_line(event: &Event) -> String {
    let mut line = serde_json::to_string(event).expect("events serialize");
    line.push('\n');
    line
}

#[cfg(test)]
mod tests {
    use super::*;

    fn created(task: &str) -> Session {
        Session::from_created(Event {
            ts_ms: 10,
            kind: EventKind::Created { id: "s1".into(), task: task.into(), strategy: StrategyName::Sqrt },
        })
        .unwrap()
    }

    #[test]
    fn walkthrough_replays() {
        let mut s = created("(-x+1)^2 = 9");
        let mut log: String = s.events.iter().map(log_line).collect();
        for (t, input) in [(5, "(-x+1)^2 - 9 = 0"), (20, "1 - x = 3 or 1 - x = -3"), (30, "x = -2 or x = 4")] {
            let (event, _) = s.step_event(input, 5, t).unwrap();
            log.push_str(&log_line(&event));
            s.apply(event).unwrap();
        }
        assert_eq!(s.accepted_states.len(), 3);
        assert!(s.finished);
        assert_eq!(s.events[1].ts_ms, 10, "clock going backwards is clamped");
        assert_eq!(replay(&log).unwrap(), s);
        // a torn final write is dropped
        let torn = format!("{log}{{\"ts_ms\":99,\"kind\":\"hi");
        assert_eq!(replay(&torn).unwrap(), s);
    }

    #[test]
    fn bad_logs_are_rejected() {
        assert_eq!(replay(""), Err(ReplayError::Empty));
        assert!(matches!(replay("nope\n"), Err(ReplayError::Json { line: 1, .. })));
        let s = created("x = 1");
        let line = log_line(&s.events[0]);
        assert_eq!(replay(&format!("{line}{line}")), Err(ReplayError::DuplicateCreated { line: 2 }));
        let hint = log_line(&Event {
            ts_ms: 1,
            kind: EventKind::Hint {
                record: HintRecord { rule: proptrace::RuleId::Tidy, description: String::new(), result_state: "x = 1".into() },
            },
        });
        assert_eq!(replay(&hint), Err(ReplayError::NotCreatedFirst { line: 1 }));
        assert_eq!(replay(&format!("{line}{hint}")), Err(ReplayError::NonMonotone { line: 2 }));
    }
}
