//! Replaying logged steps through the diagnosis and tallying the outcomes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use proptrace::diagnosis::{diagnose, strategy_at, Diagnosis};
use proptrace::parse::parse_eqset;
use proptrace::select_strategy;
use serde::{Deserialize, Serialize};

/// One logged step. `prev` defaults to `task`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BatchRecord {
    pub task: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prev: Option<String>,
    pub input: String,
    /// Label assigned when the log was built, e.g. `correct` or `deviation-3`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
}

/// Every label a diagnosis can receive, in report order.
pub const LABELS: [&str; 7] =
    ["correct", "finished", "deviation-1", "deviation-2", "deviation-3", "not-equivalent", "unknown"];

/// `deviation-N` for deviations, the class name otherwise.
pub fn label(d: &Diagnosis) -> String {
    match d {
        Diagnosis::Deviation { relation, .. } => format!("deviation-{}", relation.number()),
        other => other.class().to_string(),
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct LineIssue {
    pub line: usize,
    pub message: String,
}

#[derive(Clone, PartialEq, Debug, Default, Serialize, Deserialize)]
pub struct Timing {
    pub mean_ms: f64,
    pub p50_ms: f64,
    pub p90_ms: f64,
    pub p99_ms: f64,
    pub max_ms: f64,
}

impl Timing {
    pub fn of(samples: &[f64]) -> Timing {
        if samples.is_empty() {
            return Timing::default();
        }
        let mut s = samples.to_vec();
        s.sort_by(f64::total_cmp);
        let rank = |p: f64| s[((p * s.len() as f64).ceil() as usize).clamp(1, s.len()) - 1];
        Timing {
            mean_ms: s.iter().sum::<f64>() / s.len() as f64,
            p50_ms: rank(0.50),
            p90_ms: rank(0.90),
            p99_ms: rank(0.99),
            max_ms: s[s.len() - 1],
        }
    }
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct BatchReport {
    /// Records that received a diagnosis; equals the sum of `counts`.
    pub total: usize,
    pub counts: BTreeMap<String, usize>,
    pub parse_failures: Vec<LineIssue>,
    /// Records the diagnosis machinery could not handle.
    pub errors: Vec<LineIssue>,
    pub labelled: usize,
    pub agreeing: usize,
    pub disagreements: Vec<LineIssue>,
    pub timing: Timing,
}

impl BatchReport {
    pub fn count(&self, label: &str) -> usize {
        self.counts.get(label).copied().unwrap_or(0)
    }

    /// The report without timings, for comparing runs.
    pub fn counts_only(&self) -> BatchReport {
        BatchReport { timing: Timing::default(), ..self.clone() }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "total            {}", self.total);
        for l in LABELS {
            let _ = writeln!(out, "{l:<16} {}", self.count(l));
        }
        let _ = writeln!(out, "parse failures   {}", self.parse_failures.len());
        for p in &self.parse_failures {
            let _ = writeln!(out, "  line {}: {}", p.line, p.message);
        }
        let _ = writeln!(out, "errors           {}", self.errors.len());
        for p in &self.errors {
            let _ = writeln!(out, "  line {}: {}", p.line, p.message);
        }
        if self.labelled > 0 {
            let _ = writeln!(out, "label agreement  {}/{}", self.agreeing, self.labelled);
            for p in &self.disagreements {
                let _ = writeln!(out, "  line {}: {}", p.line, p.message);
            }
        }
        let t = &self.timing;
        let _ = writeln!(
            out,
            "timing ms        mean {:.3} p50 {:.3} p90 {:.3} p99 {:.3} max {:.3}",
            t.mean_ms, t.p50_ms, t.p90_ms, t.p99_ms, t.max_ms
        );
        out
    }
}

/// How far ahead `prev` is looked up on the task's strategy.
const LOCATE_LOOKAHEAD: usize = 6;

enum Outcome {
    Parse(String),
    Error(String),
    Diagnosed(Diagnosis, f64),
}

fn run_record(rec: &BatchRecord, max_lookahead: usize) -> Outcome {
    let parsed = (|| {
        let task = parse_eqset(&rec.task)?;
        let prev = match &rec.prev {
            Some(p) => parse_eqset(p)?,
            None => task.clone(),
        };
        Ok::<_, proptrace::ParseError>((task, prev, parse_eqset(&rec.input)?))
    })();
    let (task, prev, input) = match parsed {
        Ok(v) => v,
        Err(e) => return Outcome::Parse(e.to_string()),
    };
    let st = match select_strategy(&task) {
        Ok(name) => name.strategy(),
        Err(e) => return Outcome::Error(e.to_string()),
    };
    // Resume the strategy where `prev` sits; off-strategy states restart it.
    let (from, residual) = match strategy_at(&task, &st, &prev, LOCATE_LOOKAHEAD) {
        Ok(Some(found)) => found,
        Ok(None) => (prev, st),
        Err(e) => return Outcome::Error(e.to_string()),
    };
    let start = Instant::now();
    let d = diagnose(&from, &input, &residual, &task, max_lookahead);
    let ms = start.elapsed().as_secs_f64() * 1000.0;
    match d {
        Ok(d) => Outcome::Diagnosed(d, ms),
        Err(e) => Outcome::Error(e.to_string()),
    }
}

/// Diagnoses every non-blank line of a JSONL log. Bad lines are counted,
/// never fatal.
pub fn batch_eval(text: &str, max_lookahead: usize) -> BatchReport {
    let mut report = BatchReport {
        total: 0,
        counts: LABELS.iter().map(|l| (l.to_string(), 0)).collect(),
        parse_failures: Vec::new(),
        errors: Vec::new(),
        labelled: 0,
        agreeing: 0,
        disagreements: Vec::new(),
        timing: Timing::default(),
    };
    let mut times = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let rec: BatchRecord = match serde_json::from_str(line) {
            Ok(r) => r,
            Err(e) => {
                report.parse_failures.push(LineIssue { line: line_no, message: e.to_string() });
                continue;
            }
        };
        match run_record(&rec, max_lookahead) {
            Outcome::Parse(message) => report.parse_failures.push(LineIssue { line: line_no, message }),
            Outcome::Error(message) => report.errors.push(LineIssue { line: line_no, message }),
            Outcome::Diagnosed(d, ms) => {
                times.push(ms);
                report.total += 1;
                let got = label(&d);
                *report.counts.entry(got.clone()).or_default() += 1;
                if let Some(want) = &rec.expected {
                    report.labelled += 1;
                    if *want == got {
                        report.agreeing += 1;
                    } else {
                        report
                            .disagreements
                            .push(LineIssue { line: line_no, message: format!("expected {want}, got {got}") });
                    }
                }
            }
        }
    }
    report.timing = Timing::of(&times);
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn percentiles_use_nearest_rank() {
        let t = Timing::of(&(1..=100).map(f64::from).collect::<Vec<_>>());
        assert_eq!((t.p50_ms, t.p90_ms, t.p99_ms, t.max_ms), (50.0, 90.0, 99.0, 100.0));
        assert_eq!(t.mean_ms, 50.5);
        assert_eq!(Timing::of(&[]), Timing::default());
    }

    #[test]
    fn bad_lines_are_counted() {
        let text = "not json\n\n{\"task\": \"x = (\", \"input\": \"x = 1\"}\n{\"task\": \"x^3 = 1\", \"input\": \"x = 1\"}\n";
        let r = batch_eval(text, 5);
        assert_eq!(r.total, 0);
        assert_eq!(r.parse_failures.iter().map(|p| p.line).collect::<Vec<_>>(), [1, 3]);
        assert_eq!(r.errors.len(), 1);
        assert_eq!(r.errors[0].line, 4);
    }

    #[test]
    fn prev_defaults_to_task() {
        let r = batch_eval("{\"task\": \"2*x = 6\", \"input\": \"x = 3\", \"expected\": \"finished\"}\n", 5);
        assert_eq!((r.total, r.count("finished"), r.agreeing), (1, 1, 1));
    }
}
