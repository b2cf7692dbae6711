//! The bundled synthetic step log: mostly on-strategy steps, some with
//! several steps combined or summands reordered, plus two kinds of
//! deviation, each line labelled with how it was built.

use proptrace::strategy::{model_solution, select_strategy};
use proptrace::tasks::{generate_tasks, shuffled_variant};
use proptrace::{nf_full, EqSet};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::batch::BatchRecord;

pub const SEED: u64 = 17;
pub const CORRECT: usize = 85;
/// Squares expanded all the way instead of taking roots.
pub const EXPANDED: usize = 8;
/// Squares with the constant moved over to zero.
pub const ZEROED: usize = 7;

fn nonzero(rng: &mut ChaCha8Rng) -> i64 {
    loop {
        let v: i64 = rng.gen_range(-9..=9);
        if v != 0 {
            return v;
        }
    }
}

/// `(±x+p)^2 = q^2` with `p` and `q` nonzero.
fn square_task(rng: &mut ChaCha8Rng) -> String {
    let x = if rng.gen_bool(0.5) { "-x" } else { "x" };
    let p = nonzero(rng);
    let q = nonzero(rng);
    let sign = if p < 0 { '-' } else { '+' };
    format!("({x}{sign}{})^2 = {}", p.abs(), q * q)
}

fn correct_records(rng: &mut ChaCha8Rng) -> Vec<BatchRecord> {
    let mut out = Vec::new();
    for task in generate_tasks(SEED, 400) {
        if out.len() == CORRECT {
            break;
        }
        let Ok(name) = select_strategy(&task) else { continue };
        let Ok(m) = model_solution(&task, &name.strategy()) else { continue };
        let last = m.states.len() - 1;
        if last < 2 {
            continue;
        }
        // a pair ending before the solved state
        let i = rng.gen_range(0..last - 1);
        let j = rng.gen_range(i + 1..=(i + 4).min(last - 1));
        let input: EqSet = if rng.gen_bool(0.3) { shuffled_variant(&m.states[j], rng) } else { m.states[j].clone() };
        out.push(BatchRecord {
            task: task.to_string(),
            prev: (i > 0).then(|| m.states[i].to_string()),
            input: input.to_string(),
            expected: Some("correct".into()),
        });
    }
    out
}

/// The log's records, deterministic.
pub fn records() -> Vec<BatchRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut out = correct_records(&mut rng);
    for _ in 0..EXPANDED {
        let task = square_task(&mut rng);
        let parsed = proptrace::parse_eqset(&task).expect("square tasks parse");
        let input = nf_full(&parsed).expect("squares are polynomial");
        out.push(BatchRecord { task, prev: None, input: input.to_string(), expected: Some("deviation-1".into()) });
    }
    for _ in 0..ZEROED {
        let task = square_task(&mut rng);
        let (lhs, rhs) = task.split_once(" = ").expect("square tasks have one equation");
        let input = format!("{lhs} - {rhs} = 0");
        out.push(BatchRecord { task, prev: None, input, expected: Some("deviation-3".into()) });
    }
    out.shuffle(&mut rng);
    out
}

/// The log as JSONL text.
pub fn log_text() -> String {
    records().iter().map(|r| serde_json::to_string(r).expect("records serialize") + "\n").collect()
}
