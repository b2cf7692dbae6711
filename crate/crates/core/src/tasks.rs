//! Random tasks and on-strategy variations, for testing and synthetic logs.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::expr::{EqSet, Equation, Expr};
use crate::parse::parse_eqset;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TaskForm {
    /// `(±x+p)^2 = q^2`
    Square,
    /// `a*x^2 + b*x + c = 0` with real roots
    Quadratic,
    /// `a*x + b = c`
    Linear,
}

impl TaskForm {
    pub const ALL: [TaskForm; 3] = [TaskForm::Square, TaskForm::Quadratic, TaskForm::Linear];
}

fn coeff_term(c: i64, body: &str, first: bool) -> String {
    let sign = match (c < 0, first) {
        (true, _) => "-",
        (false, true) => "",
        (false, false) => "+",
    };
    let mag = c.unsigned_abs();
    match (mag, body.is_empty()) {
        (_, true) => format!("{sign}{mag}"),
        (1, false) => format!("{sign}{body}"),
        _ => format!("{sign}{mag}*{body}"),
    }
}

fn nonzero(rng: &mut impl Rng) -> i64 {
    loop {
        let v = rng.gen_range(-9..=9);
        if v != 0 {
            return v;
        }
    }
}

/// Task text of the given form with integer parameters in `[-9, 9]`.
pub fn task_text(rng: &mut impl Rng, form: TaskForm) -> String {
    match form {
        TaskForm::Square => {
            let neg = rng.gen_bool(0.5);
            let p: i64 = rng.gen_range(-9..=9);
            let q: i64 = rng.gen_range(-9..=9);
            let x = if neg { "-x" } else { "x" };
            let base = match p {
                0 if !neg => return format!("x^2 = {}", q * q),
                0 => format!("({x})"),
                _ => format!("({x}{})", coeff_term(p, "", false)),
            };
            format!("{base}^2 = {}", q * q)
        }
        TaskForm::Quadratic => loop {
            let a = nonzero(rng);
            let b: i64 = rng.gen_range(-9..=9);
            let c: i64 = rng.gen_range(-9..=9);
            if (b == 0 && c == 0) || b * b - 4 * a * c < 0 {
                continue;
            }
            let mut text = coeff_term(a, "x^2", true);
            if b != 0 {
                text += &coeff_term(b, "x", false);
            }
            if c != 0 {
                text += &coeff_term(c, "", false);
            }
            return text + " = 0";
        },
        TaskForm::Linear => {
            let a = nonzero(rng);
            let b: i64 = rng.gen_range(-9..=9);
            let c: i64 = rng.gen_range(-9..=9);
            let mut text = coeff_term(a, "x", true);
            if b != 0 {
                text += &coeff_term(b, "", false);
            }
            format!("{text} = {c}")
        }
    }
}

/// `n` tasks cycling through the forms, reproducible from `seed`.
pub fn generate_tasks(seed: u64, n: usize) -> Vec<EqSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let text = task_text(&mut rng, TaskForm::ALL[i % TaskForm::ALL.len()]);
            parse_eqset(&text).expect("generated tasks parse")
        })
        .collect()
}

fn shuffle_side(e: &Expr, rng: &mut impl Rng) -> Expr {
    match e {
        Expr::Sum(items) => {
            let mut items = items.clone();
            items.shuffle(rng);
            Expr::sum(items)
        }
        other => other.clone(),
    }
}

/// Random reordering of the equations and of the summands on every side.
pub fn shuffled_variant(s: &EqSet, rng: &mut impl Rng) -> EqSet {
    let mut eqs: Vec<Equation> = s
        .equations()
        .iter()
        .map(|eq| Equation::new(shuffle_side(&eq.lhs, rng), shuffle_side(&eq.rhs, rng)))
        .collect();
    eqs.shuffle(rng);
    EqSet::new(eqs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tasks_are_reproducible_and_parse() {
        assert_eq!(generate_tasks(7, 30), generate_tasks(7, 30));
        assert_ne!(generate_tasks(7, 30), generate_tasks(8, 30));
    }

    #[test]
    fn term_rendering() {
        assert_eq!(coeff_term(1, "x^2", true), "x^2");
        assert_eq!(coeff_term(-1, "x", false), "-x");
        assert_eq!(coeff_term(3, "x", false), "+3*x");
        assert_eq!(coeff_term(-4, "", false), "-4");
    }
}
