//! Property tracing for stepwise solutions of quadratic equations.
//!
//! A strategy over production rules generates model solutions; a student
//! step is matched against the states the strategy can reach by comparing
//! normal forms, term counts and zero derivations, in that order.

pub mod algebra;
pub mod diagnosis;
pub mod expr;
pub mod parse;
pub mod rational;
pub mod render;
pub mod rules;
pub mod strategy;
pub mod tasks;

pub use algebra::{equivalent, nf_full, nf_struct, root_set, simplify_fraction, AlgebraError, RootSet};
pub use diagnosis::{check_relations, diagnose, hint, strategy_at, Diagnosis, Hint, RelationId, RelationOutcome};
pub use expr::{eval_at, is_zero_derived, term_count, EqSet, Equation, Expr, Side};
pub use parse::{parse_eqset, parse_expr, ParseError};
pub use rational::Rational;
pub use render::render;
pub use rules::{apply_rule, applicable_sites, RuleId, Site};
pub use strategy::{model_solution, reachable_states, select_strategy, ModelSolution, Strategy, StrategyName};
