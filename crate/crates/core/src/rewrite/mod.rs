//! Named rewrite rules and a checker for position-addressed derivations.

use thiserror::Error;

mod builtin;
mod derivation;
mod matching;
mod rules;

pub use builtin::{builtin_derivation, builtin_derivations, EXERCISE_STATED_RESULT};
pub use derivation::{check_derivation, Check, Derivation, DerivationReport, Step, StepReport};
pub use matching::{
    all_positions, apply_rule, format_position, match_expr, subterm, Bindings, Direction, Position,
};
pub use rules::{find_rule, rule_table, rules, tuple_of_value, verify_rules, Rule, RuleInstance, RuleParamKind, RuleParams};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("unknown rule {0:?}")]
    UnknownRule(String),
    #[error("rule {rule}: {message}")]
    SideCondition { rule: String, message: String },
    #[error("bad position {position}: {message}")]
    BadPosition { position: String, message: String },
    #[error("rule {rule} does not match at {position}: expected `{expected}`, found `{found}`")]
    NoMatch { rule: String, position: String, expected: String, found: String },
    #[error("rule {rule}: variable {var} is not bound by the match; supply it in the substitution")]
    Unbound { rule: String, var: String },
    #[error("rule {rule} has no variable {var}")]
    UnknownVariable { rule: String, var: String },
    #[error("rule {rule} would produce an ill-formed term: {message}")]
    IllFormed { rule: String, message: String },
}
