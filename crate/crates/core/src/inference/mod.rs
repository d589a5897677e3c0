//! Deduction, induction and validation over ground atoms.

mod deduce;
mod induce;
mod rules;
mod validate;

pub use deduce::{deduce, Deduction, Derivation};
pub use induce::{induce, ConjectureStatus, QuantifiedConjecture, DEFAULT_MIN_SUPPORT};
pub use rules::{parse_rules, HornRule};
pub use validate::{validate, Outcome, Target, ValidationMethod, ValidationRecord};

use crate::domain::DomainError;

#[derive(Debug, thiserror::Error)]
pub enum InferenceError {
    #[error("line {line}: {message}")]
    Rule { line: usize, message: String },
    #[error("signature error: {0}")]
    Signature(String),
    #[error("capability error: {0}")]
    Capability(String),
    #[error(transparent)]
    Domain(#[from] DomainError),
}
