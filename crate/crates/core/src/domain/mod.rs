//! Domains: objects, function and relation symbols, methods, and the
//! interpretation of a data space into a domain.

mod interpret;
mod logic;
mod method;
mod signature;
mod value;

pub use interpret::{interpret, DStar, Interpretation, InterpretationMap};
pub use logic::{variable_names, AtomPattern, Bindings, Formula, GroundAtom, QuantifiedFormula, Quantifier, QuantifierBinding, Term};
pub(crate) use method::check_method;
pub use method::{execute_method, replay, ArgSource, Goal, Instruction, MethodRun, MethodSpec, Operation, OperationTrace, SlotDecl, SlotDomain};
pub use signature::{DerivedObject, DomainSignature, FailureMode, FunctionSymbol, RelationSymbol};
pub use value::{DomainObject, Value};

use crate::topology::TopologyError;

#[derive(Debug, thiserror::Error)]
pub enum DomainError {
    #[error("incomplete interpretation: {0}")]
    Incomplete(String),
    #[error("signature error: {0}")]
    Signature(String),
    #[error("method error: {0}")]
    MethodInvalid(String),
    #[error("instruction {index}: {message}")]
    Undefined { index: usize, message: String },
    #[error("capability error: {0}")]
    Capability(String),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("{path}: {message}")]
    Document { path: String, message: String },
}

impl DomainError {
    pub(crate) fn from_json(e: serde_json::Error) -> Self {
        Self::Parse { line: e.line(), column: e.column(), message: e.to_string() }
    }
}
