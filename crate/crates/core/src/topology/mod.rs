//! Finite topological spaces.
//!
//! A finite topology is stored as a canonically sorted family of bit masks
//! over a [`GroundSet`]. On a finite ground set every topology is Alexandrov,
//! so each space is equally described by its specialization [`Preorder`];
//! [`specialization_preorder`] and [`alexandrov_topology`] convert between the
//! two views.

mod doc;
mod functions;
mod ground;
mod mask;
mod preorder;
mod space;

pub use doc::{PreorderDoc, TopologyDoc};
pub use functions::{eval_data_function, eval_data_relation, eval_open_formula, DataFunction, DataRelation, OpenFormula, OpenTerm};
pub use ground::GroundSet;
pub use mask::SubsetMask;
pub use preorder::{alexandrov_topology, count_upper_sets, specialization_preorder, Preorder};
pub use space::{
    closure, generate_topology, is_compact, is_connected, is_discrete, is_metrizable, is_t1, verify_topology, AxiomViolation, FiniteTopology,
    TopologyReport,
};

use thiserror::Error;

/// Largest ground set the bit-mask representation supports.
pub const MAX_ELEMENTS: usize = 62;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TopologyError {
    #[error("ground set must not be empty")]
    EmptyGround,
    #[error("duplicate element `{0}` in ground set")]
    DuplicateElement(String),
    #[error("ground set has {0} elements, at most {MAX_ELEMENTS} are supported")]
    TooManyElements(usize),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("malformed input: mask of width {found} used with a ground set of {expected} elements")]
    WidthMismatch { expected: usize, found: usize },
    #[error("family is not a topology: {0}")]
    NotATopology(String),
    #[error("relation is not a preorder: {0}")]
    NotAPreorder(String),
    #[error("domain error: {0}")]
    Domain(String),
}
