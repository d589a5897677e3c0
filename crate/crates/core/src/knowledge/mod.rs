//! Knowledge objects, the derivation order, and its decompositions.

mod chapters;
mod dag;
mod export;
mod object;
mod product;
mod sections;

pub use chapters::{check_assumption, decompose_chapters, AssumptionReport, Chapter, ChapterDecomposition, ChapterRule, CrossEdges};
pub use dag::{upper_set_topology, DerivationDag};
pub use export::{chapters_dot, dag_dot};
pub use object::{build_knowledge_spaces, KnowledgeBaseDoc, KnowledgeContent, KnowledgeKind, KnowledgeObject, KnowledgeSpaces, ObjectEntry};
pub use product::{pair_name, product_preorder, product_space};
pub use sections::{
    decompose_components, decompose_sections, decomposition_count, uniqueness_notes, KnowledgeSection, SectionForm, UniquenessNote, UNIQUENESS_LIMIT,
};

use crate::topology::TopologyError;

#[derive(Debug, thiserror::Error)]
pub enum KnowledgeError {
    #[error("not admitted: {0}")]
    Admission(String),
    #[error("order violation: {0}")]
    Order(String),
    #[error("unknown knowledge object: {0}")]
    Unknown(String),
    #[error("capability error: {0}")]
    Capability(String),
    #[error(transparent)]
    Topology(#[from] TopologyError),
}
