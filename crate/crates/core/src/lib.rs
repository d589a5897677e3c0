pub mod domain;
pub mod inference;
pub mod information;
pub mod knowledge;
pub mod metric;
pub mod pipeline;
pub mod topology;
