//! The end-to-end run: data space, clusters and complex, interpretation,
//! information space, inference, knowledge space, decompositions.

mod docs;
mod stages;

pub use docs::{DataSpace, DatasetDoc, DocError, InterpretationDoc, MethodApplication};
pub use stages::{run_stages, Artifact, StageOutput, OPEN_COUNT_LIMIT};

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use crate::domain::DomainSignature;
use crate::inference::{parse_rules, HornRule, DEFAULT_MIN_SUPPORT};
use crate::metric::DEFAULT_MAX_DIM;

pub const STAGE_NAMES: [&str; 7] = ["data-space", "clusters", "interpretation", "information", "inference", "knowledge", "decomposition"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum OutputFormat {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub dataset: PathBuf,
    pub domain: PathBuf,
    pub interpretation: PathBuf,
    pub rules: Option<PathBuf>,
    /// Overrides the dataset's own `epsilon`.
    pub epsilon: Option<f64>,
    pub max_dim: usize,
    pub min_support: usize,
    /// Run stages `1..=stage`.
    pub stage: usize,
    pub out: PathBuf,
    pub formats: BTreeSet<OutputFormat>,
}

impl PipelineConfig {
    pub fn new(dataset: impl Into<PathBuf>, domain: impl Into<PathBuf>, interpretation: impl Into<PathBuf>, out: impl Into<PathBuf>) -> Self {
        Self {
            dataset: dataset.into(),
            domain: domain.into(),
            interpretation: interpretation.into(),
            rules: None,
            epsilon: None,
            max_dim: DEFAULT_MAX_DIM,
            min_support: DEFAULT_MIN_SUPPORT,
            stage: STAGE_NAMES.len(),
            out: out.into(),
            formats: [OutputFormat::Text, OutputFormat::Json, OutputFormat::Dot].into(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    /// Unreadable or malformed input; nothing is written.
    #[error("{0}")]
    Input(String),
    /// A stage rejected its input; earlier artifacts and a report are written.
    #[error("{0}")]
    Semantic(String),
    #[error("cannot write output: {0}")]
    Output(String),
}

impl PipelineError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Input(_) | Self::Output(_) => 2,
            Self::Semantic(_) => 3,
        }
    }
}

/// Everything read from disk, parsed and checked.
pub struct Inputs {
    pub dataset: DatasetDoc,
    pub signature: DomainSignature,
    pub interpretation: InterpretationDoc,
    pub rules: Vec<HornRule>,
}

fn read(path: &Path) -> Result<String, PipelineError> {
    fs::read_to_string(path).map_err(|e| PipelineError::Input(format!("{}: {e}", path.display())))
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path, text: &str) -> Result<T, PipelineError> {
    serde_json::from_str(text).map_err(|e| PipelineError::Input(format!("{}: line {}, column {}: {}", path.display(), e.line(), e.column(), e)))
}

/// Reads and parses every input file before anything runs.
pub fn load_inputs(config: &PipelineConfig) -> Result<Inputs, PipelineError> {
    if config.stage == 0 || config.stage > STAGE_NAMES.len() {
        return Err(PipelineError::Input(format!("--stage must be between 1 and {}", STAGE_NAMES.len())));
    }
    if let Some(e) = config.epsilon {
        if !(e.is_finite() && e >= 0.0) {
            return Err(PipelineError::Input(format!("--epsilon must be a nonnegative number, got {e}")));
        }
    }
    if config.min_support == 0 {
        return Err(PipelineError::Input("--min-support must be positive".into()));
    }
    let dataset_text = read(&config.dataset)?;
    let domain_text = read(&config.domain)?;
    let interpretation_text = read(&config.interpretation)?;
    let rules_text = config.rules.as_deref().map(read).transpose()?;

    let dataset: DatasetDoc = parse_json(&config.dataset, &dataset_text)?;
    let signature = DomainSignature::from_json(&domain_text).map_err(|e| PipelineError::Input(format!("{}: {e}", config.domain.display())))?;
    let interpretation: InterpretationDoc = parse_json(&config.interpretation, &interpretation_text)?;
    let rules = match (&config.rules, rules_text) {
        (Some(path), Some(text)) => parse_rules(&text).map_err(|e| PipelineError::Input(format!("{}: {e}", path.display())))?,
        _ => Vec::new(),
    };
    Ok(Inputs { dataset, signature, interpretation, rules })
}

/// Summary of a completed run.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub written: Vec<PathBuf>,
    pub report: String,
}

/// Loads the inputs, runs the requested stages and writes their artifacts.
///
/// Input errors write nothing. When a stage fails, the artifacts of the
/// stages before it are written together with `report.txt`, and the error
/// is returned.
pub fn run(config: &PipelineConfig) -> Result<RunSummary, PipelineError> {
    let inputs = load_inputs(config)?;
    let (outputs, failure) = run_stages(&inputs, config);
    if let Some(PipelineError::Input(_)) = &failure {
        return Err(failure.expect("matched"));
    }
    let mut report = String::new();
    for o in &outputs {
        report.push_str(&o.summary);
        report.push('\n');
    }
    if let Some(e) = &failure {
        report.push_str(&format!("error: {e}\n"));
    }
    fs::create_dir_all(&config.out).map_err(|e| PipelineError::Output(format!("{}: {e}", config.out.display())))?;
    let mut written = Vec::new();
    let mut write = |name: &str, contents: &str| -> Result<(), PipelineError> {
        let path = config.out.join(name);
        fs::write(&path, contents).map_err(|e| PipelineError::Output(format!("{}: {e}", path.display())))?;
        log::debug!("wrote {}", path.display());
        written.push(path);
        Ok(())
    };
    for o in &outputs {
        for a in &o.artifacts {
            if config.formats.contains(&a.format) {
                write(&a.name, &a.contents)?;
            }
        }
    }
    if config.formats.contains(&OutputFormat::Text) {
        write("report.txt", &report)?;
    }
    match failure {
        Some(e) => Err(e),
        None => Ok(RunSummary { written, report }),
    }
}
