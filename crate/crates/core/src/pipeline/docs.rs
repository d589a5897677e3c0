//! Input documents for the pipeline.

use std::collections::{BTreeMap, BTreeSet};

use serde::Deserialize;

use crate::domain::{DStar, DomainObject, InterpretationMap};
use crate::metric::{MetricDoc, MetricTable};
use crate::topology::{generate_topology, verify_topology, DataFunction, DataRelation, FiniteTopology, GroundSet, SubsetMask};

/// A data set with its topology, labelled open sets, data functions and
/// relations, and an optional metric.
///
/// ```json
/// {
///   "elements": ["3", "7", "11", "23"],
///   "subbasis": [["3"], ["7"], ["11"], ["23"]],
///   "labels": {"X": ["3", "7", "11", "23"], "P3": ["3"]},
///   "relations": [{"name": "P", "arity": 1, "table": [{"args": ["P3"], "value": true}]}],
///   "metric": {"coords": [[3], [7], [11], [23]]},
///   "epsilon": 4
/// }
/// ```
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetDoc {
    pub elements: Vec<String>,
    #[serde(default)]
    pub opens: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub subbasis: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub labels: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub functions: Vec<FunctionDecl>,
    #[serde(default)]
    pub relations: Vec<RelationDecl>,
    #[serde(default)]
    pub metric: Option<MetricSpec>,
    #[serde(default)]
    pub epsilon: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricSpec {
    #[serde(default)]
    pub dist: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub coords: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum FunctionDecl {
    Builtin { builtin: String },
    Table { name: String, arity: usize, table: Vec<FunctionEntry> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionEntry {
    pub args: Vec<String>,
    pub value: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RelationDecl {
    Builtin { builtin: String },
    Table { name: String, arity: usize, table: Vec<RelationEntry> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationEntry {
    pub args: Vec<String>,
    pub value: bool,
}

/// A semantic problem in a loaded document, with the path of the offending
/// entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocError {
    pub path: String,
    pub message: String,
}

impl std::fmt::Display for DocError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

fn err(path: impl Into<String>, message: impl ToString) -> DocError {
    DocError { path: path.into(), message: message.to_string() }
}

/// The data space described by a dataset document.
pub struct DataSpace {
    pub ground: GroundSet,
    pub topology: FiniteTopology,
    pub dstar: DStar,
    pub metric: Option<MetricTable>,
}

impl DatasetDoc {
    /// Builds the topology and D*. An `opens` family that breaks an axiom
    /// is returned as `Ok(Err(report lines))` so callers can tell it apart
    /// from malformed input.
    pub fn build(&self) -> Result<Result<DataSpace, Vec<String>>, DocError> {
        let ground = GroundSet::new(self.elements.iter().cloned()).map_err(|e| err("elements", e))?;
        let masks = |sets: &[Vec<String>], field: &str| -> Result<Vec<SubsetMask>, DocError> {
            sets.iter().enumerate().map(|(i, s)| ground.mask_of(s).map_err(|e| err(format!("{field}[{i}]"), e))).collect()
        };
        let topology = match (&self.opens, &self.subbasis) {
            (Some(opens), None) => {
                let family = masks(opens, "opens")?;
                let report = verify_topology(&ground, &family).map_err(|e| err("opens", e))?;
                if !report.valid {
                    return Ok(Err(report.violations.iter().map(|v| v.describe(&ground)).collect()));
                }
                FiniteTopology::new(ground.clone(), family).map_err(|e| err("opens", e))?
            }
            (None, Some(sub)) => generate_topology(&ground, &masks(sub, "subbasis")?).map_err(|e| err("subbasis", e))?,
            (None, None) => FiniteTopology::discrete(ground.clone()),
            (Some(_), Some(_)) => return Err(err("opens", "give either `opens` or `subbasis`, not both")),
        };
        let mut dstar = DStar::new(topology.clone());
        let mut label_masks = BTreeMap::new();
        for (label, members) in &self.labels {
            let path = format!("labels.{label}");
            let mask = ground.mask_of(members).map_err(|e| err(&path, e))?;
            dstar.label(label, mask).map_err(|e| err(&path, e))?;
            label_masks.insert(label.as_str(), mask);
        }
        let lookup = |label: &str, path: &str| label_masks.get(label).copied().ok_or_else(|| err(path, format!("unknown label `{label}`")));
        for (i, f) in self.functions.iter().enumerate() {
            let path = format!("functions[{i}]");
            dstar.functions.push(match f {
                FunctionDecl::Builtin { builtin } => match builtin.as_str() {
                    "intersection" => DataFunction::Intersection,
                    "union" => DataFunction::Union,
                    other => return Err(err(path, format!("unknown built-in function `{other}`"))),
                },
                FunctionDecl::Table { name, arity, table } => {
                    let mut entries = BTreeMap::new();
                    for (j, e) in table.iter().enumerate() {
                        let p = format!("{path}.table[{j}]");
                        if e.args.len() != *arity {
                            return Err(err(p, format!("expected {arity} arguments")));
                        }
                        let args = e.args.iter().map(|a| lookup(a, &p)).collect::<Result<Vec<_>, _>>()?;
                        entries.insert(args, lookup(&e.value, &p)?);
                    }
                    DataFunction::table(name.clone(), *arity, entries)
                }
            });
        }
        for (i, r) in self.relations.iter().enumerate() {
            let path = format!("relations[{i}]");
            dstar.relations.push(match r {
                RelationDecl::Builtin { builtin } => match builtin.as_str() {
                    "subset" => DataRelation::Subset,
                    "equal" => DataRelation::Equal,
                    other => return Err(err(path, format!("unknown built-in relation `{other}`"))),
                },
                RelationDecl::Table { name, arity, table } => {
                    let mut entries = BTreeMap::new();
                    for (j, e) in table.iter().enumerate() {
                        let p = format!("{path}.table[{j}]");
                        if e.args.len() != *arity {
                            return Err(err(p, format!("expected {arity} arguments")));
                        }
                        let args = e.args.iter().map(|a| lookup(a, &p)).collect::<Result<Vec<_>, _>>()?;
                        entries.insert(args, e.value);
                    }
                    DataRelation::table(name.clone(), *arity, entries)
                }
            });
        }
        let metric = match &self.metric {
            None => None,
            Some(m) => {
                let doc = MetricDoc { elements: self.elements.clone(), dist: m.dist.clone(), coords: m.coords.clone() };
                Some(doc.to_table().map_err(|e| err("metric", e))?)
            }
        };
        Ok(Ok(DataSpace { ground, topology, dstar, metric }))
    }
}

/// Requests to run a domain method on the images of labelled open sets.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodApplication {
    pub method: String,
    pub inputs: Vec<String>,
}

/// The interpretation map plus method applications.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterpretationDoc {
    #[serde(default)]
    pub objects: BTreeMap<String, BTreeSet<DomainObject>>,
    #[serde(default)]
    pub functions: BTreeMap<String, String>,
    #[serde(default)]
    pub relations: BTreeMap<String, String>,
    #[serde(default)]
    pub methods: Vec<MethodApplication>,
}

impl InterpretationDoc {
    pub fn map(&self) -> InterpretationMap {
        InterpretationMap { objects: self.objects.clone(), functions: self.functions.clone(), relations: self.relations.clone() }
    }
}
