//! Metrics on a finite ground set, ε-similarity, clusters, and the
//! Vietoris–Rips complex with its GF(2) Betti numbers.

mod cluster;
mod complex;

pub use cluster::{clusters, similarity_graph, ClusterPartition, SimilarityGraph, UnionFind};
pub use complex::{betti_numbers, rips_complex, Simplex, SimplicialComplex, DEFAULT_MAX_DIM};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::topology::{generate_topology, FiniteTopology, GroundSet, SubsetMask, TopologyError};

/// Absolute slack allowed in the triangle inequality.
pub const TRIANGLE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("malformed input: {0}")]
    Dimension(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("not a metric: {0}")]
    Invalid(String),
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

/// Pairwise distances over a ground set, stored row-major.
///
/// Construction only checks shape; use [`verify_metric`] or
/// [`MetricTable::validated`] for the metric axioms.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricTable {
    ground: GroundSet,
    dist: Vec<f64>,
}

impl MetricTable {
    pub fn from_rows(ground: GroundSet, rows: &[Vec<f64>]) -> Result<Self, MetricError> {
        let n = ground.len();
        if rows.len() != n {
            return Err(MetricError::Dimension(format!("{} rows for {n} elements", rows.len())));
        }
        let mut dist = Vec::with_capacity(n * n);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(MetricError::Dimension(format!("row {i} has {} entries, expected {n}", r.len())));
            }
            dist.extend_from_slice(r);
        }
        Ok(Self { ground, dist })
    }

    /// Euclidean distances between coordinate vectors.
    pub fn from_coords(ground: GroundSet, coords: &[Vec<f64>]) -> Result<Self, MetricError> {
        let n = ground.len();
        if coords.len() != n {
            return Err(MetricError::Dimension(format!("{} points for {n} elements", coords.len())));
        }
        let dim = coords[0].len();
        if let Some((i, c)) = coords.iter().enumerate().find(|(_, c)| c.len() != dim) {
            return Err(MetricError::Dimension(format!("point {i} has dimension {}, expected {dim}", c.len())));
        }
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let d2: f64 = coords[i].iter().zip(&coords[j]).map(|(a, b)| (a - b) * (a - b)).sum();
                dist[i * n + j] = d2.sqrt();
            }
        }
        Ok(Self { ground, dist })
    }

    /// `d(x, y) = 1` for `x ≠ y`.
    pub fn discrete(ground: GroundSet) -> Self {
        let n = ground.len();
        let dist = (0..n * n).map(|k| if k / n == k % n { 0.0 } else { 1.0 }).collect();
        Self { ground, dist }
    }

    /// Builds from rows and rejects tables that break an axiom.
    pub fn validated(ground: GroundSet, rows: &[Vec<f64>]) -> Result<Self, MetricError> {
        let m = Self::from_rows(ground, rows)?;
        let report = verify_metric(&m);
        if let Some(v) = report.violations.first() {
            return Err(MetricError::Invalid(v.describe(&m.ground)));
        }
        Ok(m)
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn len(&self) -> usize {
        self.ground.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ground.is_empty()
    }

    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.len() + j]
    }

    pub fn diameter(&self) -> f64 {
        self.dist.iter().copied().fold(0.0, f64::max)
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.dist.chunks(self.len()).map(<[f64]>::to_vec).collect()
    }

    /// Topology generated by the open balls `{y : d(x, y) < r}`.
    pub fn induced_topology(&self) -> FiniteTopology {
        let n = self.len();
        let mut balls = Vec::new();
        for x in 0..n {
            for r in (0..n).map(|y| self.d(x, y)) {
                balls.push(SubsetMask::from_indices(n, (0..n).filter(|&y| self.d(x, y) < r)));
            }
        }
        generate_topology(&self.ground, &balls).expect("balls share the ground width")
    }
}

/// A failed metric axiom with its witness indices.
#[derive(Debug, Clone, PartialEq)]
pub enum MetricViolation {
    NotFinite {
        x: usize,
        y: usize,
    },
    Negative {
        x: usize,
        y: usize,
    },
    /// Clause (2), forward direction.
    NonzeroSelf {
        x: usize,
    },
    /// Clause (2), backward direction.
    ZeroBetweenDistinct {
        x: usize,
        y: usize,
    },
    Asymmetric {
        x: usize,
        y: usize,
    },
    Triangle {
        x: usize,
        y: usize,
        z: usize,
    },
}

impl MetricViolation {
    pub fn clause(&self) -> u8 {
        match self {
            Self::NotFinite { .. } | Self::Negative { .. } => 1,
            Self::NonzeroSelf { .. } | Self::ZeroBetweenDistinct { .. } => 2,
            Self::Asymmetric { .. } => 3,
            Self::Triangle { .. } => 4,
        }
    }

    pub fn describe(&self, g: &GroundSet) -> String {
        match *self {
            Self::NotFinite { x, y } => format!("clause (1): d({}, {}) is not a finite number", g.name(x), g.name(y)),
            Self::Negative { x, y } => format!("clause (1): d({}, {}) < 0", g.name(x), g.name(y)),
            Self::NonzeroSelf { x } => format!("clause (2): d({0}, {0}) ≠ 0", g.name(x)),
            Self::ZeroBetweenDistinct { x, y } => format!("clause (2): d({}, {}) = 0 for distinct points", g.name(x), g.name(y)),
            Self::Asymmetric { x, y } => format!("clause (3): d({0}, {1}) ≠ d({1}, {0})", g.name(x), g.name(y)),
            Self::Triangle { x, y, z } => format!("clause (4): d({0}, {2}) > d({0}, {1}) + d({1}, {2})", g.name(x), g.name(y), g.name(z)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    pub valid: bool,
    pub violations: Vec<MetricViolation>,
}

/// Checks all four metric axioms; the triangle inequality allows
/// [`TRIANGLE_TOLERANCE`] of slack.
pub fn verify_metric(m: &MetricTable) -> MetricReport {
    let n = m.len();
    let mut violations = Vec::new();
    for x in 0..n {
        for y in 0..n {
            let d = m.d(x, y);
            if !d.is_finite() {
                violations.push(MetricViolation::NotFinite { x, y });
            } else if d < 0.0 {
                violations.push(MetricViolation::Negative { x, y });
            }
        }
    }
    if !violations.is_empty() {
        return MetricReport { valid: false, violations };
    }
    for x in 0..n {
        if m.d(x, x) != 0.0 {
            violations.push(MetricViolation::NonzeroSelf { x });
        }
        for y in x + 1..n {
            if m.d(x, y) == 0.0 || m.d(y, x) == 0.0 {
                violations.push(MetricViolation::ZeroBetweenDistinct { x, y });
            }
            if m.d(x, y) != m.d(y, x) {
                violations.push(MetricViolation::Asymmetric { x, y });
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if m.d(x, z) > m.d(x, y) + m.d(y, z) + TRIANGLE_TOLERANCE {
                    violations.push(MetricViolation::Triangle { x, y, z });
                }
            }
        }
    }
    MetricReport { valid: violations.is_empty(), violations }
}

/// Metric input: `elements` plus either a full `dist` matrix or `coords`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricDoc {
    pub elements: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dist: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<Vec<f64>>>,
}

impl MetricDoc {
    pub fn to_table(&self) -> Result<MetricTable, MetricError> {
        let ground = GroundSet::new(self.elements.iter().cloned())?;
        match (&self.dist, &self.coords) {
            (Some(d), None) => MetricTable::from_rows(ground, d),
            (None, Some(c)) => MetricTable::from_coords(ground, c),
            _ => Err(MetricError::Dimension("exactly one of `dist` and `coords` is required".into())),
        }
    }
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<(), MetricError> {
    if epsilon.is_nan() || epsilon < 0.0 {
        return Err(MetricError::Parameter(format!("ε must be nonnegative, got {epsilon}")));
    }
    Ok(())
}
