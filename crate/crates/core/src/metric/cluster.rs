use std::collections::BTreeSet;

use super::{check_epsilon, MetricError, MetricTable};
use crate::topology::{GroundSet, SubsetMask};

/// Pairs of distinct points at distance at most ε.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityGraph {
    pub ground: GroundSet,
    pub epsilon: f64,
    /// Unordered pairs stored as `(i, j)` with `i < j`.
    pub edges: BTreeSet<(usize, usize)>,
}

impl SimilarityGraph {
    pub fn are_similar(&self, i: usize, j: usize) -> bool {
        i == j || self.edges.contains(&(i.min(j), i.max(j)))
    }
}

/// ε-similarity with an inclusive, tolerance-free `≤` comparison.
pub fn similarity_graph(m: &MetricTable, epsilon: f64) -> Result<SimilarityGraph, MetricError> {
    check_epsilon(epsilon)?;
    let n = m.len();
    let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| m.d(i, j) <= epsilon).collect();
    Ok(SimilarityGraph { ground: m.ground().clone(), epsilon, edges })
}

/// Disjoint-set forest with path compression and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(len: usize) -> Self {
        Self { parent: (0..len).collect(), size: vec![1; len] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    /// Returns false when `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] { (ra, rb) } else { (rb, ra) };
        self.parent[small] = big;
        self.size[big] += self.size[small];
        true
    }
}

/// Clusters of a ground set, ordered by smallest member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterPartition {
    pub clusters: Vec<SubsetMask>,
}

impl ClusterPartition {
    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    /// Index of the cluster containing point `i`.
    pub fn cluster_of(&self, i: usize) -> Option<usize> {
        self.clusters.iter().position(|c| c.contains(i))
    }

    /// Pairwise disjoint, nonempty, and covering `width` points.
    pub fn is_partition(&self, width: usize) -> bool {
        let mut seen = SubsetMask::empty(width);
        for c in &self.clusters {
            if c.is_empty() || !c.is_disjoint(seen) {
                return false;
            }
            seen = seen.union(*c);
        }
        seen.is_full()
    }

    /// Every cluster of `self` lies inside a cluster of `coarser`.
    pub fn refines(&self, coarser: &ClusterPartition) -> bool {
        self.clusters.iter().all(|c| coarser.clusters.iter().any(|d| c.is_subset(*d)))
    }

    pub fn named(&self, ground: &GroundSet) -> Vec<Vec<String>> {
        self.clusters.iter().map(|c| ground.names_of(*c).into_iter().map(String::from).collect()).collect()
    }
}

/// Connected components of the ε-similarity graph.
///
/// Chain-reachability inside a component is clause (a) of the cluster
/// definition and the absence of edges between components is clause (b).
pub fn clusters(m: &MetricTable, epsilon: f64) -> Result<ClusterPartition, MetricError> {
    let graph = similarity_graph(m, epsilon)?;
    let n = m.len();
    let mut uf = UnionFind::new(n);
    for &(i, j) in &graph.edges {
        uf.union(i, j);
    }
    let mut by_root: Vec<Option<usize>> = vec![None; n];
    let mut clusters: Vec<SubsetMask> = Vec::new();
    for i in 0..n {
        let root = uf.find(i);
        match by_root[root] {
            Some(k) => clusters[k] = clusters[k].with(i),
            None => {
                by_root[root] = Some(clusters.len());
                clusters.push(SubsetMask::singleton(n, i));
            }
        }
    }
    Ok(ClusterPartition { clusters })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::tests::line;

    #[test]
    fn line_example_graph() {
        let m = line(&[0.0, 1.0, 2.0, 10.0, 11.0]);
        let g = similarity_graph(&m, 1.5).unwrap();
        assert_eq!(g.edges.into_iter().collect::<Vec<_>>(), vec![(0, 1), (1, 2), (3, 4)]);
        assert!(similarity_graph(&m, 0.0).unwrap().edges.is_empty());
        assert_eq!(similarity_graph(&m, m.diameter()).unwrap().edges.len(), 10);
        assert!(matches!(similarity_graph(&m, -1.0), Err(MetricError::Parameter(_))));
    }

    #[test]
    fn boundary_is_inclusive() {
        let m = line(&[0.0, 1.0]);
        assert_eq!(similarity_graph(&m, 1.0).unwrap().edges.len(), 1);
    }

    #[test]
    fn line_example_clusters() {
        let m = line(&[0.0, 1.0, 2.0, 10.0, 11.0]);
        let c = clusters(&m, 1.5).unwrap();
        assert_eq!(c.named(m.ground()), vec![vec!["0", "1", "2"], vec!["10", "11"]]);
        assert!(c.is_partition(5));
        let singles = clusters(&m, 0.0).unwrap();
        assert_eq!(singles.len(), 5);
        assert!(singles.refines(&c));
        let whole = clusters(&m, m.diameter()).unwrap();
        assert_eq!(whole.clusters, vec![SubsetMask::full(5)]);
    }
}
