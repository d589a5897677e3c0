//! Derivation DAGs: knowledge-object ids with the ↠ relation.

use std::collections::{BTreeMap, BTreeSet};

use super::KnowledgeError;
use crate::topology::{alexandrov_topology, FiniteTopology, GroundSet, Preorder, TopologyError};

/// Nodes are kept in id order, so node indices compare like ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationDag {
    ids: Vec<String>,
    index: BTreeMap<String, usize>,
    succ: Vec<BTreeSet<usize>>,
    pred: Vec<BTreeSet<usize>>,
    reach: Vec<Vec<bool>>,
}

impl DerivationDag {
    /// Builds the DAG; `(a, b)` means `a ↠ b`. Reflexive pairs are implicit
    /// and ignored. A directed cycle is an order violation.
    pub fn new<N, E, S>(nodes: N, edges: E) -> Result<Self, KnowledgeError>
    where
        N: IntoIterator<Item = S>,
        E: IntoIterator<Item = (S, S)>,
        S: AsRef<str>,
    {
        let ids: Vec<String> = nodes.into_iter().map(|s| s.as_ref().to_string()).collect::<BTreeSet<_>>().into_iter().collect();
        let index: BTreeMap<String, usize> = ids.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let n = ids.len();
        let mut succ = vec![BTreeSet::new(); n];
        let mut pred = vec![BTreeSet::new(); n];
        for (a, b) in edges {
            let lookup = |s: &str| index.get(s).copied().ok_or_else(|| KnowledgeError::Unknown(s.to_string()));
            let (i, j) = (lookup(a.as_ref())?, lookup(b.as_ref())?);
            if i != j {
                succ[i].insert(j);
                pred[j].insert(i);
            }
        }
        let order = topological_order(&succ).map_err(|cycle| {
            let names: Vec<&str> = cycle.iter().map(|&i| ids[i].as_str()).collect();
            KnowledgeError::Order(format!("derivation cycle {}", names.join(" ↠ ")))
        })?;
        let mut reach = vec![vec![false; n]; n];
        for &v in order.iter().rev() {
            for &w in &succ[v] {
                reach[v][w] = true;
                let below = reach[w].clone();
                reach[v].iter_mut().zip(below).for_each(|(r, b)| *r |= b);
            }
        }
        Ok(Self { ids, index, succ, pred, reach })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    /// Direct edges in index order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ.iter().enumerate().flat_map(|(i, s)| s.iter().map(move |&j| (i, j)))
    }

    pub fn successors(&self, i: usize) -> &BTreeSet<usize> {
        &self.succ[i]
    }

    pub fn predecessors(&self, i: usize) -> &BTreeSet<usize> {
        &self.pred[i]
    }

    /// `i ↠ j` through one or more edges.
    pub fn reaches(&self, i: usize, j: usize) -> bool {
        self.reach[i][j]
    }

    /// `i ↠ j` in the reflexive-transitive sense.
    pub fn derives(&self, i: usize, j: usize) -> bool {
        i == j || self.reach[i][j]
    }

    /// No edge into or out of `i`.
    pub fn is_isolated(&self, i: usize) -> bool {
        self.succ[i].is_empty() && self.pred[i].is_empty()
    }

    /// Edges of the transitive reduction (immediate derivations).
    pub fn reduction_edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.reach[i][j] && !(0..n).any(|k| self.reach[i][k] && self.reach[k][j]) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Weakly connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![start];
            let mut comp = vec![];
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &w in self.succ[v].iter().chain(&self.pred[v]) {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Reflexive reachability as a preorder on the ids.
    pub fn reachability_preorder(&self) -> Result<Preorder, TopologyError> {
        let ground = GroundSet::new(self.ids.iter().cloned())?;
        let leq: Vec<Vec<bool>> = (0..self.len()).map(|i| (0..self.len()).map(|j| self.derives(i, j)).collect()).collect();
        Preorder::from_matrix(ground, &leq)
    }
}

/// Kahn order, or the nodes of one cycle.
fn topological_order(succ: &[BTreeSet<usize>]) -> Result<Vec<usize>, Vec<usize>> {
    let n = succ.len();
    let mut indeg = vec![0usize; n];
    for s in succ {
        for &j in s {
            indeg[j] += 1;
        }
    }
    let mut ready: BTreeSet<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = ready.pop_first() {
        order.push(v);
        for &w in &succ[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                ready.insert(w);
            }
        }
    }
    if order.len() == n {
        return Ok(order);
    }
    // Walk forward inside the leftover nodes until a node repeats.
    let left: BTreeSet<usize> = (0..n).filter(|&i| indeg[i] > 0).collect();
    let mut path = vec![*left.first().expect("cycle exists")];
    loop {
        let v = *path.last().expect("nonempty");
        let w = *succ[v].iter().find(|w| left.contains(w)).expect("leftover nodes lie on or lead to a cycle");
        if let Some(pos) = path.iter().position(|&p| p == w) {
            let mut cycle = path[pos..].to_vec();
            cycle.push(w);
            return Err(cycle);
        }
        path.push(w);
    }
}

/// Opens are the upper sets of the reachability order: if `a` is open-member
/// and `a ↠ b`, then `b` is too.
pub fn upper_set_topology(dag: &DerivationDag) -> Result<FiniteTopology, TopologyError> {
    Ok(alexandrov_topology(&dag.reachability_preorder()?))
}
