//! Decomposition of a derivation DAG into complete sections.

use std::collections::BTreeSet;

use serde::Serialize;

use super::DerivationDag;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SectionForm {
    /// A single object with no derivation in or out.
    Isolated,
    /// Members in derivation order, each derived from the previous one.
    Chain,
    /// A weakly connected component, when edges are read without direction.
    Component,
}

impl std::fmt::Display for SectionForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Isolated => "isolated",
            Self::Chain => "chain",
            Self::Component => "component",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct KnowledgeSection {
    pub members: Vec<String>,
    pub form: SectionForm,
}

/// Size limit for the exhaustive uniqueness check.
pub const UNIQUENESS_LIMIT: usize = 7;

/// Isolated objects first become singleton sections; every remaining
/// component is then split by repeatedly removing a longest chain. Among
/// chains of equal length the lexicographically least id sequence wins.
/// Sections are returned sorted.
pub fn decompose_sections(dag: &DerivationDag) -> Vec<KnowledgeSection> {
    let mut out = Vec::new();
    for comp in dag.components() {
        if comp.len() == 1 && dag.is_isolated(comp[0]) {
            out.push(KnowledgeSection { members: vec![dag.id(comp[0]).to_string()], form: SectionForm::Isolated });
            continue;
        }
        let mut remaining: BTreeSet<usize> = comp.into_iter().collect();
        while !remaining.is_empty() {
            let chain = longest_chain(dag, &remaining);
            for v in &chain {
                remaining.remove(v);
            }
            out.push(KnowledgeSection { members: chain.iter().map(|&v| dag.id(v).to_string()).collect(), form: SectionForm::Chain });
        }
    }
    out.sort();
    out
}

/// The lexicographically least among the longest chains inside `nodes`.
///
/// A longest chain is saturated, so consecutive members are immediate in the
/// order restricted to `nodes`: it is a path of that restriction's reduction.
pub(crate) fn longest_chain(dag: &DerivationDag, nodes: &BTreeSet<usize>) -> Vec<usize> {
    let order: Vec<usize> = topological(dag, nodes);
    let n = dag.len();
    let mut length = vec![0usize; n];
    let mut next: Vec<Option<usize>> = vec![None; n];
    for &v in order.iter().rev() {
        length[v] = 1;
        for &w in nodes {
            if dag.reaches(v, w) && (length[w] + 1 > length[v] || (length[w] + 1 == length[v] && next[v].is_some_and(|x| w < x))) {
                length[v] = length[w] + 1;
                next[v] = Some(w);
            }
        }
    }
    let best = nodes.iter().map(|&v| length[v]).max().unwrap_or(0);
    let Some(mut v) = nodes.iter().copied().find(|&v| length[v] == best) else {
        return vec![];
    };
    let mut chain = vec![v];
    while let Some(w) = next[v] {
        chain.push(w);
        v = w;
    }
    chain
}

fn topological(dag: &DerivationDag, nodes: &BTreeSet<usize>) -> Vec<usize> {
    let mut order: Vec<usize> = nodes.iter().copied().collect();
    // Fewer descendants means later; reachability is a strict order.
    order.sort_by_key(|&v| std::cmp::Reverse(nodes.iter().filter(|&&w| dag.reaches(v, w)).count()));
    order
}

/// Weakly connected components as sections, for the undirected reading.
pub fn decompose_components(dag: &DerivationDag) -> Vec<KnowledgeSection> {
    let mut out: Vec<KnowledgeSection> = dag
        .components()
        .into_iter()
        .map(|c| KnowledgeSection {
            form: if c.len() == 1 && dag.is_isolated(c[0]) { SectionForm::Isolated } else { SectionForm::Component },
            members: c.into_iter().map(|v| dag.id(v).to_string()).collect(),
        })
        .collect();
    out.sort();
    out
}

/// Number of distinct decompositions the longest-chain procedure can
/// produce under all tie choices, for DAGs of at most `UNIQUENESS_LIMIT`
/// nodes.
pub fn decomposition_count(dag: &DerivationDag) -> Option<usize> {
    if dag.len() > UNIQUENESS_LIMIT {
        return None;
    }
    let mut results: BTreeSet<Vec<Vec<usize>>> = BTreeSet::new();
    let remaining: BTreeSet<usize> = (0..dag.len()).filter(|&v| !dag.is_isolated(v)).collect();
    all_greedy(dag, remaining, vec![], &mut results);
    Some(results.len())
}

/// Uniqueness of the decomposition of one weakly connected component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniquenessNote {
    pub component: Vec<String>,
    /// Distinct decompositions; `None` above [`UNIQUENESS_LIMIT`] nodes.
    pub decompositions: Option<usize>,
}

/// One note per component with more than one node.
pub fn uniqueness_notes(dag: &DerivationDag) -> Vec<UniquenessNote> {
    dag.components()
        .into_iter()
        .filter(|c| c.len() > 1)
        .map(|c| {
            let ids: Vec<&str> = c.iter().map(|&v| dag.id(v)).collect();
            let edges: Vec<(&str, &str)> =
                c.iter().flat_map(|&v| c.iter().filter(move |&&w| dag.reaches(v, w)).map(move |&w| (dag.id(v), dag.id(w)))).collect();
            let sub = DerivationDag::new(ids.iter().copied(), edges).expect("a sub-order of an acyclic order");
            UniquenessNote { component: ids.iter().map(|s| s.to_string()).collect(), decompositions: decomposition_count(&sub) }
        })
        .collect()
}

fn all_greedy(dag: &DerivationDag, remaining: BTreeSet<usize>, taken: Vec<Vec<usize>>, out: &mut BTreeSet<Vec<Vec<usize>>>) {
    if remaining.is_empty() {
        let mut t = taken;
        t.sort();
        out.insert(t);
        return;
    }
    let best = longest_chain(dag, &remaining).len();
    let mut chains = Vec::new();
    extend_chains(dag, &remaining, &mut vec![], best, &mut chains);
    for c in chains {
        let rest: BTreeSet<usize> = remaining.iter().copied().filter(|v| !c.contains(v)).collect();
        let mut t = taken.clone();
        t.push(c);
        all_greedy(dag, rest, t, out);
    }
}

fn extend_chains(dag: &DerivationDag, nodes: &BTreeSet<usize>, prefix: &mut Vec<usize>, len: usize, out: &mut Vec<Vec<usize>>) {
    if prefix.len() == len {
        out.push(prefix.clone());
        return;
    }
    for &w in nodes {
        if prefix.last().is_none_or(|&v| dag.reaches(v, w)) {
            prefix.push(w);
            extend_chains(dag, nodes, prefix, len, out);
            prefix.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dag(nodes: &[&str], edges: &[(&str, &str)]) -> DerivationDag {
        DerivationDag::new(nodes.iter().copied(), edges.iter().copied()).unwrap()
    }

    fn members(s: &[KnowledgeSection]) -> Vec<Vec<&str>> {
        s.iter().map(|k| k.members.iter().map(String::as_str).collect()).collect()
    }

    #[test]
    fn chain_plus_isolated() {
        let d = dag(&["a", "b", "c", "d"], &[("a", "b"), ("b", "c")]);
        let s = decompose_sections(&d);
        assert_eq!(members(&s), vec![vec!["a", "b", "c"], vec!["d"]]);
        assert_eq!(s[1].form, SectionForm::Isolated);
        assert_eq!(decomposition_count(&d), Some(1));
    }

    #[test]
    fn two_disjoint_chains() {
        let d = dag(&["a", "b", "x", "y"], &[("a", "b"), ("x", "y")]);
        assert_eq!(members(&decompose_sections(&d)), vec![vec!["a", "b"], vec!["x", "y"]]);
    }

    #[test]
    fn diamond_tie_break() {
        let d = dag(&["a", "b", "c", "d"], &[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")]);
        let s = decompose_sections(&d);
        assert_eq!(members(&s), vec![vec!["a", "b", "d"], vec!["c"]]);
        assert_eq!(s[1].form, SectionForm::Chain);
        assert_eq!(decomposition_count(&d), Some(2));
        assert_eq!(uniqueness_notes(&d)[0].decompositions, Some(2));
        let comps = decompose_components(&d);
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].form, SectionForm::Component);
    }

    #[test]
    fn transitive_edges_do_not_shorten_chains() {
        let d = dag(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("a", "c")]);
        assert_eq!(members(&decompose_sections(&d)), vec![vec!["a", "b", "c"]]);
    }
}
