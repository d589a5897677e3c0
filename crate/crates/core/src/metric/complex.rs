use std::collections::{BTreeSet, HashMap};
use std::fmt::Write;

use super::{similarity_graph, MetricError, MetricTable};

pub const DEFAULT_MAX_DIM: usize = 2;

/// Sorted vertex indices.
pub type Simplex = Vec<usize>;

/// A finite abstract simplicial complex, graded by dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertex_count: usize,
    by_dim: Vec<BTreeSet<Simplex>>,
}

impl SimplicialComplex {
    /// Downward closure of `simplices` together with every vertex
    /// `0..vertex_count`.
    pub fn from_simplices<I, S>(vertex_count: usize, simplices: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<Vec<usize>>,
    {
        let mut c = Self { vertex_count, by_dim: vec![(0..vertex_count).map(|v| vec![v]).collect()] };
        for s in simplices {
            let mut s: Vec<usize> = s.into();
            s.sort_unstable();
            s.dedup();
            c.insert_closed(s);
        }
        c
    }

    fn insert_closed(&mut self, s: Simplex) {
        if s.is_empty() {
            return;
        }
        let k = s.len() - 1;
        while self.by_dim.len() <= k {
            self.by_dim.push(BTreeSet::new());
        }
        if self.by_dim[k].contains(&s) {
            return;
        }
        if k > 0 {
            for face in faces(&s) {
                self.insert_closed(face);
            }
        } else if s[0] >= self.vertex_count {
            self.vertex_count = s[0] + 1;
        }
        self.by_dim[k].insert(s);
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Highest dimension present.
    pub fn dim(&self) -> usize {
        self.by_dim.iter().rposition(|s| !s.is_empty()).unwrap_or(0)
    }

    pub fn count(&self, k: usize) -> usize {
        self.by_dim.get(k).map_or(0, BTreeSet::len)
    }

    pub fn simplices(&self, k: usize) -> impl Iterator<Item = &Simplex> {
        self.by_dim.get(k).into_iter().flatten()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Simplex> {
        self.by_dim.iter().flatten()
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        !s.is_empty() && self.by_dim.get(s.len() - 1).is_some_and(|set| set.contains(s))
    }

    pub fn is_downward_closed(&self) -> bool {
        (0..self.vertex_count).all(|v| self.contains(&[v])) && self.iter().filter(|s| s.len() > 1).all(|s| faces(s).iter().all(|f| self.contains(f)))
    }

    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.iter().all(|s| other.contains(s))
    }

    /// One simplex per line, vertices comma-separated; sorted by dimension,
    /// then lexicographically.
    pub fn export_text(&self) -> String {
        let mut out = String::new();
        for s in self.iter() {
            let parts: Vec<String> = s.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "{}", parts.join(","));
        }
        out
    }
}

/// Codimension-one faces.
fn faces(s: &[usize]) -> Vec<Simplex> {
    (0..s.len()).map(|skip| s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect()).collect()
}

/// Vietoris–Rips complex: a vertex set of size at most `max_dim + 1` is a
/// simplex iff all its pairwise distances are `≤ ε`.
pub fn rips_complex(m: &MetricTable, epsilon: f64, max_dim: usize) -> Result<SimplicialComplex, MetricError> {
    let graph = similarity_graph(m, epsilon)?;
    let n = m.len();
    let mut by_dim: Vec<BTreeSet<Simplex>> = vec![(0..n).map(|v| vec![v]).collect()];
    for k in 1..=max_dim {
        let next: BTreeSet<Simplex> = by_dim[k - 1]
            .iter()
            .flat_map(|s| {
                let last = *s.last().expect("simplices are nonempty");
                let graph = &graph;
                (last + 1..n).filter(move |&v| s.iter().all(|&u| graph.are_similar(u, v))).map(move |v| {
                    let mut t = s.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
        if next.is_empty() {
            break;
        }
        by_dim.push(next);
    }
    Ok(SimplicialComplex { vertex_count: n, by_dim })
}

/// Rank over GF(2) of the boundary map from `k`-simplices to
/// `(k-1)`-simplices.
fn boundary_rank(c: &SimplicialComplex, k: usize) -> usize {
    if k == 0 || c.count(k) == 0 {
        return 0;
    }
    let rows: HashMap<&Simplex, usize> = c.simplices(k - 1).enumerate().map(|(i, s)| (s, i)).collect();
    let limbs = rows.len().div_ceil(64);
    let mut pivots: HashMap<usize, Vec<u64>> = HashMap::new();
    for s in c.simplices(k) {
        let mut col = vec![0u64; limbs];
        for f in faces(s) {
            let r = rows[&f];
            col[r / 64] ^= 1 << (r % 64);
        }
        while let Some(low) = highest_bit(&col) {
            match pivots.get(&low) {
                Some(p) => col.iter_mut().zip(p).for_each(|(a, b)| *a ^= b),
                None => {
                    pivots.insert(low, col);
                    break;
                }
            }
        }
    }
    pivots.len()
}

fn highest_bit(col: &[u64]) -> Option<usize> {
    col.iter().enumerate().rev().find(|(_, &w)| w != 0).map(|(i, &w)| i * 64 + 63 - w.leading_zeros() as usize)
}

/// `β_k = dim ker ∂_k − rank ∂_{k+1}` over GF(2), for `k = 0..=up_to_dim`.
pub fn betti_numbers(c: &SimplicialComplex, up_to_dim: usize) -> Vec<usize> {
    let ranks: Vec<usize> = (0..=up_to_dim + 1).map(|k| boundary_rank(c, k)).collect();
    (0..=up_to_dim).map(|k| c.count(k) - ranks[k] - ranks[k + 1]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::tests::line;

    #[test]
    fn close_points_fill_a_triangle() {
        let m = line(&[0.0, 0.5, 1.0]);
        let c = rips_complex(&m, 1.0, 2).unwrap();
        assert_eq!((c.count(0), c.count(1), c.count(2)), (3, 3, 1));
        let c1 = rips_complex(&m, 1.0, 1).unwrap();
        assert_eq!((c1.count(1), c1.count(2)), (3, 0));
        assert!(c.is_downward_closed());
    }

    #[test]
    fn line_example_complex() {
        let m = line(&[0.0, 1.0, 2.0, 10.0, 11.0]);
        let c = rips_complex(&m, 1.5, 2).unwrap();
        assert_eq!(c.export_text(), "0\n1\n2\n3\n4\n0,1\n1,2\n3,4\n");
        assert_eq!(betti_numbers(&c, 1), vec![2, 0]);
    }

    #[test]
    fn triangles() {
        let hollow = SimplicialComplex::from_simplices(3, [vec![0, 1], vec![1, 2], vec![0, 2]]);
        assert_eq!(betti_numbers(&hollow, 1), vec![1, 1]);
        let filled = SimplicialComplex::from_simplices(3, [vec![0, 1, 2]]);
        assert_eq!(filled.count(1), 3);
        assert_eq!(betti_numbers(&filled, 2), vec![1, 0, 0]);
    }

    #[test]
    fn hollow_tetrahedron_has_a_void() {
        let shell = SimplicialComplex::from_simplices(4, [vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]);
        assert_eq!(betti_numbers(&shell, 2), vec![1, 0, 1]);
    }
}
