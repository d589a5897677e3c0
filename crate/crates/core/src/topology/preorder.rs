use std::collections::BTreeSet;

use super::{closure, FiniteTopology, GroundSet, SubsetMask, TopologyError};

/// A reflexive, transitive relation on a ground set.
///
/// Row `i` holds the principal up-set `{j : i ⪯ j}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preorder {
    ground: GroundSet,
    rows: Vec<SubsetMask>,
}

impl Preorder {
    /// Builds a preorder from an explicit boolean matrix and checks both laws.
    pub fn from_matrix(ground: GroundSet, leq: &[Vec<bool>]) -> Result<Self, TopologyError> {
        let n = ground.len();
        if leq.len() != n || leq.iter().any(|r| r.len() != n) {
            return Err(TopologyError::NotAPreorder(format!("matrix is not {n}×{n}")));
        }
        let rows = leq.iter().map(|r| SubsetMask::from_indices(n, r.iter().enumerate().filter(|(_, &b)| b).map(|(j, _)| j))).collect();
        let p = Self { ground, rows };
        p.check()?;
        Ok(p)
    }

    /// Builds a preorder from related pairs, which must already be reflexive
    /// and transitive.
    pub fn from_pairs(ground: GroundSet, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, TopologyError> {
        let n = ground.len();
        let mut rows = vec![SubsetMask::empty(n); n];
        for (i, j) in pairs {
            if i >= n || j >= n {
                return Err(TopologyError::NotAPreorder(format!("pair ({i}, {j}) out of range")));
            }
            rows[i] = rows[i].with(j);
        }
        let p = Self { ground, rows };
        p.check()?;
        Ok(p)
    }

    /// Reflexive-transitive closure of the given pairs.
    pub fn generated_by(ground: GroundSet, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, TopologyError> {
        let n = ground.len();
        let mut rows: Vec<SubsetMask> = (0..n).map(|i| SubsetMask::singleton(n, i)).collect();
        for (i, j) in pairs {
            if i >= n || j >= n {
                return Err(TopologyError::NotAPreorder(format!("pair ({i}, {j}) out of range")));
            }
            rows[i] = rows[i].with(j);
        }
        // Warshall over bit rows.
        for k in 0..n {
            for i in 0..n {
                if rows[i].contains(k) {
                    rows[i] = rows[i].union(rows[k]);
                }
            }
        }
        Ok(Self { ground, rows })
    }

    pub fn equality(ground: GroundSet) -> Self {
        let n = ground.len();
        let rows = (0..n).map(|i| SubsetMask::singleton(n, i)).collect();
        Self { ground, rows }
    }

    pub fn total(ground: GroundSet) -> Self {
        let n = ground.len();
        Self { ground, rows: vec![SubsetMask::full(n); n] }
    }

    fn check(&self) -> Result<(), TopologyError> {
        for (i, row) in self.rows.iter().enumerate() {
            if !row.contains(i) {
                return Err(TopologyError::NotAPreorder(format!("not reflexive at `{}`", self.ground.name(i))));
            }
            for j in row.iter() {
                if !self.rows[j].is_subset(*row) {
                    let k = self.rows[j].difference(*row).first().unwrap_or(j);
                    return Err(TopologyError::NotAPreorder(format!(
                        "not transitive: `{}` ⪯ `{}` ⪯ `{}`",
                        self.ground.name(i),
                        self.ground.name(j),
                        self.ground.name(k)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.rows[i].contains(j)
    }

    /// `{j : i ⪯ j}`
    pub fn up_set(&self, i: usize) -> SubsetMask {
        self.rows[i]
    }

    /// `{j : j ⪯ i}`
    pub fn down_set(&self, i: usize) -> SubsetMask {
        let n = self.len();
        SubsetMask::from_indices(n, (0..n).filter(|&j| self.leq(j, i)))
    }

    pub fn is_upper_set(&self, s: SubsetMask) -> bool {
        s.iter().all(|i| self.rows[i].is_subset(s))
    }

    /// All related pairs `(i, j)` with `i ⪯ j`, row-major.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |j| (i, j)))
    }

    pub fn to_matrix(&self) -> Vec<Vec<bool>> {
        let n = self.len();
        (0..n).map(|i| (0..n).map(|j| self.leq(i, j)).collect()).collect()
    }
}

/// `x ⪯ y` iff `x` lies in the closure of `{y}`.
pub fn specialization_preorder(t: &FiniteTopology) -> Preorder {
    let ground = t.ground().clone();
    let n = ground.len();
    let mut rows = vec![SubsetMask::empty(n); n];
    for y in 0..n {
        for x in closure(t, SubsetMask::singleton(n, y)).iter() {
            rows[x] = rows[x].with(y);
        }
    }
    Preorder { ground, rows }
}

/// The topology whose opens are exactly the upper sets of `p`.
///
/// Upper sets are the unions of principal up-sets, so they are enumerated by
/// union-closing the rows; the work is proportional to the number of opens.
pub fn alexandrov_topology(p: &Preorder) -> FiniteTopology {
    let mut opens: BTreeSet<SubsetMask> = BTreeSet::from([p.ground.empty_mask()]);
    let principal: BTreeSet<SubsetMask> = p.rows.iter().copied().collect();
    for up in principal {
        let joins: Vec<SubsetMask> = opens.iter().map(|o| o.union(up)).collect();
        opens.extend(joins);
    }
    FiniteTopology::from_family_unchecked(p.ground.clone(), opens)
}

/// Number of upper sets of `p`, the open sets of its Alexandrov topology,
/// or `None` once the count passes `cap`.
///
/// Splits on whether the first remaining point is in the set: if so its
/// up-set is too, otherwise its down-set is excluded. Work is proportional
/// to the count, so the cap bounds it.
pub fn count_upper_sets(p: &Preorder, cap: u64) -> Option<u64> {
    fn go(p: &Preorder, rest: SubsetMask, count: &mut u64, cap: u64) -> bool {
        let Some(x) = rest.first() else {
            *count += 1;
            return *count <= cap;
        };
        let up = p.rows[x].intersection(rest);
        let down = SubsetMask::from_indices(rest.width(), rest.iter().filter(|&y| p.rows[y].contains(x)));
        go(p, rest.difference(up), count, cap) && go(p, rest.difference(down), count, cap)
    }
    let mut count = 0;
    go(p, p.ground.full_mask(), &mut count, cap).then_some(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> GroundSet {
        GroundSet::new(["a", "b"]).unwrap()
    }

    #[test]
    fn discrete_gives_equality() {
        let t = FiniteTopology::discrete(ab());
        assert_eq!(specialization_preorder(&t), Preorder::equality(ab()));
    }

    #[test]
    fn sierpinski_gives_b_below_a() {
        let g = ab();
        let fam = [g.empty_mask(), g.mask_of(["a"]).unwrap(), g.full_mask()];
        let t = FiniteTopology::new(g.clone(), fam).unwrap();
        let p = specialization_preorder(&t);
        assert_eq!(p.pairs().collect::<Vec<_>>(), vec![(0, 0), (1, 0), (1, 1)]);
        assert_eq!(alexandrov_topology(&p), t);
    }

    #[test]
    fn indiscrete_gives_total() {
        let g = GroundSet::numbered(4).unwrap();
        let t = FiniteTopology::indiscrete(g.clone());
        assert_eq!(specialization_preorder(&t), Preorder::total(g.clone()));
        assert_eq!(alexandrov_topology(&Preorder::total(g.clone())), t);
        assert_eq!(alexandrov_topology(&Preorder::equality(g.clone())), FiniteTopology::discrete(g));
    }

    #[test]
    fn laws_are_checked() {
        let g = GroundSet::numbered(3).unwrap();
        assert!(Preorder::from_pairs(g.clone(), [(0, 0), (1, 1)]).is_err());
        let err = Preorder::from_pairs(g.clone(), [(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)]).unwrap_err();
        assert!(err.to_string().contains("not transitive"));
        let p = Preorder::generated_by(g, [(0, 1), (1, 2)]).unwrap();
        assert!(p.leq(0, 2));
        assert_eq!(p.down_set(2), SubsetMask::full(3));
    }

    #[test]
    fn counting_upper_sets() {
        let g = GroundSet::numbered(4).unwrap();
        assert_eq!(count_upper_sets(&Preorder::equality(g.clone()), 100), Some(16));
        assert_eq!(count_upper_sets(&Preorder::total(g.clone()), 100), Some(2));
        assert_eq!(count_upper_sets(&Preorder::equality(g.clone()), 15), None);
        let chain = Preorder::generated_by(g, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(count_upper_sets(&chain, 100), Some(alexandrov_topology(&chain).len() as u64));
        let wide = Preorder::equality(GroundSet::numbered(62).unwrap());
        assert_eq!(count_upper_sets(&wide, 1 << 20), None);
    }
}
