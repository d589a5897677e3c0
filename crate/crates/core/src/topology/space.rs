use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use super::{specialization_preorder, GroundSet, SubsetMask, TopologyError};
use crate::metric::MetricTable;

/// A finite topological space: a ground set with its family of open sets.
///
/// The family always contains `∅` and the ground set and is closed under
/// union and intersection. Opens are kept deduplicated in canonical
/// [`SubsetMask`] order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTopology {
    ground: GroundSet,
    opens: Vec<SubsetMask>,
}

impl FiniteTopology {
    /// Validates `family` against the three axioms.
    pub fn new(ground: GroundSet, family: impl IntoIterator<Item = SubsetMask>) -> Result<Self, TopologyError> {
        let family: Vec<SubsetMask> = family.into_iter().collect();
        let report = verify_topology(&ground, &family)?;
        if let Some(v) = report.violations.first() {
            return Err(TopologyError::NotATopology(v.describe(&ground)));
        }
        Ok(Self::from_family_unchecked(ground, family))
    }

    pub(crate) fn from_family_unchecked(ground: GroundSet, family: impl IntoIterator<Item = SubsetMask>) -> Self {
        let opens: BTreeSet<SubsetMask> = family.into_iter().collect();
        Self { ground, opens: opens.into_iter().collect() }
    }

    pub fn discrete(ground: GroundSet) -> Self {
        let n = ground.len();
        Self::from_family_unchecked(ground, SubsetMask::all(n))
    }

    pub fn indiscrete(ground: GroundSet) -> Self {
        let family = [ground.empty_mask(), ground.full_mask()];
        Self::from_family_unchecked(ground, family)
    }

    /// The cofinite topology. Every subset of a finite set is cofinite or
    /// empty, so this coincides with the discrete topology.
    pub fn cofinite(ground: GroundSet) -> Self {
        Self::discrete(ground)
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn opens(&self) -> &[SubsetMask] {
        &self.opens
    }

    pub fn len(&self) -> usize {
        self.opens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.opens.is_empty()
    }

    pub fn is_open(&self, s: SubsetMask) -> bool {
        self.opens.binary_search(&s).is_ok()
    }

    pub fn is_closed(&self, s: SubsetMask) -> bool {
        self.is_open(s.complement())
    }

    /// Closed sets in canonical order.
    pub fn closed_sets(&self) -> Vec<SubsetMask> {
        let mut closed: Vec<_> = self.opens.iter().map(|o| o.complement()).collect();
        closed.sort();
        closed
    }

    /// Smallest open set containing element `i`.
    pub fn minimal_neighborhood(&self, i: usize) -> SubsetMask {
        self.opens.iter().filter(|o| o.contains(i)).fold(self.ground.full_mask(), |acc, o| acc.intersection(*o))
    }

    /// Opens rendered as element-name lists, canonical order.
    pub fn named_opens(&self) -> Vec<Vec<String>> {
        self.opens.iter().map(|o| self.ground.names_of(*o).into_iter().map(String::from).collect()).collect()
    }
}

impl fmt::Display for FiniteTopology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.opens.iter().map(|o| self.ground.format_mask(*o)).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// A failed topology axiom together with its witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomViolation {
    /// Axiom (1): the empty set is not open.
    MissingEmpty,
    /// Axiom (1): the ground set is not open.
    MissingFull,
    /// Axiom (2): a union of two opens is not open.
    UnionNotOpen { left: SubsetMask, right: SubsetMask },
    /// Axiom (3): an intersection of two opens is not open.
    IntersectionNotOpen { left: SubsetMask, right: SubsetMask },
}

impl AxiomViolation {
    pub fn axiom(&self) -> u8 {
        match self {
            Self::MissingEmpty | Self::MissingFull => 1,
            Self::UnionNotOpen { .. } => 2,
            Self::IntersectionNotOpen { .. } => 3,
        }
    }

    pub fn describe(&self, ground: &GroundSet) -> String {
        match self {
            Self::MissingEmpty => "axiom (1): ∅ missing".to_string(),
            Self::MissingFull => "axiom (1): X missing".to_string(),
            Self::UnionNotOpen { left, right } => format!(
                "axiom (2): {} ∪ {} = {} is not open",
                ground.format_mask(*left),
                ground.format_mask(*right),
                ground.format_mask(left.union(*right))
            ),
            Self::IntersectionNotOpen { left, right } => format!(
                "axiom (3): {} ∩ {} = {} is not open",
                ground.format_mask(*left),
                ground.format_mask(*right),
                ground.format_mask(left.intersection(*right))
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopologyReport {
    pub valid: bool,
    pub violations: Vec<AxiomViolation>,
}

/// Checks the three open-set axioms on `family`.
///
/// Each union or intersection that falls outside the family is reported
/// once, with the first witness pair in canonical order.
pub fn verify_topology(ground: &GroundSet, family: &[SubsetMask]) -> Result<TopologyReport, TopologyError> {
    for m in family {
        ground.check_width(*m)?;
    }
    let members: BTreeSet<SubsetMask> = family.iter().copied().collect();
    let mut violations = Vec::new();
    if !members.contains(&ground.empty_mask()) {
        violations.push(AxiomViolation::MissingEmpty);
    }
    if !members.contains(&ground.full_mask()) {
        violations.push(AxiomViolation::MissingFull);
    }
    let sorted: Vec<SubsetMask> = members.iter().copied().collect();
    let mut missing_unions = BTreeSet::new();
    let mut missing_meets = BTreeSet::new();
    let mut meet_violations = Vec::new();
    for (i, &a) in sorted.iter().enumerate() {
        for &b in &sorted[i + 1..] {
            let u = a.union(b);
            if !members.contains(&u) && missing_unions.insert(u) {
                violations.push(AxiomViolation::UnionNotOpen { left: a, right: b });
            }
            let m = a.intersection(b);
            if !members.contains(&m) && missing_meets.insert(m) {
                meet_violations.push(AxiomViolation::IntersectionNotOpen { left: a, right: b });
            }
        }
    }
    violations.extend(meet_violations);
    Ok(TopologyReport { valid: violations.is_empty(), violations })
}

/// Smallest topology containing every set in `subbasis`.
///
/// Finite intersections of the subbasis (including the empty intersection,
/// the whole ground set) form a basis; arbitrary unions of the basis,
/// together with `∅`, are the opens.
pub fn generate_topology(ground: &GroundSet, subbasis: &[SubsetMask]) -> Result<FiniteTopology, TopologyError> {
    for m in subbasis {
        ground.check_width(*m)?;
    }
    let mut basis: BTreeSet<SubsetMask> = BTreeSet::from([ground.full_mask()]);
    for &s in subbasis {
        let meets: Vec<SubsetMask> = basis.iter().map(|b| b.intersection(s)).collect();
        basis.extend(meets);
        basis.insert(s);
    }
    let mut opens: BTreeSet<SubsetMask> = BTreeSet::from([ground.empty_mask()]);
    for &b in &basis {
        let joins: Vec<SubsetMask> = opens.iter().map(|o| o.union(b)).collect();
        opens.extend(joins);
    }
    Ok(FiniteTopology::from_family_unchecked(ground.clone(), opens))
}

/// Smallest closed set containing `s`.
pub fn closure(t: &FiniteTopology, s: SubsetMask) -> SubsetMask {
    // The complement of the closure is the largest open set missing `s`.
    let outside = t.opens().iter().filter(|o| o.is_disjoint(s)).fold(t.ground().empty_mask(), |acc, o| acc.union(*o));
    outside.complement()
}

/// Every pair of distinct points is separated by open neighbourhoods.
pub fn is_t1(t: &FiniteTopology) -> bool {
    let n = t.ground().len();
    (0..n).all(|x| (0..n).filter(|&y| y != x).all(|y| t.opens().iter().any(|o| o.contains(x) && !o.contains(y))))
}

pub fn is_discrete(t: &FiniteTopology) -> bool {
    t.len() == 1usize << t.ground().len()
}

/// Connectedness via the undirected graph of the specialization preorder.
pub fn is_connected(t: &FiniteTopology) -> bool {
    let p = specialization_preorder(t);
    let n = p.len();
    let mut seen = SubsetMask::singleton(n, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for y in 0..n {
            if !seen.contains(y) && (p.leq(x, y) || p.leq(y, x)) {
                seen = seen.with(y);
                queue.push_back(y);
            }
        }
    }
    seen.is_full()
}

/// Whether some metric induces `t`.
///
/// Any metric on a finite set induces the discrete topology, so it suffices
/// to try the discrete metric and compare.
pub fn is_metrizable(t: &FiniteTopology) -> bool {
    MetricTable::discrete(t.ground().clone()).induced_topology() == *t
}

/// Always true: a finite space has finitely many opens, so every open cover
/// has a finite subcover.
pub fn is_compact(_t: &FiniteTopology) -> bool {
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(names: &[&str]) -> GroundSet {
        GroundSet::new(names.iter().copied()).unwrap()
    }

    fn sierpinski() -> FiniteTopology {
        let ground = g(&["a", "b"]);
        let fam = vec![ground.empty_mask(), ground.mask_of(["a"]).unwrap(), ground.full_mask()];
        FiniteTopology::new(ground, fam).unwrap()
    }

    #[test]
    fn indiscrete_family_is_valid() {
        let ground = g(&["3", "7", "11", "23"]);
        let fam = [ground.empty_mask(), ground.full_mask()];
        assert!(verify_topology(&ground, &fam).unwrap().valid);
    }

    #[test]
    fn missing_full_and_union_reported() {
        let ground = g(&["a", "b"]);
        let a = ground.mask_of(["a"]).unwrap();
        let b = ground.mask_of(["b"]).unwrap();
        let report = verify_topology(&ground, &[ground.empty_mask(), a, b]).unwrap();
        assert!(!report.valid);
        assert_eq!(report.violations, vec![AxiomViolation::MissingFull, AxiomViolation::UnionNotOpen { left: a, right: b }]);
        assert_eq!(report.violations[0].describe(&ground), "axiom (1): X missing");
        assert_eq!(report.violations[1].axiom(), 2);
    }

    #[test]
    fn power_set_is_valid() {
        let ground = g(&["a", "b", "c"]);
        let fam: Vec<_> = SubsetMask::all(3).collect();
        assert!(verify_topology(&ground, &fam).unwrap().valid);
    }

    #[test]
    fn width_mismatch_is_malformed() {
        let ground = g(&["a", "b"]);
        let err = verify_topology(&ground, &[SubsetMask::empty(3)]).unwrap_err();
        assert_eq!(err, TopologyError::WidthMismatch { expected: 2, found: 3 });
    }

    #[test]
    fn generation_examples() {
        let ground = g(&["a", "b"]);
        let t = generate_topology(&ground, &[]).unwrap();
        assert_eq!(t, FiniteTopology::indiscrete(ground));

        let ground = g(&["a", "b", "c"]);
        let a = ground.mask_of(["a"]).unwrap();
        let b = ground.mask_of(["b"]).unwrap();
        let t = generate_topology(&ground, &[a, b]).unwrap();
        let expected = vec![ground.empty_mask(), a, b, a.union(b), ground.full_mask()];
        assert_eq!(t.opens(), expected.as_slice());

        let singles: Vec<_> = (0..3).map(|i| SubsetMask::singleton(3, i)).collect();
        assert_eq!(generate_topology(&ground, &singles).unwrap(), FiniteTopology::discrete(ground));
    }

    #[test]
    fn sierpinski_closures() {
        let t = sierpinski();
        let a = t.ground().mask_of(["a"]).unwrap();
        let b = t.ground().mask_of(["b"]).unwrap();
        assert_eq!(closure(&t, a), t.ground().full_mask());
        assert_eq!(closure(&t, b), b);
        let d = FiniteTopology::discrete(g(&["a", "b", "c"]));
        for s in SubsetMask::all(3) {
            assert_eq!(closure(&d, s), s);
        }
    }

    #[test]
    fn space_properties() {
        let s = sierpinski();
        assert!(!is_t1(&s));
        assert!(is_connected(&s));
        assert!(!is_metrizable(&s));

        let d = FiniteTopology::discrete(g(&["a", "b"]));
        assert!(is_t1(&d));
        assert!(!is_connected(&d));
        assert!(is_metrizable(&d));
        assert!(is_discrete(&d));

        let i = FiniteTopology::indiscrete(g(&["a", "b", "c"]));
        assert!(is_connected(&i));
        assert!(!is_discrete(&i));
        assert!(is_compact(&i));
    }

    #[test]
    fn new_rejects_non_topology() {
        let ground = g(&["a", "b"]);
        let err = FiniteTopology::new(ground.clone(), [ground.empty_mask()]).unwrap_err();
        assert!(matches!(err, TopologyError::NotATopology(_)));
    }
}
