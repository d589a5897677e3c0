use crate::topology::{generate_topology, FiniteTopology, GroundSet, Preorder, SubsetMask, TopologyError};

/// `(a, b)`: name of a point of a product space.
pub fn pair_name(a: &str, b: &str) -> String {
    format!("({a}, {b})")
}

/// The product topology. Point `(i, j)` has index `i · |B| + j`.
///
/// Generated by `U_i × V_j`, the products of minimal neighborhoods; every
/// open rectangle is a union of these.
pub fn product_space(a: &FiniteTopology, b: &FiniteTopology) -> Result<FiniteTopology, TopologyError> {
    let (n, m) = (a.ground().len(), b.ground().len());
    let names = a.ground().elements().iter().flat_map(|x| b.ground().elements().iter().map(move |y| pair_name(x, y)));
    let ground = GroundSet::new(names)?;
    let us: Vec<SubsetMask> = (0..n).map(|i| a.minimal_neighborhood(i)).collect();
    let vs: Vec<SubsetMask> = (0..m).map(|j| b.minimal_neighborhood(j)).collect();
    let rectangles: Vec<SubsetMask> = us
        .iter()
        .flat_map(|u| vs.iter().map(move |v| (u, v)))
        .map(|(u, v)| SubsetMask::from_indices(n * m, u.iter().flat_map(|i| v.iter().map(move |j| i * m + j))))
        .collect();
    generate_topology(&ground, &rectangles)
}

/// The componentwise order on `A × B`, the specialization order of the
/// product topology, with the same point indexing as [`product_space`].
pub fn product_preorder(a: &Preorder, b: &Preorder) -> Result<Preorder, TopologyError> {
    let m = b.len();
    let names = a.ground().elements().iter().flat_map(|x| b.ground().elements().iter().map(move |y| pair_name(x, y)));
    let ground = GroundSet::new(names)?;
    let pairs: Vec<(usize, usize)> = a.pairs().flat_map(|(i, k)| b.pairs().map(move |(j, l)| (i * m + j, k * m + l))).collect();
    Preorder::from_pairs(ground, pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{alexandrov_topology, is_discrete, specialization_preorder, Preorder};

    fn sierpinski() -> FiniteTopology {
        let g = GroundSet::new(["a", "b"]).unwrap();
        FiniteTopology::new(g, [SubsetMask::empty(2), SubsetMask::singleton(2, 0), SubsetMask::full(2)]).unwrap()
    }

    #[test]
    fn discrete_times_discrete() {
        let d = FiniteTopology::discrete(GroundSet::numbered(2).unwrap());
        let p = product_space(&d, &FiniteTopology::discrete(GroundSet::numbered(3).unwrap())).unwrap();
        assert!(is_discrete(&p));
        assert_eq!(p.ground().name(0), "(0, 0)");
    }

    #[test]
    fn indiscrete_factor_gives_full_rectangles() {
        let i = FiniteTopology::indiscrete(GroundSet::numbered(2).unwrap());
        let p = product_space(&i, &sierpinski()).unwrap();
        // Opens are X × v for v ∈ {∅, {a}, {a, b}}.
        assert_eq!(p.len(), 3);
    }

    #[test]
    fn sierpinski_squared_is_the_product_order() {
        let s = sierpinski();
        let p = product_space(&s, &s).unwrap();
        let q = specialization_preorder(&s);
        let leq: Vec<Vec<bool>> = (0..4).map(|x| (0..4).map(|y| q.leq(x / 2, y / 2) && q.leq(x % 2, y % 2)).collect()).collect();
        let oracle = alexandrov_topology(&Preorder::from_matrix(p.ground().clone(), &leq).unwrap());
        assert_eq!(p, oracle);
        assert_eq!(p.len(), 6);
    }

    #[test]
    fn matches_the_rectangle_generated_topology() {
        let s = sierpinski();
        let d = FiniteTopology::discrete(GroundSet::numbered(2).unwrap());
        for (a, b) in [(&s, &d), (&d, &s), (&s, &s)] {
            let p = product_space(a, b).unwrap();
            let m = b.ground().len();
            let rects: Vec<SubsetMask> = a
                .opens()
                .iter()
                .flat_map(|u| b.opens().iter().map(move |v| (u, v)))
                .map(|(u, v)| SubsetMask::from_indices(p.ground().len(), u.iter().flat_map(|i| v.iter().map(move |j| i * m + j))))
                .collect();
            assert_eq!(p, generate_topology(p.ground(), &rects).unwrap());
        }
    }

    #[test]
    fn product_preorder_is_the_specialization_of_the_product() {
        let s = sierpinski();
        let p = product_preorder(&specialization_preorder(&s), &specialization_preorder(&s)).unwrap();
        assert_eq!(p, specialization_preorder(&product_space(&s, &s).unwrap()));
        assert_eq!(alexandrov_topology(&p), product_space(&s, &s).unwrap());
    }
}
