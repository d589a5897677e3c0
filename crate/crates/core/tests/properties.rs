//! Invariants checked on generated inputs.

use std::collections::BTreeSet;

use dikspace::knowledge::{decompose_sections, product_space, upper_set_topology, DerivationDag};
use dikspace::metric::{betti_numbers, clusters, rips_complex, MetricTable};
use dikspace::topology::{alexandrov_topology, specialization_preorder, FiniteTopology, GroundSet, Preorder, SubsetMask};
use proptest::prelude::*;

/// A preorder on `1..=max` points generated by random pairs.
fn preorder_on(max: usize) -> impl Strategy<Value = Preorder> {
    (1usize..=max).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..=n * 2).prop_map(move |pairs| Preorder::generated_by(GroundSet::numbered(n).unwrap(), pairs).unwrap())
    })
}

fn preorder() -> impl Strategy<Value = Preorder> {
    preorder_on(6)
}

/// Forward edges over `n ≤ 7` nodes, so the graph is acyclic.
fn dag_edges() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (1usize..=7).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let len = pairs.len();
        (Just(n), prop::sample::subsequence(pairs, 0..=len))
    })
}

fn plane_metric() -> impl Strategy<Value = MetricTable> {
    prop::collection::btree_set((0i32..12, 0i32..12), 1..=7).prop_map(|pts| {
        let pts: Vec<(i32, i32)> = pts.into_iter().collect();
        let rows: Vec<Vec<f64>> = pts.iter().map(|a| pts.iter().map(|b| ((a.0 - b.0).abs() + (a.1 - b.1).abs()) as f64).collect()).collect();
        MetricTable::validated(GroundSet::numbered(pts.len()).unwrap(), &rows).unwrap()
    })
}

fn ids(n: usize) -> Vec<String> {
    (0..n).map(|k| format!("k{k}")).collect()
}

proptest! {
    #[test]
    fn preorder_round_trip(p in preorder()) {
        prop_assert_eq!(specialization_preorder(&alexandrov_topology(&p)), p);
    }

    #[test]
    fn alexandrov_opens_are_the_upper_sets(p in preorder()) {
        let t = alexandrov_topology(&p);
        let n = p.len();
        let upper: BTreeSet<u64> = SubsetMask::all(n)
            .filter(|s| s.iter().all(|i| (0..n).all(|j| !p.leq(i, j) || s.contains(j))))
            .map(SubsetMask::bits)
            .collect();
        let opens: BTreeSet<u64> = t.opens().iter().map(|s| s.bits()).collect();
        prop_assert_eq!(opens, upper);
    }

    #[test]
    fn product_order_is_componentwise(a in preorder_on(3), b in preorder_on(3)) {
        let (ta, tb): (FiniteTopology, FiniteTopology) = (alexandrov_topology(&a), alexandrov_topology(&b));
        let prod = specialization_preorder(&product_space(&ta, &tb).unwrap());
        let m = b.len();
        for i in 0..a.len() * m {
            for j in 0..a.len() * m {
                prop_assert_eq!(prod.leq(i, j), a.leq(i / m, j / m) && b.leq(i % m, j % m));
            }
        }
    }

    #[test]
    fn upper_set_opens_are_closed_under_derivation((n, edges) in dag_edges()) {
        let names = ids(n);
        let dag = DerivationDag::new(names.iter().map(String::as_str), edges.iter().map(|&(a, b)| (names[a].as_str(), names[b].as_str()))).unwrap();
        let t = upper_set_topology(&dag).unwrap();
        for s in t.opens() {
            for &(a, b) in &edges {
                prop_assert!(!s.contains(a) || s.contains(b));
            }
        }
        // Every up-closed set is open.
        let closed_up = SubsetMask::all(n).filter(|s| edges.iter().all(|&(a, b)| !s.contains(a) || s.contains(b))).count();
        prop_assert_eq!(t.len(), closed_up);
    }

    #[test]
    fn sections_ignore_insertion_order((n, edges) in dag_edges(), seed in any::<u64>()) {
        let names = ids(n);
        let mut order: Vec<usize> = (0..n).collect();
        let mut shuffled = edges.clone();
        // A cheap deterministic shuffle driven by the seed.
        order.sort_by_key(|&k| (k as u64).wrapping_mul(seed | 1).rotate_left(17));
        shuffled.sort_by_key(|&(a, b)| ((a * 8 + b) as u64).wrapping_mul(seed | 1).rotate_left(23));
        let build = |nodes: &[usize], es: &[(usize, usize)]| {
            DerivationDag::new(nodes.iter().map(|&k| names[k].as_str()), es.iter().map(|&(a, b)| (names[a].as_str(), names[b].as_str()))).unwrap()
        };
        let sorted: Vec<usize> = (0..n).collect();
        prop_assert_eq!(decompose_sections(&build(&sorted, &edges)), decompose_sections(&build(&order, &shuffled)));
    }

    #[test]
    fn clusters_coarsen_as_epsilon_grows(m in plane_metric(), e1 in 0.0f64..12.0, de in 0.0f64..12.0) {
        let fine = clusters(&m, e1).unwrap();
        let coarse = clusters(&m, e1 + de).unwrap();
        for c in &fine.clusters {
            prop_assert!(coarse.clusters.iter().any(|d| c.is_subset(*d)));
        }
    }

    #[test]
    fn euler_characteristic_matches_betti(m in plane_metric(), epsilon in 0.0f64..16.0) {
        let n = m.len();
        // With simplices up to dimension n − 1 the complex is complete.
        let c = rips_complex(&m, epsilon, n).unwrap();
        let betti = betti_numbers(&c, n);
        let alternating = |v: &dyn Fn(usize) -> usize| (0..=n).map(|k| if k % 2 == 0 { v(k) as i64 } else { -(v(k) as i64) }).sum::<i64>();
        prop_assert_eq!(alternating(&|k| c.count(k)), alternating(&|k| betti[k]));
        prop_assert_eq!(betti[0], clusters(&m, epsilon).unwrap().clusters.len());
    }
}
