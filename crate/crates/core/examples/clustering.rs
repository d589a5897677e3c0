//! ε-clusters of a finite metric space and the homology of its Rips complex.
//!
//! Run with `cargo run --example clustering`.

use dikspace::metric::{betti_numbers, clusters, rips_complex, verify_metric, MetricTable};
use dikspace::topology::GroundSet;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Six points on a unit hexagon plus one far away.
    let names = ["a", "b", "c", "d", "e", "f", "z"];
    let mut coords: Vec<Vec<f64>> = (0..6)
        .map(|k| {
            let t = std::f64::consts::PI * k as f64 / 3.0;
            vec![t.cos(), t.sin()]
        })
        .collect();
    coords.push(vec![10.0, 0.0]);
    let m = MetricTable::from_coords(GroundSet::new(names)?, &coords)?;
    println!("metric axioms hold: {}", verify_metric(&m).valid);

    for epsilon in [0.5, 1.2, 1.8, 2.1] {
        let parts = clusters(&m, epsilon)?;
        // Building one dimension higher makes β_2 exact.
        let betti = betti_numbers(&rips_complex(&m, epsilon, 3)?, 2);
        let shown: Vec<String> = parts.named(m.ground()).iter().map(|c| format!("{{{}}}", c.join(", "))).collect();
        println!("ε = {epsilon}: clusters {}, betti {betti:?}", shown.join(" "));
    }

    let g = GroundSet::new(["p", "q"])?;
    let broken = MetricTable::from_rows(g, &[vec![0.0, 1.0], vec![2.0, 0.0]])?;
    for v in verify_metric(&broken).violations {
        println!("rejected: {}", v.describe(broken.ground()));
    }
    Ok(())
}
