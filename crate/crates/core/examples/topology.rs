//! Finite topologies and their specialization preorders.
//!
//! Run with `cargo run --example topology`.

use dikspace::topology::{
    alexandrov_topology, closure, is_connected, is_discrete, is_metrizable, is_t1, specialization_preorder, verify_topology, FiniteTopology,
    GroundSet, Preorder, TopologyDoc,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = GroundSet::new(["3", "7", "11", "23"])?;

    // A family missing a union is rejected with a witness.
    let family = [g.empty_mask(), g.mask_of(["3"])?, g.mask_of(["7"])?, g.full_mask()];
    let report = verify_topology(&g, &family)?;
    println!("{{∅, {{3}}, {{7}}, X}} is a topology: {}", report.valid);
    for v in &report.violations {
        println!("  {}", v.describe(&g));
    }

    // A chain 3 ≤ 7 ≤ 11 with 23 off to the side.
    let order = Preorder::generated_by(g.clone(), [(0, 1), (1, 2)])?;
    let t = alexandrov_topology(&order);
    println!("up-set topology: {} open sets", t.len());
    for open in t.named_opens() {
        println!("  {{{}}}", open.join(", "));
    }
    println!("closure of {{11}}: {}", g.format_mask(closure(&t, g.mask_of(["11"])?)));
    println!("round trip recovers the preorder: {}", specialization_preorder(&t) == order);
    println!("T1 {}, discrete {}, connected {}, metrizable {}", is_t1(&t), is_discrete(&t), is_connected(&t), is_metrizable(&t));

    let discrete = FiniteTopology::discrete(g);
    println!("discrete space: T1 {}, metrizable {}", is_t1(&discrete), is_metrizable(&discrete));
    println!("{}", serde_json::to_string(&TopologyDoc::from_topology(&t))?);
    Ok(())
}
