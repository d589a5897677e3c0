//! Pieces of information and the deductive preorder between them.
//!
//! Run with `cargo run --example information`.

use std::collections::BTreeSet;

use dikspace::domain::{DomainSignature, GroundAtom};
use dikspace::inference::{deduce, parse_rules};
use dikspace::information::{build_pieces, deductive_preorder_topology};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut sig = DomainSignature::new("administration");
    sig.add_class("G", ["China"]).add_class("City", ["Beijing"]);
    let rules = parse_rules("capital(X:City, Y:G) -> HasCapital(Y)")?;
    let atoms: BTreeSet<GroundAtom> = [
        GroundAtom::of("country", &["China"]),
        GroundAtom::of("city", &["Beijing"]),
        GroundAtom::of("city_of", &["Beijing", "China"]),
        GroundAtom::of("capital", &["Beijing", "China"]),
    ]
    .into();

    let pieces = build_pieces(&atoms, &[]);
    let space = deductive_preorder_topology(pieces, |facts| deduce(facts, &rules, &sig).map(|d| d.closure).unwrap_or_else(|_| facts.clone()))?;
    for (i, p) in space.pieces.iter().enumerate() {
        let rels: Vec<String> = p.relations.iter().map(|r| format!("{r:?}")).collect();
        println!("s{i} {}: {} relations", p.label(), rels.len());
    }
    println!("open sets: {}", space.structure.len());
    print!("{}", space.to_dot());
    Ok(())
}
