//! Derivation DAGs, sections of knowledge and chapters.
//!
//! Run with `cargo run --example knowledge`.

use dikspace::knowledge::{
    check_assumption, decompose_chapters, decompose_sections, product_space, uniqueness_notes, upper_set_topology, ChapterRule, CrossEdges,
    DerivationDag,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k_t = DerivationDag::new(["t1", "t2", "t3", "t4"], [("t1", "t2"), ("t2", "t3")])?;
    let k_p = DerivationDag::new(["p1", "p2", "p3"], [("p1", "p2")])?;
    let cross: CrossEdges = [("t1", "p1"), ("t2", "p2"), ("p2", "t3"), ("t4", "p3")].iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();

    for s in decompose_sections(&k_t) {
        println!("section of K_T: [{}] ({})", s.members.join(", "), s.form);
    }

    let diamond = DerivationDag::new(["a", "b", "c", "d"], [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")])?;
    for note in uniqueness_notes(&diamond) {
        println!("diamond: {:?} longest-chain decompositions", note.decompositions);
    }

    let report = check_assumption(&k_t, &k_p, &cross);
    println!("assumption holds: {}", report.holds());
    let d = decompose_chapters(&k_t, &k_p, &cross, ChapterRule::Linked)?;
    for c in &d.chapters {
        println!("chapter: [{}] x [{}]", c.k_t.members.join(", "), c.k_p.members.join(", "));
    }

    let product = product_space(&upper_set_topology(&k_t)?, &upper_set_topology(&k_p)?)?;
    println!("K_T x K_P: {} points, {} open sets", product.ground().len(), product.len());

    match DerivationDag::new(["a", "b"], [("a", "b"), ("b", "a")]) {
        Err(e) => println!("{e}"),
        Ok(_) => println!("cycle accepted"),
    }
    Ok(())
}
