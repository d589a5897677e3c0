//! Interpreting labelled open sets in a domain and running a method.
//!
//! Run with `cargo run --example interpretation`.

use dikspace::domain::{execute_method, interpret, replay, DStar, DomainSignature, InterpretationMap};
use dikspace::topology::{DataRelation, FiniteTopology, GroundSet};

const DOMAIN: &str = include_str!("../fixtures/numbers/domain.json");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sig = DomainSignature::from_json(DOMAIN)?;
    let g = GroundSet::new(["3", "7", "11", "23"])?;
    let mut dstar = DStar::new(FiniteTopology::discrete(g.clone()));
    dstar.label("X", g.full_mask())?;
    let mut primes = Vec::new();
    for x in ["3", "7", "11", "23"] {
        let label = format!("P{x}");
        dstar.label(&label, g.mask_of([x])?)?;
        primes.push((vec![g.mask_of([x])?], true));
    }
    dstar.relations.push(DataRelation::table("P", 1, primes));

    let imap = InterpretationMap::from_json(
        r#"{
            "objects": {"X": ["3", "7", "11", "23"], "P3": ["3"], "P7": ["7"], "P11": ["11"], "P23": ["23"]},
            "relations": {"P": "prime"}
        }"#,
    )?;
    let result = interpret(&dstar, &imap, &sig)?;
    for atom in &result.atoms {
        println!("{}", sig.gloss(atom).unwrap_or_else(|| atom.to_string()));
    }

    let average = sig.method("average").ok_or("no average method")?;
    let run = execute_method(average, &sig, &[result.assignments["X"].clone()])?;
    for op in &run.trace.operations {
        println!("  step {}: {} = {}", op.index, op.result, op.value);
    }
    let goal = run.goal_atom(average).ok_or("no goal")?;
    println!("{}", sig.gloss(&goal).unwrap_or_default());
    println!("replay agrees: {}", replay(&run.trace, &sig)? == run.outputs);
    Ok(())
}
