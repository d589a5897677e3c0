//! Data functions, propositional data relations and quantified relations
//! over the open sets of a data space.
//!
//! Run with `cargo run --example data_relations`.

use dikspace::topology::{
    eval_data_function, eval_data_relation, eval_open_formula, generate_topology, DataFunction, DataRelation, GroundSet, OpenFormula, OpenTerm,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = GroundSet::new(["3", "7", "11", "23"])?;
    let three = g.mask_of(["3"])?;
    let three_seven = g.mask_of(["3", "7"])?;
    let rest = g.mask_of(["11", "23"])?;
    let t = generate_topology(&g, &[three, three_seven, rest])?;
    println!("open sets: {}", t.named_opens().iter().map(|o| format!("{{{}}}", o.join(", "))).collect::<Vec<_>>().join(" "));

    let meet = eval_data_function(&t, &DataFunction::Intersection, &[three_seven, g.full_mask()])?;
    println!("intersection({{3, 7}}, X) = {}", g.format_mask(meet));
    println!("{{3}} ⊂ {{3, 7}}: {}", eval_data_relation(&t, &DataRelation::Subset, &[three, three_seven])?);
    println!("{{3, 7}} ⊂ {{11, 23}}: {}", eval_data_relation(&t, &DataRelation::Subset, &[three_seven, rest])?);

    // Outside the topology, data functions are undefined.
    let seven = g.mask_of(["7"])?;
    if let Err(e) = eval_data_function(&t, &DataFunction::Union, &[seven, rest]) {
        println!("union({{7}}, {{11, 23}}): {e}");
    }

    // ∀t ∃s (t ∪ s = X) holds: take s = X.
    let covers = OpenFormula::forall(
        "t",
        OpenFormula::exists(
            "s",
            OpenFormula::Holds(
                DataRelation::Equal,
                vec![OpenTerm::Apply(DataFunction::Union, vec![OpenTerm::var("t"), OpenTerm::var("s")]), OpenTerm::Full],
            ),
        ),
    );
    println!("∀t ∃s (t ∪ s = X): {}", eval_open_formula(&t, &covers)?);

    // ∀t ∃s (t ∩ s = ∅, s ≠ ∅) fails at t = X.
    let disjoint = OpenFormula::forall(
        "t",
        OpenFormula::exists(
            "s",
            OpenFormula::And(vec![
                OpenFormula::Holds(
                    DataRelation::Equal,
                    vec![OpenTerm::Apply(DataFunction::Intersection, vec![OpenTerm::var("t"), OpenTerm::var("s")]), OpenTerm::Empty],
                ),
                OpenFormula::Not(Box::new(OpenFormula::Holds(DataRelation::Equal, vec![OpenTerm::var("s"), OpenTerm::Empty]))),
            ]),
        ),
    );
    println!("∀t ∃s (t ∩ s = ∅ and s ≠ ∅): {}", eval_open_formula(&t, &disjoint)?);
    Ok(())
}
