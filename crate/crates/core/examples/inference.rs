//! Deduction with provenance, induction of quantified conjectures and
//! their exhaustive validation.
//!
//! Run with `cargo run --example inference`.

use dikspace::domain::{DomainSignature, FailureMode, GroundAtom, QuantifiedFormula, RelationSymbol};
use dikspace::inference::{deduce, induce, parse_rules, validate, Outcome, Target, ValidationMethod};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut sig = DomainSignature::new("administration");
    sig.add_class("G", ["China", "France", "Japan"]).add_class("City", ["Beijing", "Paris", "Tokyo"]);
    for (name, arity) in [("capital", 2), ("HasCapital", 1)] {
        let mut r = RelationSymbol::new(name, arity);
        r.failure = FailureMode::ClosedWorld;
        sig.add_relation(r);
    }
    let rules = parse_rules("r1: capital(X:City, Y:G) -> HasCapital(Y)")?;
    let facts = [("Beijing", "China"), ("Paris", "France"), ("Tokyo", "Japan")].iter().map(|(c, g)| GroundAtom::of("capital", &[c, g])).collect();

    let deduction = deduce(&facts, &rules, &sig)?;
    for (atom, why) in deduction.derived() {
        let premises: Vec<String> = why.premises.iter().map(ToString::to_string).collect();
        println!("{atom} by {} from {}", why.rule, premises.join(", "));
    }

    for c in induce(&deduction.closure, &sig, 3) {
        let record = validate(Target::Conjecture(&c), ValidationMethod::ByExhaustiveVerification, &sig, &deduction.closure)?;
        let verdict = if record.outcome == Outcome::Valid { "validated" } else { "refuted" };
        println!("{} (support {}): {verdict} after {} checks", c.formula, c.support, record.checked);
    }

    // Without Japan's capital, induction stays silent and validation
    // finds the counterexample.
    let partial = deduce(&facts.iter().take(2).cloned().collect(), &rules, &sig)?;
    println!(
        "conjectures on partial data: {}",
        induce(&partial.closure, &sig, 2).iter().filter(|c| c.formula.to_string().contains("HasCapital")).count()
    );
    let claim = QuantifiedFormula::universal("HasCapital", &["G".to_string()]);
    let record = validate(Target::Formula(&claim), ValidationMethod::ByExhaustiveVerification, &sig, &partial.closure)?;
    println!("{claim}: {:?}, {}", record.outcome, record.note.unwrap_or_default());
    Ok(())
}
