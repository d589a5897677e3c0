//! Generalizing ground atoms into universally quantified conjectures.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::domain::{DomainObject, DomainSignature, FailureMode, GroundAtom, QuantifiedFormula, Value};

pub const DEFAULT_MIN_SUPPORT: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConjectureStatus {
    Conjectured,
    Validated,
    Refuted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuantifiedConjecture {
    pub formula: QuantifiedFormula,
    /// Number of class tuples on which the relation is observed to hold.
    pub support: usize,
    pub counterexamples: usize,
    pub status: ConjectureStatus,
    /// The observed atoms the conjecture generalizes.
    pub supporting: Vec<GroundAtom>,
}

/// Proposes `∀x₁∈C₁ … ∀xₙ∈Cₙ R(x₁, …, xₙ)` for every relation `R` observed
/// in `atoms` and every tuple of declared classes, when at least
/// `min_support` member tuples satisfy `R` and no failure of `R` over the
/// classes is known. A failure is an explicit negative atom, or, for
/// relations read closed-world, any member tuple without an atom.
pub fn induce(atoms: &BTreeSet<GroundAtom>, sig: &DomainSignature, min_support: usize) -> Vec<QuantifiedConjecture> {
    let relations: BTreeSet<(&str, usize)> = atoms.iter().filter(|a| !a.negated).map(|a| (a.relation.as_str(), a.args.len())).collect();
    let classes: Vec<(&String, &BTreeSet<DomainObject>)> = sig.classes.iter().filter(|(_, m)| !m.is_empty()).collect();
    let mut out = Vec::new();
    for (relation, arity) in relations {
        let closed_world = sig.failure_mode(relation) == FailureMode::ClosedWorld;
        for choice in class_tuples(classes.len(), arity) {
            let mut support = Vec::new();
            let mut failed = false;
            for tuple in member_tuples(&choice.iter().map(|&c| classes[c].1).collect::<Vec<_>>()) {
                let atom = GroundAtom::new(relation, tuple);
                if atoms.contains(&atom) {
                    support.push(atom);
                } else if closed_world || atoms.contains(&atom.complement()) {
                    failed = true;
                    break;
                }
            }
            if failed || support.len() < min_support.max(1) {
                continue;
            }
            let names: Vec<String> = choice.iter().map(|&c| classes[c].0.clone()).collect();
            out.push(QuantifiedConjecture {
                formula: QuantifiedFormula::universal(relation, &names),
                support: support.len(),
                counterexamples: 0,
                status: ConjectureStatus::Conjectured,
                supporting: support,
            });
        }
    }
    out
}

/// All `arity`-tuples of indices below `n`, in lexicographic order.
fn class_tuples(n: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..arity {
        out = out.into_iter().flat_map(|t| (0..n).map(move |i| [t.clone(), vec![i]].concat())).collect();
    }
    out
}

fn member_tuples(classes: &[&BTreeSet<DomainObject>]) -> Vec<Vec<Value>> {
    let mut out = vec![vec![]];
    for members in classes {
        out = out.into_iter().flat_map(|t: Vec<Value>| members.iter().map(move |m| [t.clone(), vec![Value::Object(m.clone())]].concat())).collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::RelationSymbol;

    fn admin(mode: FailureMode) -> DomainSignature {
        let mut sig = DomainSignature::new("administration");
        sig.add_class("G", ["China", "France", "Japan"]).add_class("City", ["Beijing", "Paris", "Tokyo"]);
        let mut r = RelationSymbol::new("HasCapital", 1);
        r.failure = mode;
        sig.add_relation(r);
        sig
    }

    fn has_capital(countries: &[&str]) -> BTreeSet<GroundAtom> {
        countries.iter().map(|c| GroundAtom::of("HasCapital", &[c])).collect()
    }

    #[test]
    fn every_country_has_a_capital() {
        let sig = admin(FailureMode::ClosedWorld);
        let cs = induce(&has_capital(&["China", "France", "Japan"]), &sig, 3);
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].formula.to_string(), "∀x∈G HasCapital(x)");
        assert_eq!(cs[0].support, 3);
    }

    #[test]
    fn support_threshold_gates() {
        let sig = admin(FailureMode::Explicit);
        assert!(induce(&has_capital(&["China"]), &sig, 2).is_empty());
        assert_eq!(induce(&has_capital(&["China", "France"]), &sig, 2).len(), 1);
        // Closed-world reading: Japan's missing atom is a failure.
        assert!(induce(&has_capital(&["China", "France"]), &admin(FailureMode::ClosedWorld), 2).is_empty());
    }

    #[test]
    fn explicit_failure_blocks_the_conjecture() {
        let sig = admin(FailureMode::Explicit);
        let mut atoms = has_capital(&["China", "France"]);
        atoms.insert(GroundAtom::of("HasCapital", &["Japan"]).complement());
        assert!(induce(&atoms, &sig, 2).is_empty());
    }

    #[test]
    fn binary_relations_range_over_class_pairs() {
        let mut sig = DomainSignature::new("d");
        sig.add_class("A", ["1", "2"]);
        let atoms: BTreeSet<GroundAtom> =
            [("1", "1"), ("1", "2"), ("2", "1"), ("2", "2")].iter().map(|(x, y)| GroundAtom::of("le", &[x, y])).collect();
        let cs = induce(&atoms, &sig, 4);
        assert_eq!(cs[0].formula.to_string(), "∀x∈A ∀y∈A le(x, y)");
    }
}
