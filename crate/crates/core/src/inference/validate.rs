//! Validation by assumption, by belief, or by exhaustive verification.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{InferenceError, QuantifiedConjecture};
use crate::domain::{execute_method, DomainObject, DomainSignature, GroundAtom, MethodSpec, QuantifiedFormula, Quantifier, SlotDomain, Value};
use crate::information::{PieceOfInformation, Relation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ValidationMethod {
    ByAssumption,
    ByBelief,
    ByExhaustiveVerification,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Valid,
    Invalid,
    Undetermined,
}

#[derive(Debug, Clone, Copy)]
pub enum Target<'a> {
    Formula(&'a QuantifiedFormula),
    Conjecture(&'a QuantifiedConjecture),
    Piece(&'a PieceOfInformation),
    Method(&'a MethodSpec),
}

impl Target<'_> {
    fn describe(&self) -> String {
        match self {
            Self::Formula(f) => f.to_string(),
            Self::Conjecture(c) => c.formula.to_string(),
            Self::Piece(p) => format!("piece {}", p.label()),
            Self::Method(m) => format!("method:{}", m.name),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationRecord {
    pub target: String,
    pub method: ValidationMethod,
    pub outcome: Outcome,
    /// Falsifying tuple when the outcome is invalid.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Value>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// Number of cases checked by exhaustive verification.
    pub checked: usize,
}

impl ValidationRecord {
    fn new(target: String, method: ValidationMethod, outcome: Outcome) -> Self {
        Self { target, method, outcome, witness: None, note: None, checked: 0 }
    }
}

/// Validates `target`. `facts` are the atoms taken as true, read closed-world
/// except where a relation's extension is declared in the signature.
pub fn validate(
    target: Target<'_>,
    method: ValidationMethod,
    sig: &DomainSignature,
    facts: &BTreeSet<GroundAtom>,
) -> Result<ValidationRecord, InferenceError> {
    let name = target.describe();
    match method {
        ValidationMethod::ByAssumption | ValidationMethod::ByBelief => {
            let mut r = ValidationRecord::new(name, method, Outcome::Valid);
            r.note = Some(match method {
                ValidationMethod::ByAssumption => "accepted by assumption".into(),
                _ => "accepted by belief".into(),
            });
            Ok(r)
        }
        ValidationMethod::ByExhaustiveVerification => match target {
            Target::Formula(f) => verify_formula(name, f, sig, facts),
            Target::Conjecture(c) => verify_formula(name, &c.formula, sig, facts),
            Target::Piece(p) => verify_piece(name, p, sig, facts),
            Target::Method(m) => verify_method(name, m, sig),
        },
    }
}

fn verify_formula(
    name: String,
    f: &QuantifiedFormula,
    sig: &DomainSignature,
    facts: &BTreeSet<GroundAtom>,
) -> Result<ValidationRecord, InferenceError> {
    let mut r = ValidationRecord::new(name, ValidationMethod::ByExhaustiveVerification, Outcome::Valid);
    r.checked = f.prefix.iter().take_while(|q| q.quantifier == Quantifier::ForAll).map(|q| sig.class(&q.class).map_or(0, BTreeSet::len)).product();
    if let Some(b) = f.counterexample(sig, facts)? {
        r.outcome = Outcome::Invalid;
        let witness: Vec<Value> = f.prefix.iter().filter_map(|q| b.get(&q.var).cloned()).collect();
        let shown: Vec<String> = f.prefix.iter().filter_map(|q| b.get(&q.var).map(|v| format!("{} = {v}", q.var))).collect();
        r.note = Some(format!("fails for {}", shown.join(", ")));
        r.witness = Some(witness);
    }
    Ok(r)
}

fn atom_holds(a: &GroundAtom, sig: &DomainSignature, facts: &BTreeSet<GroundAtom>) -> bool {
    match sig.relation(&a.relation).and_then(|r| r.extension.as_ref()) {
        Some(ext) => ext.contains(&a.args) != a.negated,
        None => facts.contains(a),
    }
}

fn verify_piece(
    name: String,
    p: &PieceOfInformation,
    sig: &DomainSignature,
    facts: &BTreeSet<GroundAtom>,
) -> Result<ValidationRecord, InferenceError> {
    let mut r = ValidationRecord::new(name, ValidationMethod::ByExhaustiveVerification, Outcome::Valid);
    for rel in &p.relations {
        r.checked += 1;
        let (ok, witness) = match rel {
            Relation::Atom(a) => (atom_holds(a, sig, facts), a.args.clone()),
            Relation::Formula(f) => match f.counterexample(sig, facts)? {
                None => (true, vec![]),
                Some(b) => (false, f.prefix.iter().filter_map(|q| b.get(&q.var).cloned()).collect()),
            },
        };
        if !ok {
            r.outcome = Outcome::Invalid;
            r.witness = Some(witness);
            r.note = Some(format!("{rel} does not hold"));
            break;
        }
    }
    Ok(r)
}

fn slot_values(domain: &SlotDomain, sig: &DomainSignature, slot: &str) -> Result<Vec<Value>, InferenceError> {
    let class_name = match domain {
        SlotDomain::MembersOf(c) | SlotDomain::SubsetsOf { class: c, .. } => c,
    };
    let members: Vec<&DomainObject> = sig
        .class(class_name)
        .ok_or_else(|| InferenceError::Capability(format!("slot `{slot}` ranges over undeclared class `{class_name}`")))?
        .iter()
        .collect();
    match domain {
        SlotDomain::MembersOf(_) => Ok(members.into_iter().cloned().map(Value::Object).collect()),
        SlotDomain::SubsetsOf { size, .. } => {
            if members.len() > 20 {
                return Err(InferenceError::Capability(format!("class `{class_name}` is too large to enumerate its subsets")));
            }
            let mut out = Vec::new();
            for bits in 1u32..(1 << members.len()) {
                if size.is_none_or(|k| bits.count_ones() as usize == k) {
                    let set: BTreeSet<DomainObject> = (0..members.len()).filter(|i| bits >> i & 1 == 1).map(|i| members[i].clone()).collect();
                    out.push(Value::Set(set));
                }
            }
            Ok(out)
        }
    }
}

/// Runs the method on every input tuple of its declared finite domains and
/// checks each result against the goal relation's declared extension.
fn verify_method(name: String, m: &MethodSpec, sig: &DomainSignature) -> Result<ValidationRecord, InferenceError> {
    let mut r = ValidationRecord::new(name, ValidationMethod::ByExhaustiveVerification, Outcome::Valid);
    let mut choices: Vec<Vec<Value>> = Vec::with_capacity(m.given.len());
    for slot in &m.given {
        let domain =
            slot.domain.as_ref().ok_or_else(|| InferenceError::Capability(format!("slot `{}` of `{}` has no finite domain", slot.name, m.name)))?;
        choices.push(slot_values(domain, sig, &slot.name)?);
    }
    let extension = m.goal.relation.as_ref().and_then(|g| sig.relation(g)).and_then(|g| g.extension.as_ref());
    let Some(extension) = extension else {
        r.outcome = Outcome::Undetermined;
        r.note = Some("the goal relation has no declared extension to check against".into());
        return Ok(r);
    };
    let mut tuples: Vec<Vec<Value>> = vec![vec![]];
    for c in &choices {
        tuples = tuples.into_iter().flat_map(|t| c.iter().map(move |v| [t.clone(), vec![v.clone()]].concat())).collect();
    }
    for inputs in tuples {
        r.checked += 1;
        let failure = match execute_method(m, sig, &inputs) {
            Ok(run) => {
                let goal: Vec<Value> = inputs.iter().chain(&run.outputs).cloned().collect();
                (!extension.contains(&goal)).then(|| {
                    let outs: Vec<String> = run.outputs.iter().map(Value::to_string).collect();
                    format!("output ({}) violates the goal", outs.join(", "))
                })
            }
            Err(e) => Some(e.to_string()),
        };
        if let Some(note) = failure {
            r.outcome = Outcome::Invalid;
            r.witness = Some(inputs);
            r.note = Some(note);
            break;
        }
    }
    Ok(r)
}
