//! Interpretation of D* (labelled open sets, data functions, data relations)
//! into a domain.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{DomainError, DomainObject, DomainSignature, GroundAtom, Value};
use crate::topology::{eval_data_function, DataFunction, DataRelation, FiniteTopology, SubsetMask, TopologyError};

/// The part of a data space handed to an interpretation: named open sets
/// together with the data functions and relations over them.
#[derive(Debug, Clone)]
pub struct DStar {
    pub topology: FiniteTopology,
    pub labels: BTreeMap<String, SubsetMask>,
    pub functions: Vec<DataFunction>,
    pub relations: Vec<DataRelation>,
}

impl DStar {
    pub fn new(topology: FiniteTopology) -> Self {
        Self { topology, labels: BTreeMap::new(), functions: Vec::new(), relations: Vec::new() }
    }

    /// Names an open set.
    pub fn label(&mut self, name: &str, mask: SubsetMask) -> Result<&mut Self, TopologyError> {
        self.topology.ground().check_width(mask)?;
        if !self.topology.is_open(mask) {
            return Err(TopologyError::Domain(format!("`{name}` = {} is not open", self.topology.ground().format_mask(mask))));
        }
        self.labels.insert(name.to_string(), mask);
        Ok(self)
    }

    fn label_of(&self, mask: SubsetMask) -> Option<&str> {
        self.labels.iter().find(|(_, m)| **m == mask).map(|(l, _)| l.as_str())
    }
}

/// Maps open-set labels to domain objects and data symbols to domain symbols.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterpretationMap {
    #[serde(default)]
    pub objects: BTreeMap<String, BTreeSet<DomainObject>>,
    #[serde(default)]
    pub functions: BTreeMap<String, String>,
    #[serde(default)]
    pub relations: BTreeMap<String, String>,
}

impl InterpretationMap {
    pub fn from_json(text: &str) -> Result<Self, DomainError> {
        serde_json::from_str(text).map_err(DomainError::from_json)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Interpretation {
    /// Domain value assigned to each labelled open set.
    pub assignments: BTreeMap<String, Value>,
    /// The interpreted relation instances. Function evaluations appear as
    /// atoms `f(args…, value)`; explicitly false table entries of a data
    /// relation appear as negated atoms.
    pub atoms: BTreeSet<GroundAtom>,
}

/// Translates every labelled open set, data function evaluation, and data
/// relation instance of `dstar` into the domain.
pub fn interpret(dstar: &DStar, imap: &InterpretationMap, sig: &DomainSignature) -> Result<Interpretation, DomainError> {
    let mut out = Interpretation::default();
    for (label, &mask) in &dstar.labels {
        if !dstar.topology.is_open(mask) {
            return Err(DomainError::Topology(TopologyError::Domain(format!("`{label}` is not an open set"))));
        }
        let image =
            imap.objects.get(label).filter(|s| !s.is_empty()).ok_or_else(|| DomainError::Incomplete(format!("open set `{label}` has no image")))?;
        if let Some(o) = image.iter().find(|o| !sig.knows_object(o)) {
            return Err(DomainError::Signature(format!("`{label}` maps to `{o}`, which the domain does not declare")));
        }
        out.assignments.insert(label.clone(), Value::from_image(image));
    }
    let value_of = |mask: SubsetMask, what: &str| -> Result<Option<Value>, DomainError> {
        match dstar.label_of(mask) {
            Some(l) => Ok(Some(out.assignments[l].clone())),
            None if what.is_empty() => Ok(None),
            None => {
                Err(DomainError::Incomplete(format!("{what} uses {}, which is not a labelled open set", dstar.topology.ground().format_mask(mask))))
            }
        }
    };
    let labelled: Vec<SubsetMask> = dstar.labels.values().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let mut atoms = BTreeSet::new();

    for f in &dstar.functions {
        let target = imap.functions.get(f.name()).ok_or_else(|| DomainError::Incomplete(format!("data function `{}` has no image", f.name())))?;
        let symbol = sig.function(target).ok_or_else(|| DomainError::Signature(format!("`{}` maps to undeclared function `{target}`", f.name())))?;
        if symbol.arity != f.arity() {
            return Err(DomainError::Signature(format!("`{}` has arity {} but `{target}` has arity {}", f.name(), f.arity(), symbol.arity)));
        }
        let evaluations: Vec<(Vec<SubsetMask>, SubsetMask)> = match f {
            DataFunction::Table { table, .. } => table.iter().map(|(k, v)| (k.clone(), *v)).collect(),
            _ => {
                let mut ev = Vec::new();
                for &a in &labelled {
                    for &b in &labelled {
                        ev.push((vec![a, b], eval_data_function(&dstar.topology, f, &[a, b])?));
                    }
                }
                ev
            }
        };
        let what = format!("data function `{}`", f.name());
        for (args, result) in evaluations {
            let args = args.iter().map(|&a| value_of(a, &what)).collect::<Result<Option<Vec<_>>, _>>()?.expect("labelled");
            // Built-in results outside D* are not part of the interpretation.
            let Some(value) = value_of(result, if matches!(f, DataFunction::Table { .. }) { &what } else { "" })? else {
                continue;
            };
            if let Some(known) = symbol.apply(&args) {
                if known != &value {
                    return Err(DomainError::Signature(format!("`{}` gives {value} but `{target}` is {known} on the same arguments", f.name())));
                }
            }
            let mut atom_args = args;
            atom_args.push(value);
            atoms.insert(GroundAtom::new(target.clone(), atom_args));
        }
    }

    for r in &dstar.relations {
        let target = imap.relations.get(r.name()).ok_or_else(|| DomainError::Incomplete(format!("data relation `{}` has no image", r.name())))?;
        let symbol = sig.relation(target).ok_or_else(|| DomainError::Signature(format!("`{}` maps to undeclared relation `{target}`", r.name())))?;
        if symbol.arity != r.arity() {
            return Err(DomainError::Signature(format!("`{}` has arity {} but `{target}` has arity {}", r.name(), r.arity(), symbol.arity)));
        }
        let what = format!("data relation `{}`", r.name());
        let instances: Vec<(Vec<SubsetMask>, bool)> = match r {
            DataRelation::Table { table, .. } => table.iter().map(|(k, v)| (k.clone(), *v)).collect(),
            _ => r.true_instances(&dstar.topology, &labelled)?.into_iter().map(|t| (t, true)).collect(),
        };
        for (args, holds) in instances {
            for &a in &args {
                dstar.topology.ground().check_width(a)?;
                if !dstar.topology.is_open(a) {
                    return Err(DomainError::Topology(TopologyError::Domain(format!(
                        "{what} has non-open argument {}",
                        dstar.topology.ground().format_mask(a)
                    ))));
                }
            }
            let args = args.iter().map(|&a| value_of(a, &what)).collect::<Result<Option<Vec<_>>, _>>()?.expect("labelled");
            atoms.insert(GroundAtom { relation: target.clone(), args, negated: !holds });
        }
    }
    out.atoms = atoms;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::RelationSymbol;
    use crate::topology::{generate_topology, GroundSet};

    fn numbers() -> (DStar, InterpretationMap, DomainSignature) {
        let ground = GroundSet::new(["3", "7", "11", "23"]).unwrap();
        let singletons: Vec<SubsetMask> = (0..4).map(|i| SubsetMask::singleton(4, i)).collect();
        let t = generate_topology(&ground, &singletons).unwrap();
        let mut d = DStar::new(t);
        let mut imap = InterpretationMap::default();
        let mut table = Vec::new();
        for (i, name) in ["3", "7", "11", "23"].iter().enumerate() {
            let label = format!("P{name}");
            d.label(&label, SubsetMask::singleton(4, i)).unwrap();
            imap.objects.insert(label, [DomainObject::new(*name)].into());
            table.push((vec![SubsetMask::singleton(4, i)], true));
        }
        d.label("X", SubsetMask::full(4)).unwrap();
        imap.objects.insert("X".into(), ["3", "7", "11", "23"].into_iter().map(DomainObject::new).collect());
        d.relations.push(DataRelation::table("P", 1, table));
        imap.relations.insert("P".into(), "prime".into());
        let mut sig = DomainSignature::new("mathematics");
        sig.add_class("Number", ["3", "7", "11", "23"]);
        sig.add_relation(RelationSymbol::new("prime", 1));
        (d, imap, sig)
    }

    #[test]
    fn numbers_become_prime_atoms() {
        let (d, imap, sig) = numbers();
        let i = interpret(&d, &imap, &sig).unwrap();
        let shown: Vec<String> = i.atoms.iter().map(GroundAtom::to_string).collect();
        assert_eq!(shown, ["prime(3)", "prime(7)", "prime(11)", "prime(23)"]);
        assert_eq!(i.assignments["X"].to_string(), "{3, 7, 11, 23}");
        assert_eq!(i.assignments["P3"], Value::object("3"));
    }

    #[test]
    fn empty_dstar_gives_no_atoms() {
        let (d, _, sig) = numbers();
        let empty = DStar::new(d.topology.clone());
        assert!(interpret(&empty, &InterpretationMap::default(), &sig).unwrap().atoms.is_empty());
    }

    #[test]
    fn unmapped_labels_and_relations_are_incomplete() {
        let (d, mut imap, sig) = numbers();
        imap.relations.clear();
        assert!(matches!(interpret(&d, &imap, &sig), Err(DomainError::Incomplete(_))));
        let (d, mut imap, sig) = numbers();
        imap.objects.remove("P7");
        assert!(matches!(interpret(&d, &imap, &sig), Err(DomainError::Incomplete(_))));
    }

    #[test]
    fn arity_clash_is_a_signature_error() {
        let (d, imap, mut sig) = numbers();
        sig.add_relation(RelationSymbol::new("prime", 2));
        assert!(matches!(interpret(&d, &imap, &sig), Err(DomainError::Signature(_))));
    }

    #[test]
    fn capital_of_china() {
        let ground = GroundSet::new(["c1", "c2", "b1"]).unwrap();
        let c = ground.mask_of(["c1", "c2"]).unwrap();
        let b = ground.mask_of(["b1"]).unwrap();
        let t = generate_topology(&ground, &[c, b]).unwrap();
        let mut d = DStar::new(t);
        d.label("C_d", c).unwrap();
        d.label("B_d", b).unwrap();
        d.relations.push(DataRelation::table("cap", 2, [(vec![b, c], true)]));
        let mut sig = DomainSignature::new("administration");
        sig.add_class("G", ["China"]).add_class("City", ["Beijing"]);
        let mut r = RelationSymbol::new("capital", 2);
        r.gloss = Some("{0} is the capital of {1}".into());
        sig.add_relation(r);
        let imap: InterpretationMap =
            serde_json::from_str(r#"{"objects": {"C_d": ["China"], "B_d": ["Beijing"]}, "relations": {"cap": "capital"}}"#).unwrap();
        let i = interpret(&d, &imap, &sig).unwrap();
        let atom = i.atoms.iter().next().unwrap();
        assert_eq!(sig.gloss(atom).unwrap(), "Beijing is the capital of China");
    }

    #[test]
    fn intersection_is_interpreted_on_labelled_sets() {
        let ground = GroundSet::new(["a", "b"]).unwrap();
        let t = FiniteTopology::discrete(ground);
        let mut d = DStar::new(t);
        d.label("A", SubsetMask::singleton(2, 0)).unwrap();
        d.label("X", SubsetMask::full(2)).unwrap();
        d.functions.push(DataFunction::Intersection);
        let mut sig = DomainSignature::new("sets");
        sig.add_class("S", ["a", "b"]);
        sig.add_function("meet", 2, []);
        let imap = InterpretationMap {
            objects: [
                ("A".to_string(), ["a"].into_iter().map(DomainObject::new).collect()),
                ("X".to_string(), ["a", "b"].into_iter().map(DomainObject::new).collect()),
            ]
            .into(),
            functions: [("intersection".to_string(), "meet".to_string())].into(),
            relations: BTreeMap::new(),
        };
        let i = interpret(&d, &imap, &sig).unwrap();
        assert!(i.atoms.contains(&GroundAtom::new("meet", vec![Value::set(["a", "b"]), Value::object("a"), Value::object("a")])));
        assert_eq!(i.atoms.len(), 4);
    }
}
