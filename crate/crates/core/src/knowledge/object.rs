use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{CrossEdges, DerivationDag, KnowledgeError};
use crate::domain::{GroundAtom, MethodSpec, OperationTrace, QuantifiedFormula};
use crate::inference::{Outcome, ValidationRecord};
use crate::information::PieceOfInformation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KnowledgeKind {
    Declarative,
    Procedural,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "type", content = "value")]
pub enum KnowledgeContent {
    Atom(GroundAtom),
    Formula(QuantifiedFormula),
    Piece(PieceOfInformation),
    Method(MethodSpec),
    Trace(OperationTrace),
    /// A record of an activity that produced other objects, such as an
    /// interpretation run, a deduction step, or a verification.
    Record {
        activity: String,
        summary: String,
    },
}

impl KnowledgeContent {
    pub fn kind(&self) -> KnowledgeKind {
        match self {
            Self::Atom(_) | Self::Formula(_) | Self::Piece(_) => KnowledgeKind::Declarative,
            Self::Method(_) | Self::Trace(_) | Self::Record { .. } => KnowledgeKind::Procedural,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KnowledgeObject {
    pub id: String,
    pub kind: KnowledgeKind,
    pub content: KnowledgeContent,
    pub validation: ValidationRecord,
}

impl KnowledgeObject {
    /// Only validated content is admitted.
    pub fn new(id: impl Into<String>, content: KnowledgeContent, validation: ValidationRecord) -> Result<Self, KnowledgeError> {
        let id = id.into();
        if validation.outcome != Outcome::Valid {
            return Err(KnowledgeError::Admission(format!("`{id}` has validation outcome {:?}", validation.outcome)));
        }
        Ok(Self { id, kind: content.kind(), content, validation })
    }
}

/// The declarative space K_T, the procedural space K_P, and the derivations
/// between them. Both spaces carry the global derivation order restricted to
/// their objects.
#[derive(Debug, Clone)]
pub struct KnowledgeSpaces {
    pub objects: BTreeMap<String, KnowledgeObject>,
    pub k_t: DerivationDag,
    pub k_p: DerivationDag,
    pub cross: CrossEdges,
}

pub fn build_knowledge_spaces(objects: Vec<KnowledgeObject>, edges: &[(String, String)]) -> Result<KnowledgeSpaces, KnowledgeError> {
    let mut by_id = BTreeMap::new();
    for o in objects {
        if o.validation.outcome != Outcome::Valid {
            return Err(KnowledgeError::Admission(format!("`{}` is not validated", o.id)));
        }
        if by_id.contains_key(&o.id) {
            return Err(KnowledgeError::Admission(format!("duplicate object `{}`", o.id)));
        }
        by_id.insert(o.id.clone(), o);
    }
    let kinds: BTreeMap<String, KnowledgeKind> = by_id.iter().map(|(k, o)| (k.clone(), o.kind)).collect();
    spaces_from_kinds(&kinds, edges).map(|(k_t, k_p, cross)| KnowledgeSpaces { objects: by_id, k_t, k_p, cross })
}

fn spaces_from_kinds(
    kinds: &BTreeMap<String, KnowledgeKind>,
    edges: &[(String, String)],
) -> Result<(DerivationDag, DerivationDag, CrossEdges), KnowledgeError> {
    let global = DerivationDag::new(kinds.keys(), edges.iter().map(|(a, b)| (a, b)))?;
    let kind = |i: usize| kinds[global.id(i)];
    let mut within: BTreeMap<KnowledgeKind, Vec<(&str, &str)>> = BTreeMap::new();
    let mut cross = CrossEdges::new();
    for i in 0..global.len() {
        for j in 0..global.len() {
            if !global.reaches(i, j) {
                continue;
            }
            if kind(i) == kind(j) {
                within.entry(kind(i)).or_default().push((global.id(i), global.id(j)));
            } else {
                cross.insert((global.id(i).to_string(), global.id(j).to_string()));
            }
        }
    }
    let space = |k: KnowledgeKind| {
        let nodes: Vec<&str> = kinds.iter().filter(|(_, v)| **v == k).map(|(id, _)| id.as_str()).collect();
        DerivationDag::new(nodes, within.get(&k).cloned().unwrap_or_default())
    };
    Ok((space(KnowledgeKind::Declarative)?, space(KnowledgeKind::Procedural)?, cross))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectEntry {
    pub id: String,
    pub kind: KnowledgeKind,
    /// Human-readable content.
    pub content: String,
    /// How the object was validated.
    pub validation: String,
}

/// Flat exchange form of a knowledge base: objects, direct derivation edges,
/// and the derived cross edges between the two spaces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KnowledgeBaseDoc {
    pub objects: Vec<ObjectEntry>,
    pub edges: Vec<(String, String)>,
    #[serde(default)]
    pub cross: Vec<(String, String)>,
}

impl KnowledgeBaseDoc {
    pub fn new(spaces: &KnowledgeSpaces, edges: &[(String, String)]) -> Self {
        let objects = spaces
            .objects
            .values()
            .map(|o| ObjectEntry {
                id: o.id.clone(),
                kind: o.kind,
                content: describe(&o.content),
                validation: match &o.validation.note {
                    Some(n) => format!("{}: {n}", method_name(o)),
                    None => method_name(o).to_string(),
                },
            })
            .collect();
        let edges: BTreeSet<(String, String)> = edges.iter().cloned().collect();
        Self { objects, edges: edges.into_iter().collect(), cross: spaces.cross.iter().cloned().collect() }
    }

    /// Rebuilds K_T, K_P and the cross edges. Listed cross edges must agree
    /// with the derivation order.
    pub fn to_spaces(&self) -> Result<(DerivationDag, DerivationDag, CrossEdges), KnowledgeError> {
        let mut kinds = BTreeMap::new();
        for o in &self.objects {
            if kinds.insert(o.id.clone(), o.kind).is_some() {
                return Err(KnowledgeError::Admission(format!("duplicate object `{}`", o.id)));
            }
        }
        let mut edges = self.edges.clone();
        edges.extend(self.cross.iter().cloned());
        spaces_from_kinds(&kinds, &edges)
    }
}

fn method_name(o: &KnowledgeObject) -> &'static str {
    use crate::inference::ValidationMethod::*;
    match o.validation.method {
        ByAssumption => "by assumption",
        ByBelief => "by belief",
        ByExhaustiveVerification => "by exhaustive verification",
    }
}

fn describe(c: &KnowledgeContent) -> String {
    match c {
        KnowledgeContent::Atom(a) => a.to_string(),
        KnowledgeContent::Formula(f) => f.to_string(),
        KnowledgeContent::Piece(p) => format!("piece over {}", p.label()),
        KnowledgeContent::Method(m) => {
            let steps: Vec<String> = m.instructions.iter().map(|i| format!("{} := {}", i.result, i.function)).collect();
            format!("method {} [{}]", m.name, steps.join("; "))
        }
        KnowledgeContent::Trace(t) => {
            let outs: Vec<String> = t.outputs.iter().map(|v| v.to_string()).collect();
            format!("{} operations of {} giving {}", t.operations.len(), t.method, outs.join(", "))
        }
        KnowledgeContent::Record { activity, summary } => format!("{activity}: {summary}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::DomainSignature;
    use crate::inference::{validate, Target, ValidationMethod};

    fn assumed(id: &str, content: KnowledgeContent) -> KnowledgeObject {
        let f = QuantifiedFormula::universal("p", &[]);
        let v = validate(Target::Formula(&f), ValidationMethod::ByAssumption, &DomainSignature::new("d"), &BTreeSet::new()).unwrap();
        KnowledgeObject::new(id, content, v).unwrap()
    }

    fn record(id: &str) -> KnowledgeObject {
        assumed(id, KnowledgeContent::Record { activity: "deduction".into(), summary: id.into() })
    }

    fn pairs(list: &[(&str, &str)]) -> Vec<(String, String)> {
        list.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    }

    #[test]
    fn china_chain_through_procedural_records() {
        let objects = vec![
            assumed("capital(Beijing, China)", KnowledgeContent::Atom(GroundAtom::of("capital", &["Beijing", "China"]))),
            assumed("HasCapital(China)", KnowledgeContent::Atom(GroundAtom::of("HasCapital", &["China"]))),
            assumed("∀x∈G HasCapital(x)", KnowledgeContent::Formula(QuantifiedFormula::universal("HasCapital", &["G".into()]))),
            record("proof"),
            record("verify"),
        ];
        let edges = pairs(&[
            ("capital(Beijing, China)", "proof"),
            ("proof", "HasCapital(China)"),
            ("HasCapital(China)", "verify"),
            ("verify", "∀x∈G HasCapital(x)"),
        ]);
        let s = build_knowledge_spaces(objects, &edges).unwrap();
        assert_eq!(s.k_t.len(), 3);
        let sections = crate::knowledge::decompose_sections(&s.k_t);
        assert_eq!(sections.len(), 1);
        assert_eq!(sections[0].members, ["capital(Beijing, China)", "HasCapital(China)", "∀x∈G HasCapital(x)"]);
        assert!(s.cross.contains(&("capital(Beijing, China)".to_string(), "verify".to_string())));

        let doc = KnowledgeBaseDoc::new(&s, &edges);
        let json = serde_json::to_string(&doc).unwrap();
        let back: KnowledgeBaseDoc = serde_json::from_str(&json).unwrap();
        let (t, p, cross) = back.to_spaces().unwrap();
        assert_eq!((t, p, cross), (s.k_t.clone(), s.k_p.clone(), s.cross.clone()));
    }

    #[test]
    fn method_and_trace() {
        let objects = vec![record("method:m"), record("trace:m")];
        let s = build_knowledge_spaces(objects, &pairs(&[("method:m", "trace:m")])).unwrap();
        assert!(s.k_p.reaches(0, 1));
    }

    #[test]
    fn unvalidated_and_cyclic_inputs_are_rejected() {
        let mut bad = record("x");
        bad.validation.outcome = Outcome::Invalid;
        assert!(matches!(build_knowledge_spaces(vec![bad], &[]), Err(KnowledgeError::Admission(_))));
        let err = build_knowledge_spaces(vec![record("a"), record("b")], &pairs(&[("a", "b"), ("b", "a")])).unwrap_err();
        assert!(matches!(err, KnowledgeError::Order(_)));
    }
}
