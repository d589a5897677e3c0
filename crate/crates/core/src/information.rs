//! Pieces of information and information spaces.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::domain::{DomainObject, DomainSignature, GroundAtom, QuantifiedFormula};
use crate::topology::{alexandrov_topology, generate_topology, FiniteTopology, GroundSet, Preorder, SubsetMask, TopologyDoc, TopologyError};

#[derive(Debug, thiserror::Error)]
pub enum InformationError {
    #[error("constraint violated: {0}")]
    Constraint(String),
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

/// A propositional or quantified domain relation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(untagged)]
pub enum Relation {
    Atom(GroundAtom),
    Formula(QuantifiedFormula),
}

impl Relation {
    /// Objects the relation mentions: atom arguments or formula constants.
    pub fn objects(&self) -> BTreeSet<DomainObject> {
        match self {
            Self::Atom(a) => a.objects(),
            Self::Formula(f) => f.constants(),
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Atom(a) => write!(f, "{a}"),
            Self::Formula(q) => write!(f, "{q}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Provenance {
    Interpreted,
    /// Deduced from the pieces at these indices.
    Deduced {
        from: Vec<usize>,
    },
}

/// A pair ⟨O, R⟩ of domain objects and relations over them.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PieceOfInformation {
    pub objects: BTreeSet<DomainObject>,
    pub relations: BTreeSet<Relation>,
    pub provenance: Provenance,
}

impl PieceOfInformation {
    pub fn atoms(&self) -> BTreeSet<GroundAtom> {
        self.relations
            .iter()
            .filter_map(|r| match r {
                Relation::Atom(a) => Some(a.clone()),
                Relation::Formula(_) => None,
            })
            .collect()
    }

    pub fn formulas(&self) -> impl Iterator<Item = &QuantifiedFormula> {
        self.relations.iter().filter_map(|r| match r {
            Relation::Formula(q) => Some(q),
            Relation::Atom(_) => None,
        })
    }

    /// Every relation mentions only objects of `O`, derived objects, or
    /// classes' members used as formula constants.
    pub fn is_well_formed(&self, sig: &DomainSignature) -> bool {
        self.relations.iter().all(|r| match r {
            Relation::Atom(a) => a.objects().is_subset(&self.objects),
            Relation::Formula(q) => q.constants().iter().all(|c| self.objects.contains(c) || sig.knows_object(c)),
        })
    }

    /// `{Beijing, China}`: the object set, used as the piece's name.
    pub fn label(&self) -> String {
        let names: Vec<&str> = self.objects.iter().map(DomainObject::as_str).collect();
        format!("{{{}}}", names.join(", "))
    }
}

/// One piece per distinct object set among the relations, smaller sets first. The piece over `O`
/// holds every relation whose objects lie in `O`, so a piece over a larger
/// set also carries the relations of the pieces it contains.
pub fn build_pieces(atoms: &BTreeSet<GroundAtom>, formulas: &[QuantifiedFormula]) -> Vec<PieceOfInformation> {
    let relations: Vec<Relation> = atoms.iter().cloned().map(Relation::Atom).chain(formulas.iter().cloned().map(Relation::Formula)).collect();
    let object_sets: BTreeSet<BTreeSet<DomainObject>> = relations.iter().map(Relation::objects).collect();
    let mut pieces: Vec<PieceOfInformation> = object_sets
        .into_iter()
        .map(|objects| {
            let relations = relations
                .iter()
                .filter(|r| {
                    let o = r.objects();
                    match r {
                        Relation::Atom(_) => o.is_subset(&objects),
                        // Formulas without constants would otherwise join every piece.
                        Relation::Formula(_) => o == objects,
                    }
                })
                .cloned()
                .collect();
            PieceOfInformation { objects, relations, provenance: Provenance::Interpreted }
        })
        .collect();
    pieces.sort_by(|a, b| (a.objects.len(), &a.objects).cmp(&(b.objects.len(), &b.objects)));
    pieces
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StructureMode {
    DeductivePreorder,
    Induced,
}

/// A set of pieces with a topology on their indices. Ground elements are
/// named `s0`, `s1`, … in piece order.
#[derive(Debug, Clone)]
pub struct InformationSpace {
    pub pieces: Vec<PieceOfInformation>,
    pub structure: FiniteTopology,
    pub mode: StructureMode,
    /// The deductive preorder, when the structure was built from one.
    pub preorder: Option<Preorder>,
}

fn piece_ground(n: usize) -> Result<GroundSet, TopologyError> {
    GroundSet::new((0..n).map(|i| format!("s{i}")))
}

/// τ→: `a ⪯ b` iff every atom of `b` lies in the deductive closure of `a`'s
/// atoms and every quantified relation of `b` is already in `a`.
pub fn deductive_preorder_topology<F>(pieces: Vec<PieceOfInformation>, closure: F) -> Result<InformationSpace, InformationError>
where
    F: Fn(&BTreeSet<GroundAtom>) -> BTreeSet<GroundAtom>,
{
    let ground = piece_ground(pieces.len())?;
    let closures: Vec<BTreeSet<GroundAtom>> = pieces.iter().map(|p| closure(&p.atoms())).collect();
    let leq: Vec<Vec<bool>> = pieces
        .iter()
        .enumerate()
        .map(|(a, pa)| {
            pieces
                .iter()
                .map(|pb| pb.atoms().is_subset(&closures[a]) && pb.formulas().all(|q| pa.relations.contains(&Relation::Formula(q.clone()))))
                .collect()
        })
        .collect();
    let preorder = Preorder::from_matrix(ground, &leq)?;
    let structure = alexandrov_topology(&preorder);
    Ok(InformationSpace { pieces, structure, mode: StructureMode::DeductivePreorder, preorder: Some(preorder) })
}

/// The smallest structure containing the seed families, closed under ∩ and ∪.
/// Each seed must consist of pieces over one object set.
pub fn induced_structure(pieces: Vec<PieceOfInformation>, seeds: &[BTreeSet<usize>]) -> Result<InformationSpace, InformationError> {
    let ground = piece_ground(pieces.len())?;
    let mut masks = Vec::with_capacity(seeds.len());
    for seed in seeds {
        if let Some(&bad) = seed.iter().find(|&&i| i >= pieces.len()) {
            return Err(InformationError::Constraint(format!("seed refers to missing piece s{bad}")));
        }
        let mut iter = seed.iter();
        if let Some(&first) = iter.next() {
            if let Some(&other) = iter.find(|&&i| pieces[i].objects != pieces[first].objects) {
                return Err(InformationError::Constraint(format!(
                    "pieces s{first} over {} and s{other} over {} share a seed but not an object set",
                    pieces[first].label(),
                    pieces[other].label()
                )));
            }
        }
        masks.push(SubsetMask::from_indices(pieces.len(), seed.iter().copied()));
    }
    let structure = generate_topology(&ground, &masks)?;
    Ok(InformationSpace { pieces, structure, mode: StructureMode::Induced, preorder: None })
}

#[derive(Serialize)]
struct PieceEntry<'a> {
    id: String,
    label: String,
    #[serde(flatten)]
    piece: &'a PieceOfInformation,
    statements: Vec<String>,
}

#[derive(Serialize)]
struct SpaceDoc<'a> {
    mode: StructureMode,
    pieces: Vec<PieceEntry<'a>>,
    structure: TopologyDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    leq: Option<Vec<(String, String)>>,
}

impl InformationSpace {
    pub fn to_json(&self) -> serde_json::Value {
        let doc = SpaceDoc {
            mode: self.mode,
            pieces: self
                .pieces
                .iter()
                .enumerate()
                .map(|(i, p)| PieceEntry {
                    id: format!("s{i}"),
                    label: p.label(),
                    piece: p,
                    statements: p.relations.iter().map(Relation::to_string).collect(),
                })
                .collect(),
            structure: TopologyDoc::from_topology(&self.structure),
            leq: self.preorder.as_ref().map(|p| {
                let g = p.ground();
                p.pairs().filter(|(i, j)| i != j).map(|(i, j)| (g.name(i).to_string(), g.name(j).to_string())).collect()
            }),
        };
        serde_json::to_value(doc).expect("information space serializes")
    }

    /// Hasse diagram of the deductive preorder, `a -> b` when `b` follows
    /// from `a` with nothing strictly between.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph information {\n  rankdir=LR;\n  node [shape=box];\n");
        for (i, p) in self.pieces.iter().enumerate() {
            let _ = writeln!(out, "  s{i} [label=\"s{i} {}\"];", escape(&p.label()));
        }
        if let Some(p) = &self.preorder {
            let n = p.len();
            let strict = |i: usize, j: usize| p.leq(i, j) && !p.leq(j, i);
            for i in 0..n {
                for j in 0..n {
                    if i == j || !p.leq(i, j) {
                        continue;
                    }
                    if p.leq(j, i) {
                        if i < j {
                            let _ = writeln!(out, "  s{i} -> s{j} [dir=both];");
                        }
                        continue;
                    }
                    if !(0..n).any(|k| strict(i, k) && strict(k, j)) {
                        let _ = writeln!(out, "  s{i} -> s{j};");
                    }
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

pub(crate) fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Value;
    use crate::topology::{is_discrete, verify_topology};

    fn capital_rule(facts: &BTreeSet<GroundAtom>) -> BTreeSet<GroundAtom> {
        let mut out = facts.clone();
        for a in facts {
            if a.relation == "capital" && !a.negated {
                out.insert(GroundAtom::new("HasCapital", vec![a.args[1].clone()]));
            }
        }
        out
    }

    fn piece(atoms: &[GroundAtom]) -> PieceOfInformation {
        let objects = atoms.iter().flat_map(GroundAtom::objects).collect();
        PieceOfInformation { objects, relations: atoms.iter().cloned().map(Relation::Atom).collect(), provenance: Provenance::Interpreted }
    }

    #[test]
    fn numbers_form_one_piece_over_x() {
        let mut atoms: BTreeSet<GroundAtom> = ["3", "7", "11", "23"].iter().map(|n| GroundAtom::of("prime", &[n])).collect();
        atoms.insert(GroundAtom::new("average_is", vec![Value::set(["3", "7", "11", "23"]), Value::object("11")]));
        let pieces = build_pieces(&atoms, &[]);
        assert_eq!(pieces.len(), 5);
        let x = pieces.iter().find(|p| p.objects.len() == 4).unwrap();
        assert_eq!(x.relations.len(), 5);
        assert_eq!(x.label(), "{3, 7, 11, 23}");
    }

    #[test]
    fn china_and_beijing_pieces() {
        let atoms: BTreeSet<GroundAtom> =
            [GroundAtom::of("country", &["China"]), GroundAtom::of("city", &["Beijing"]), GroundAtom::of("capital", &["Beijing", "China"])].into();
        let pieces = build_pieces(&atoms, &[]);
        let labels: Vec<String> = pieces.iter().map(PieceOfInformation::label).collect();
        assert_eq!(labels, ["{Beijing}", "{China}", "{Beijing, China}"]);
        assert_eq!(pieces[2].relations.len(), 3);
        assert!(build_pieces(&BTreeSet::new(), &[]).is_empty());
    }

    #[test]
    fn deduction_orders_pieces() {
        let a = piece(&[GroundAtom::of("capital", &["Beijing", "China"])]);
        let b = piece(&[GroundAtom::of("HasCapital", &["China"])]);
        let space = deductive_preorder_topology(vec![a, b], capital_rule).unwrap();
        let p = space.preorder.as_ref().unwrap();
        assert!(p.leq(0, 1) && !p.leq(1, 0));
        assert!(verify_topology(space.structure.ground(), space.structure.opens()).unwrap().valid);
        assert!(space.to_dot().contains("s0 -> s1;"));
    }

    #[test]
    fn identical_and_unrelated_pieces() {
        let a = piece(&[GroundAtom::of("p", &["a"])]);
        let space = deductive_preorder_topology(vec![a.clone(), a], capital_rule).unwrap();
        assert_eq!(space.structure.len(), 2);
        let space =
            deductive_preorder_topology(vec![piece(&[GroundAtom::of("p", &["a"])]), piece(&[GroundAtom::of("q", &["b"])])], capital_rule).unwrap();
        assert!(is_discrete(&space.structure));
    }

    #[test]
    fn induced_structure_closes_seeds() {
        let pieces = vec![
            piece(&[GroundAtom::of("p", &["a"])]),
            piece(&[GroundAtom::of("q", &["a"])]),
            piece(&[GroundAtom::of("r", &["a"])]),
            piece(&[GroundAtom::of("r", &["b"])]),
        ];
        let u: BTreeSet<usize> = [0, 1].into();
        let v: BTreeSet<usize> = [1, 2].into();
        let space = induced_structure(pieces.clone(), std::slice::from_ref(&u)).unwrap();
        assert_eq!(space.structure.len(), 3);
        let space = induced_structure(pieces.clone(), &[u, v]).unwrap();
        let opens = space.structure.named_opens();
        assert!(opens.contains(&vec!["s1".to_string()]));
        assert!(opens.contains(&vec!["s0".to_string(), "s1".to_string(), "s2".to_string()]));
        let err = induced_structure(pieces, &[[2, 3].into()]).unwrap_err();
        assert!(err.to_string().contains("s2") && err.to_string().contains("s3"));
    }
}
