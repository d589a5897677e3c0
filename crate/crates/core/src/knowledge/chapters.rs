//! Pairing declarative and procedural sections into chapters.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{decompose_sections, DerivationDag, KnowledgeError, KnowledgeSection};

/// When a declarative object `a` and a procedural object `b` count as
/// cross-related in the dual-section condition.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChapterRule {
    /// `a ↠ b` or `b ↠ a`, as in the cross-derivation assumption.
    #[default]
    Linked,
    /// Every `a` derives some `b`, and every `b` derives some `a`. Across an
    /// acyclic derivation order this needs two-way cross edges.
    Directed,
}

/// Objects that violate the cross-derivation assumption: no cross
/// derivation in either direction.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AssumptionReport {
    pub declarative_unlinked: Vec<String>,
    pub procedural_unlinked: Vec<String>,
}

impl AssumptionReport {
    pub fn holds(&self) -> bool {
        self.declarative_unlinked.is_empty() && self.procedural_unlinked.is_empty()
    }

    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        if !self.declarative_unlinked.is_empty() {
            parts.push(format!("declarative objects without a procedural link: {}", self.declarative_unlinked.join(", ")));
        }
        if !self.procedural_unlinked.is_empty() {
            parts.push(format!("procedural objects without a declarative link: {}", self.procedural_unlinked.join(", ")));
        }
        if parts.is_empty() {
            "assumption holds".into()
        } else {
            parts.join("; ")
        }
    }
}

/// Cross derivations `(from, to)` between the two spaces.
pub type CrossEdges = BTreeSet<(String, String)>;

pub fn check_assumption(k_t: &DerivationDag, k_p: &DerivationDag, cross: &CrossEdges) -> AssumptionReport {
    let linked: BTreeSet<&str> = cross.iter().flat_map(|(a, b)| [a.as_str(), b.as_str()]).collect();
    AssumptionReport {
        declarative_unlinked: k_t.ids().iter().filter(|id| !linked.contains(id.as_str())).cloned().collect(),
        procedural_unlinked: k_p.ids().iter().filter(|id| !linked.contains(id.as_str())).cloned().collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Chapter {
    pub k_t: KnowledgeSection,
    pub k_p: KnowledgeSection,
    /// Cross edges between the two sides.
    pub cross_edges: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChapterDecomposition {
    pub rule: ChapterRule,
    pub sections_t: Vec<KnowledgeSection>,
    pub sections_p: Vec<KnowledgeSection>,
    pub chapters: Vec<Chapter>,
    /// Section pairs `(i, j)` with cross edges that host no chapter.
    pub empty_pairs: Vec<(usize, usize)>,
}

/// For each pair of complete sections, the largest sub-chains satisfying the
/// dual-section condition (a greatest fixpoint). Fails when the
/// cross-derivation assumption does not hold.
pub fn decompose_chapters(
    k_t: &DerivationDag,
    k_p: &DerivationDag,
    cross: &CrossEdges,
    rule: ChapterRule,
) -> Result<ChapterDecomposition, KnowledgeError> {
    for (a, b) in cross {
        let ok = (k_t.contains(a) && k_p.contains(b)) || (k_p.contains(a) && k_t.contains(b));
        if !ok {
            return Err(KnowledgeError::Unknown(format!("cross edge {a} ↠ {b} does not join the two spaces")));
        }
    }
    let report = check_assumption(k_t, k_p, cross);
    if !report.holds() {
        return Err(KnowledgeError::Capability(report.describe()));
    }
    let has = |a: &str, b: &str| cross.contains(&(a.to_string(), b.to_string()));
    // t_ok(a, b): declarative `a` is satisfied by procedural `b`; p_ok the converse.
    let t_ok = |a: &str, b: &str| match rule {
        ChapterRule::Linked => has(a, b) || has(b, a),
        ChapterRule::Directed => has(a, b),
    };
    let p_ok = |b: &str, a: &str| match rule {
        ChapterRule::Linked => has(a, b) || has(b, a),
        ChapterRule::Directed => has(b, a),
    };
    let sections_t = decompose_sections(k_t);
    let sections_p = decompose_sections(k_p);
    let mut chapters = Vec::new();
    let mut empty_pairs = Vec::new();
    for (i, st) in sections_t.iter().enumerate() {
        for (j, sp) in sections_p.iter().enumerate() {
            let any = st.members.iter().any(|a| sp.members.iter().any(|b| has(a, b) || has(b, a)));
            if !any {
                continue;
            }
            let mut ts: Vec<&String> = st.members.iter().collect();
            let mut ps: Vec<&String> = sp.members.iter().collect();
            loop {
                let ts2: Vec<&String> = ts.iter().copied().filter(|a| ps.iter().any(|b| t_ok(a, b))).collect();
                let ps2: Vec<&String> = ps.iter().copied().filter(|b| ts2.iter().any(|a| p_ok(b, a))).collect();
                if ts2.len() == ts.len() && ps2.len() == ps.len() {
                    break;
                }
                ts = ts2;
                ps = ps2;
            }
            if ts.is_empty() || ps.is_empty() {
                empty_pairs.push((i, j));
                continue;
            }
            let cross_edges =
                cross.iter().filter(|(a, b)| (ts.contains(&a) && ps.contains(&b)) || (ps.contains(&a) && ts.contains(&b))).cloned().collect();
            let side = |members: Vec<&String>, whole: &KnowledgeSection| KnowledgeSection {
                form: whole.form,
                members: members.into_iter().cloned().collect(),
            };
            chapters.push(Chapter { k_t: side(ts, st), k_p: side(ps, sp), cross_edges });
        }
    }
    Ok(ChapterDecomposition { rule, sections_t, sections_p, chapters, empty_pairs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dag(nodes: &[&str], edges: &[(&str, &str)]) -> DerivationDag {
        DerivationDag::new(nodes.iter().copied(), edges.iter().copied()).unwrap()
    }

    fn cross(edges: &[(&str, &str)]) -> CrossEdges {
        edges.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    }

    #[test]
    fn mutual_pairs_form_one_chapter() {
        let t = dag(&["t1", "t2"], &[("t1", "t2")]);
        let p = dag(&["p1", "p2"], &[("p1", "p2")]);
        let c = cross(&[("t1", "p1"), ("p1", "t1"), ("t2", "p2"), ("p2", "t2")]);
        for rule in [ChapterRule::Linked, ChapterRule::Directed] {
            let d = decompose_chapters(&t, &p, &c, rule).unwrap();
            assert_eq!(d.chapters.len(), 1);
            assert_eq!(d.chapters[0].k_t.members, ["t1", "t2"]);
            assert_eq!(d.chapters[0].k_p.members, ["p1", "p2"]);
        }
    }

    #[test]
    fn singletons() {
        let d = decompose_chapters(&dag(&["t"], &[]), &dag(&["p"], &[]), &cross(&[("t", "p"), ("p", "t")]), ChapterRule::Directed).unwrap();
        assert_eq!(d.chapters.len(), 1);
        assert_eq!(d.chapters[0].k_t.form, crate::knowledge::SectionForm::Isolated);
    }

    #[test]
    fn separate_pairs_give_two_chapters() {
        let t = dag(&["t1", "t2", "t3", "t4"], &[("t1", "t2"), ("t3", "t4")]);
        let p = dag(&["p1", "p2", "p3", "p4"], &[("p1", "p2"), ("p3", "p4")]);
        let c = cross(&[("t1", "p1"), ("t2", "p2"), ("p3", "t3"), ("t4", "p4")]);
        let d = decompose_chapters(&t, &p, &c, ChapterRule::Linked).unwrap();
        assert_eq!(d.chapters.len(), 2);
        assert!(d.empty_pairs.is_empty());
        // One-way edges leave the directed reading with nothing.
        let d = decompose_chapters(&t, &p, &c, ChapterRule::Directed).unwrap();
        assert!(d.chapters.is_empty());
        assert_eq!(d.empty_pairs.len(), 2);
    }

    #[test]
    fn assumption_failures() {
        let t = dag(&["t1", "t2"], &[]);
        let p = dag(&["p1", "p2"], &[]);
        let full = cross(&[("t1", "p1"), ("t1", "p2"), ("t2", "p1"), ("t2", "p2")]);
        assert!(check_assumption(&t, &p, &full).holds());
        let r = check_assumption(&t, &p, &cross(&[("t1", "p1"), ("t2", "p1")]));
        assert_eq!(r.procedural_unlinked, ["p2"]);
        let empty = dag(&[], &[]);
        let r = check_assumption(&t, &empty, &CrossEdges::new());
        assert_eq!(r.declarative_unlinked, ["t1", "t2"]);
        assert!(matches!(decompose_chapters(&t, &empty, &CrossEdges::new(), ChapterRule::Linked), Err(KnowledgeError::Capability(_))));
    }
}
