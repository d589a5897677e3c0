//! Forward chaining to the least fixpoint.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{HornRule, InferenceError};
use crate::domain::{AtomPattern, Bindings, DomainSignature, GroundAtom, Term};

/// How a derived atom was first obtained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Derivation {
    pub rule: String,
    pub bindings: Bindings,
    pub premises: Vec<GroundAtom>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Deduction {
    pub closure: BTreeSet<GroundAtom>,
    /// One entry per atom not among the input facts.
    pub derivations: BTreeMap<GroundAtom, Derivation>,
}

impl Deduction {
    pub fn derived(&self) -> impl Iterator<Item = (&GroundAtom, &Derivation)> {
        self.derivations.iter()
    }
}

/// Applies `rules` to `facts` until nothing new follows (semi-naive
/// evaluation). Variables annotated with a class only bind its members.
pub fn deduce(facts: &BTreeSet<GroundAtom>, rules: &[HornRule], sig: &DomainSignature) -> Result<Deduction, InferenceError> {
    for r in rules {
        r.check(sig)?;
    }
    let mut all = facts.clone();
    let mut derivations = BTreeMap::new();
    let mut delta = facts.clone();
    let mut first = true;
    loop {
        let old: BTreeSet<GroundAtom> = all.difference(&delta).cloned().collect();
        let mut fresh: BTreeMap<GroundAtom, Derivation> = BTreeMap::new();
        for rule in rules {
            if rule.body.is_empty() {
                if first {
                    let head = rule.head.instantiate(&Bindings::new()).expect("range-restricted");
                    if !all.contains(&head) {
                        fresh.entry(head).or_insert_with(|| Derivation { rule: rule.name.clone(), bindings: Bindings::new(), premises: vec![] });
                    }
                }
                continue;
            }
            // Body position `i` reads the newest atoms; earlier positions read
            // only older atoms so each match is found once.
            for i in 0..rule.body.len() {
                let sources: Vec<&BTreeSet<GroundAtom>> = (0..rule.body.len())
                    .map(|j| match j.cmp(&i) {
                        std::cmp::Ordering::Less => &old,
                        std::cmp::Ordering::Equal => &delta,
                        std::cmp::Ordering::Greater => &all,
                    })
                    .collect();
                let mut premises = Vec::with_capacity(rule.body.len());
                join(rule, &sources, 0, &Bindings::new(), &mut premises, sig, &mut |b, premises| {
                    let head = rule.head.instantiate(b).expect("range-restricted");
                    if !all.contains(&head) {
                        fresh.entry(head).or_insert_with(|| Derivation { rule: rule.name.clone(), bindings: b.clone(), premises: premises.to_vec() });
                    }
                });
            }
        }
        first = false;
        if fresh.is_empty() {
            break;
        }
        delta = fresh.keys().cloned().collect();
        all.extend(delta.iter().cloned());
        derivations.extend(fresh);
    }
    Ok(Deduction { closure: all, derivations })
}

fn class_ok(pattern: &AtomPattern, b: &Bindings, sig: &DomainSignature) -> bool {
    pattern.args.iter().all(|t| match t {
        Term::Var { name, class: Some(c) } => {
            let members = sig.class(c).expect("checked before evaluation");
            b.get(name).and_then(|v| v.as_object()).is_some_and(|o| members.contains(o))
        }
        _ => true,
    })
}

fn join<'a>(
    rule: &HornRule,
    sources: &[&'a BTreeSet<GroundAtom>],
    depth: usize,
    b: &Bindings,
    premises: &mut Vec<GroundAtom>,
    sig: &DomainSignature,
    emit: &mut dyn FnMut(&Bindings, &[GroundAtom]),
) {
    if depth == rule.body.len() {
        emit(b, premises);
        return;
    }
    let pattern = &rule.body[depth];
    for atom in sources[depth].iter().filter(|a| a.relation == pattern.relation) {
        if let Some(next) = pattern.unify(atom, b) {
            if class_ok(pattern, &next, sig) {
                premises.push(atom.clone());
                join(rule, sources, depth + 1, &next, premises, sig, emit);
                premises.pop();
            }
        }
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::domain::Value;
    use crate::inference::parse_rules;
    use proptest::prelude::*;

    /// Naive saturation: every binding of the rule variables over the active
    /// domain, repeated until nothing changes.
    pub(crate) fn saturate(facts: &BTreeSet<GroundAtom>, rules: &[HornRule], sig: &DomainSignature) -> BTreeSet<GroundAtom> {
        let mut domain: BTreeSet<Value> = facts.iter().flat_map(|a| a.args.iter().cloned()).collect();
        for r in rules {
            for a in r.body.iter().chain(std::iter::once(&r.head)) {
                for t in &a.args {
                    if let Term::Const(v) = t {
                        domain.insert(v.clone());
                    }
                }
            }
        }
        let domain: Vec<Value> = domain.into_iter().collect();
        let mut current = facts.clone();
        loop {
            let mut next = current.clone();
            for r in rules {
                let vars: Vec<String> =
                    r.body.iter().flat_map(AtomPattern::variables).map(String::from).collect::<BTreeSet<_>>().into_iter().collect();
                let mut idx = vec![0usize; vars.len()];
                loop {
                    if vars.is_empty() || !domain.is_empty() {
                        let b: Bindings = vars.iter().cloned().zip(idx.iter().map(|&i| domain[i].clone())).collect();
                        let body_ok = r.body.iter().all(|p| p.instantiate(&b).is_some_and(|a| current.contains(&a)) && class_ok(p, &b, sig));
                        if body_ok && class_ok(&r.head, &b, sig) {
                            next.insert(r.head.instantiate(&b).unwrap());
                        }
                    }
                    // Odometer over the domain.
                    let mut k = 0;
                    while k < idx.len() {
                        idx[k] += 1;
                        if idx[k] < domain.len() {
                            break;
                        }
                        idx[k] = 0;
                        k += 1;
                    }
                    if k == idx.len() {
                        break;
                    }
                }
            }
            if next == current {
                return current;
            }
            current = next;
        }
    }

    fn atoms(list: &[(&str, &[&str])]) -> BTreeSet<GroundAtom> {
        list.iter().map(|(r, a)| GroundAtom::of(r, a)).collect()
    }

    #[test]
    fn capital_implies_has_capital() {
        let mut sig = DomainSignature::new("administration");
        sig.add_class("G", ["China"]).add_class("City", ["Beijing"]);
        let rules = parse_rules("capital(X:City, Y:G) -> HasCapital(Y)").unwrap();
        let d = deduce(&atoms(&[("capital", &["Beijing", "China"])]), &rules, &sig).unwrap();
        let h = GroundAtom::of("HasCapital", &["China"]);
        assert!(d.closure.contains(&h));
        let why = &d.derivations[&h];
        assert_eq!(why.premises, vec![GroundAtom::of("capital", &["Beijing", "China"])]);
        assert_eq!(why.bindings["Y"], Value::object("China"));
    }

    #[test]
    fn empty_rules_and_chains() {
        let sig = DomainSignature::new("d");
        let facts = atoms(&[("p", &["a"])]);
        assert_eq!(deduce(&facts, &[], &sig).unwrap().closure, facts);
        let rules = parse_rules("p(X) -> q(X)\nq(X) -> s(X)").unwrap();
        let d = deduce(&facts, &rules, &sig).unwrap();
        assert_eq!(d.closure, atoms(&[("p", &["a"]), ("q", &["a"]), ("s", &["a"])]));
        assert_eq!(d.derivations[&GroundAtom::of("s", &["a"])].premises, vec![GroundAtom::of("q", &["a"])]);
    }

    #[test]
    fn class_annotations_filter_bindings() {
        let mut sig = DomainSignature::new("d");
        sig.add_class("C", ["a"]);
        let rules = parse_rules("p(X:C) -> q(X)").unwrap();
        let d = deduce(&atoms(&[("p", &["a"]), ("p", &["b"])]), &rules, &sig).unwrap();
        assert!(d.closure.contains(&GroundAtom::of("q", &["a"])));
        assert!(!d.closure.contains(&GroundAtom::of("q", &["b"])));
    }

    #[test]
    fn transitive_closure_matches_oracle() {
        let sig = DomainSignature::new("d");
        let rules = parse_rules("e(X, Y) -> t(X, Y)\nt(X, Y) & e(Y, Z) -> t(X, Z)").unwrap();
        let facts = atoms(&[("e", &["a", "b"]), ("e", &["b", "c"]), ("e", &["c", "d"]), ("e", &["d", "a"])]);
        let d = deduce(&facts, &rules, &sig).unwrap();
        assert_eq!(d.closure.iter().filter(|a| a.relation == "t").count(), 16);
        assert_eq!(d.closure, saturate(&facts, &rules, &sig));
    }

    fn arb_rules() -> impl Strategy<Value = (BTreeSet<GroundAtom>, Vec<HornRule>)> {
        let rels = ["p", "q", "r"];
        let consts = ["a", "b", "c"];
        let fact = (0..3usize, 0..3usize, 0..3usize).prop_map(move |(r, x, y)| {
            if r == 2 {
                GroundAtom::of(rels[r], &[consts[x], consts[y]])
            } else {
                GroundAtom::of(rels[r], &[consts[x]])
            }
        });
        let var = prop::sample::select(vec!["X", "Y", "Z"]);
        let pattern = (0..3usize, var.clone(), var).prop_map(move |(r, x, y)| {
            let args = if r == 2 { vec![Term::var(x), Term::var(y)] } else { vec![Term::var(x)] };
            AtomPattern::new(rels[r], args)
        });
        let rule = (prop::collection::vec(pattern.clone(), 1..3), pattern)
            .prop_filter_map("range restricted", |(body, head)| HornRule::new("r", body, head).ok());
        (prop::collection::btree_set(fact, 0..8), prop::collection::vec(rule, 0..5))
    }

    proptest! {
        #[test]
        fn semi_naive_matches_saturation((facts, rules) in arb_rules()) {
            let sig = DomainSignature::new("d");
            let d = deduce(&facts, &rules, &sig).unwrap();
            prop_assert_eq!(&d.closure, &saturate(&facts, &rules, &sig));
            prop_assert_eq!(deduce(&d.closure, &rules, &sig).unwrap().closure, d.closure.clone());
            for (atom, why) in &d.derivations {
                prop_assert!(!facts.contains(atom));
                prop_assert!(why.premises.iter().all(|p| d.closure.contains(p)));
            }
        }
    }
}
