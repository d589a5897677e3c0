//! Domain relations: ground atoms, atom patterns, and quantified formulas.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{DomainError, DomainObject, DomainSignature, Value};

/// A propositional relation instance such as `capital(Beijing, China)`.
///
/// `negated` atoms record an explicit failure of the relation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroundAtom {
    pub relation: String,
    pub args: Vec<Value>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub negated: bool,
}

impl GroundAtom {
    pub fn new(relation: impl Into<String>, args: Vec<Value>) -> Self {
        Self { relation: relation.into(), args, negated: false }
    }

    pub fn negative(relation: impl Into<String>, args: Vec<Value>) -> Self {
        Self { relation: relation.into(), args, negated: true }
    }

    /// Shorthand for atoms over plain objects.
    pub fn of(relation: &str, args: &[&str]) -> Self {
        Self::new(relation, args.iter().map(|a| Value::object(a)).collect())
    }

    /// Same relation and arguments, opposite polarity.
    pub fn complement(&self) -> Self {
        Self { negated: !self.negated, ..self.clone() }
    }

    /// Objects mentioned by the arguments, with set arguments flattened.
    pub fn objects(&self) -> BTreeSet<DomainObject> {
        self.args.iter().flat_map(Value::objects).cloned().collect()
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("¬")?;
        }
        let args: Vec<String> = self.args.iter().map(Value::to_string).collect();
        write!(f, "{}({})", self.relation, args.join(", "))
    }
}

impl fmt::Debug for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A variable or a constant inside an atom pattern.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Term {
    /// A variable, optionally restricted to the members of a class.
    Var {
        name: String,
        class: Option<String>,
    },
    Const(Value),
}

impl Term {
    pub fn var(name: &str) -> Self {
        Self::Var { name: name.to_string(), class: None }
    }

    pub fn typed(name: &str, class: &str) -> Self {
        Self::Var { name: name.to_string(), class: Some(class.to_string()) }
    }

    pub fn constant(name: &str) -> Self {
        Self::Const(Value::object(name))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Var { name, class: Some(c) } => write!(f, "{name}:{c}"),
            Self::Var { name, class: None } => f.write_str(name),
            Self::Const(v) => write!(f, "{v}"),
        }
    }
}

pub type Bindings = BTreeMap<String, Value>;

/// An atom with variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AtomPattern {
    pub relation: String,
    pub args: Vec<Term>,
    #[serde(default)]
    pub negated: bool,
}

impl AtomPattern {
    pub fn new(relation: &str, args: Vec<Term>) -> Self {
        Self { relation: relation.to_string(), args, negated: false }
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.args.iter().filter_map(|t| match t {
            Term::Var { name, .. } => Some(name.as_str()),
            Term::Const(_) => None,
        })
    }

    /// Grounds the pattern; `None` if a variable is unbound.
    pub fn instantiate(&self, bindings: &Bindings) -> Option<GroundAtom> {
        let args = self
            .args
            .iter()
            .map(|t| match t {
                Term::Var { name, .. } => bindings.get(name).cloned(),
                Term::Const(v) => Some(v.clone()),
            })
            .collect::<Option<Vec<_>>>()?;
        Some(GroundAtom { relation: self.relation.clone(), args, negated: self.negated })
    }

    /// Extends `bindings` so that the pattern matches `atom`, ignoring class
    /// annotations.
    pub fn unify(&self, atom: &GroundAtom, bindings: &Bindings) -> Option<Bindings> {
        if atom.relation != self.relation || atom.negated != self.negated || atom.args.len() != self.args.len() {
            return None;
        }
        let mut out = bindings.clone();
        for (t, v) in self.args.iter().zip(&atom.args) {
            match t {
                Term::Const(c) if c != v => return None,
                Term::Const(_) => {}
                Term::Var { name, .. } => match out.get(name) {
                    Some(bound) if bound != v => return None,
                    Some(_) => {}
                    None => {
                        out.insert(name.clone(), v.clone());
                    }
                },
            }
        }
        Some(out)
    }
}

impl fmt::Display for AtomPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("!")?;
        }
        let args: Vec<String> = self.args.iter().map(Term::to_string).collect();
        write!(f, "{}({})", self.relation, args.join(", "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Quantifier {
    ForAll,
    Exists,
}

/// Quantifier-free matrix of a quantified formula.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Formula {
    Atom(AtomPattern),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |parts: &[Formula], sep: &str| parts.iter().map(|p| format!("({p})")).collect::<Vec<_>>().join(sep);
        match self {
            Self::Atom(a) => write!(f, "{a}"),
            Self::Not(inner) => write!(f, "¬({inner})"),
            Self::And(parts) => f.write_str(&join(parts, " ∧ ")),
            Self::Or(parts) => f.write_str(&join(parts, " ∨ ")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuantifierBinding {
    pub quantifier: Quantifier,
    pub var: String,
    pub class: String,
}

/// A relation with at least one quantifier, each ranging over a class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuantifiedFormula {
    pub prefix: Vec<QuantifierBinding>,
    pub matrix: Formula,
}

/// Conventional variable names for `n` universally bound positions.
pub fn variable_names(n: usize) -> Vec<String> {
    match n {
        0..=3 => ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect(),
        _ => (1..=n).map(|i| format!("x{i}")).collect(),
    }
}

impl QuantifiedFormula {
    /// `∀x₁∈C₁ … ∀xₙ∈Cₙ R(x₁, …, xₙ)`.
    pub fn universal(relation: &str, classes: &[String]) -> Self {
        let vars = variable_names(classes.len());
        let prefix =
            vars.iter().zip(classes).map(|(v, c)| QuantifierBinding { quantifier: Quantifier::ForAll, var: v.clone(), class: c.clone() }).collect();
        let matrix = Formula::Atom(AtomPattern::new(relation, vars.iter().map(|v| Term::var(v)).collect()));
        Self { prefix, matrix }
    }

    /// Constants mentioned in the matrix.
    pub fn constants(&self) -> BTreeSet<DomainObject> {
        fn walk(f: &Formula, out: &mut BTreeSet<DomainObject>) {
            match f {
                Formula::Atom(a) => {
                    for t in &a.args {
                        if let Term::Const(v) = t {
                            out.extend(v.objects().cloned());
                        }
                    }
                }
                Formula::Not(inner) => walk(inner, out),
                Formula::And(ps) | Formula::Or(ps) => ps.iter().for_each(|p| walk(p, out)),
            }
        }
        let mut out = BTreeSet::new();
        walk(&self.matrix, &mut out);
        out
    }

    /// Evaluates the formula against `facts` by enumerating every binding
    /// of the quantified classes.
    ///
    /// A positive atom holds iff it is a fact; a negated atom holds iff the
    /// explicit negative fact is present; `Not` is closed-world negation.
    /// On failure, returns the bindings of the leading universal block that
    /// falsify the rest of the formula.
    pub fn counterexample(&self, sig: &DomainSignature, facts: &BTreeSet<GroundAtom>) -> Result<Option<Bindings>, DomainError> {
        let mut domains = Vec::with_capacity(self.prefix.len());
        for q in &self.prefix {
            let members =
                sig.class(&q.class).ok_or_else(|| DomainError::Capability(format!("class `{}` is not declared as a finite class", q.class)))?;
            domains.push(members.iter().cloned().map(Value::Object).collect::<Vec<_>>());
        }
        let universal_block = self.prefix.iter().take_while(|q| q.quantifier == Quantifier::ForAll).count();
        let mut bindings = Bindings::new();
        Ok(self.search(0, universal_block, &domains, &mut bindings, facts)?.then_some(bindings))
    }

    pub fn holds(&self, sig: &DomainSignature, facts: &BTreeSet<GroundAtom>) -> Result<bool, DomainError> {
        Ok(self.counterexample(sig, facts)?.is_none())
    }

    // Returns true when a counterexample for the universal block was found,
    // leaving its bindings in `bindings`.
    fn search(
        &self,
        depth: usize,
        block: usize,
        domains: &[Vec<Value>],
        bindings: &mut Bindings,
        facts: &BTreeSet<GroundAtom>,
    ) -> Result<bool, DomainError> {
        if depth == block {
            return Ok(!self.eval_from(depth, domains, bindings, facts)?);
        }
        let var = &self.prefix[depth].var;
        for v in &domains[depth] {
            bindings.insert(var.clone(), v.clone());
            if self.search(depth + 1, block, domains, bindings, facts)? {
                return Ok(true);
            }
        }
        bindings.remove(var);
        Ok(false)
    }

    fn eval_from(&self, depth: usize, domains: &[Vec<Value>], bindings: &mut Bindings, facts: &BTreeSet<GroundAtom>) -> Result<bool, DomainError> {
        let Some(q) = self.prefix.get(depth) else {
            return eval_matrix(&self.matrix, bindings, facts);
        };
        let universal = q.quantifier == Quantifier::ForAll;
        let mut result = universal;
        for v in &domains[depth] {
            bindings.insert(q.var.clone(), v.clone());
            if self.eval_from(depth + 1, domains, bindings, facts)? != universal {
                result = !universal;
                break;
            }
        }
        bindings.remove(&q.var);
        Ok(result)
    }
}

fn eval_matrix(f: &Formula, bindings: &Bindings, facts: &BTreeSet<GroundAtom>) -> Result<bool, DomainError> {
    match f {
        Formula::Atom(a) => {
            let atom = a.instantiate(bindings).ok_or_else(|| DomainError::Signature(format!("free variable in `{a}`")))?;
            Ok(facts.contains(&atom))
        }
        Formula::Not(inner) => Ok(!eval_matrix(inner, bindings, facts)?),
        Formula::And(ps) => {
            for p in ps {
                if !eval_matrix(p, bindings, facts)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Or(ps) => {
            for p in ps {
                if eval_matrix(p, bindings, facts)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}

impl fmt::Display for QuantifiedFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in &self.prefix {
            let sym = match q.quantifier {
                Quantifier::ForAll => '∀',
                Quantifier::Exists => '∃',
            };
            write!(f, "{sym}{}∈{} ", q.var, q.class)?;
        }
        write!(f, "{}", self.matrix)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> DomainSignature {
        let mut s = DomainSignature::new("administration");
        s.add_class("G", ["China", "France", "Japan"]);
        s
    }

    #[test]
    fn display_forms() {
        let a = GroundAtom::of("capital", &["Beijing", "China"]);
        assert_eq!(a.to_string(), "capital(Beijing, China)");
        assert_eq!(a.complement().to_string(), "¬capital(Beijing, China)");
        let q = QuantifiedFormula::universal("HasCapital", &["G".to_string()]);
        assert_eq!(q.to_string(), "∀x∈G HasCapital(x)");
    }

    #[test]
    fn universal_counterexample() {
        let s = sig();
        let q = QuantifiedFormula::universal("HasCapital", &["G".to_string()]);
        let mut facts: BTreeSet<GroundAtom> = ["China", "France", "Japan"].iter().map(|c| GroundAtom::of("HasCapital", &[c])).collect();
        assert!(q.holds(&s, &facts).unwrap());
        facts.remove(&GroundAtom::of("HasCapital", &["France"]));
        let w = q.counterexample(&s, &facts).unwrap().unwrap();
        assert_eq!(w.get("x"), Some(&Value::object("France")));
    }

    #[test]
    fn existential_inside_universal() {
        let mut s = sig();
        s.add_class("City", ["Beijing", "Paris"]);
        // ∀x∈G ∃y∈City capital(y, x)
        let q = QuantifiedFormula {
            prefix: vec![
                QuantifierBinding { quantifier: Quantifier::ForAll, var: "x".into(), class: "G".into() },
                QuantifierBinding { quantifier: Quantifier::Exists, var: "y".into(), class: "City".into() },
            ],
            matrix: Formula::Atom(AtomPattern::new("capital", vec![Term::var("y"), Term::var("x")])),
        };
        let facts: BTreeSet<GroundAtom> = [GroundAtom::of("capital", &["Beijing", "China"]), GroundAtom::of("capital", &["Paris", "France"])].into();
        let w = q.counterexample(&s, &facts).unwrap().unwrap();
        assert_eq!(w, Bindings::from([("x".to_string(), Value::object("Japan"))]));
    }

    #[test]
    fn undeclared_class_is_a_capability_error() {
        let q = QuantifiedFormula::universal("p", &["Nowhere".to_string()]);
        assert!(matches!(q.holds(&sig(), &BTreeSet::new()), Err(DomainError::Capability(_))));
    }

    #[test]
    fn unify_respects_bindings() {
        let p = AtomPattern::new("capital", vec![Term::var("X"), Term::var("X")]);
        assert!(p.unify(&GroundAtom::of("capital", &["a", "b"]), &Bindings::new()).is_none());
        assert!(p.unify(&GroundAtom::of("capital", &["a", "a"]), &Bindings::new()).is_some());
    }
}
