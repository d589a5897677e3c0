//! Horn rules and their line-oriented text format.
//!
//! ```text
//! # comment
//! capital(X:City, Y:G) -> HasCapital(Y)
//! chain: p(X) & q(X, "Paris") -> r(X)
//! ```
//!
//! Identifiers starting with an uppercase letter or `_` are variables and may
//! carry a class annotation `X:Class`. Constants are quoted strings, bare
//! lowercase identifiers, numbers, or sets `{a, b}`. A leading `!` marks an
//! explicit negative atom.

use std::collections::BTreeSet;
use std::fmt;

use super::InferenceError;
use crate::domain::{AtomPattern, DomainObject, DomainSignature, Term, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HornRule {
    pub name: String,
    pub body: Vec<AtomPattern>,
    pub head: AtomPattern,
}

impl HornRule {
    /// Builds a rule, rejecting head variables that the body does not bind.
    pub fn new(name: &str, body: Vec<AtomPattern>, head: AtomPattern) -> Result<Self, String> {
        let bound: BTreeSet<&str> = body.iter().flat_map(AtomPattern::variables).collect();
        if let Some(v) = head.variables().find(|v| !bound.contains(v)) {
            return Err(format!("head variable `{v}` does not occur in the body"));
        }
        Ok(Self { name: name.to_string(), body, head })
    }

    /// Class annotations of each variable, in first-occurrence order.
    pub fn classes(&self) -> Vec<(&str, &str)> {
        let mut out = Vec::new();
        for a in self.body.iter().chain(std::iter::once(&self.head)) {
            for t in &a.args {
                if let Term::Var { name, class: Some(c) } = t {
                    out.push((name.as_str(), c.as_str()));
                }
            }
        }
        out
    }

    /// Checks class annotations and arities of declared relations.
    pub fn check(&self, sig: &DomainSignature) -> Result<(), InferenceError> {
        for (v, c) in self.classes() {
            if sig.class(c).is_none() {
                return Err(InferenceError::Signature(format!("rule `{}`: variable {v} has unknown class `{c}`", self.name)));
            }
        }
        for a in self.body.iter().chain(std::iter::once(&self.head)) {
            if let Some(r) = sig.relation(&a.relation) {
                if r.arity != a.args.len() {
                    return Err(InferenceError::Signature(format!(
                        "rule `{}`: `{}` has arity {} but is used with {} arguments",
                        self.name,
                        a.relation,
                        r.arity,
                        a.args.len()
                    )));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for HornRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.body.iter().map(AtomPattern::to_string).collect();
        write!(f, "{}: {} -> {}", self.name, body.join(" & "), self.head)
    }
}

/// Parses a rule file. Unnamed rules are called `r1`, `r2`, … by line.
pub fn parse_rules(text: &str) -> Result<Vec<HornRule>, InferenceError> {
    let mut rules = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = strip_comment(raw).trim();
        if content.is_empty() {
            continue;
        }
        let rule = parse_rule(content, rules.len() + 1).map_err(|message| InferenceError::Rule { line, message })?;
        if rules.iter().any(|r: &HornRule| r.name == rule.name) {
            return Err(InferenceError::Rule { line, message: format!("duplicate rule name `{}`", rule.name) });
        }
        rules.push(rule);
    }
    Ok(rules)
}

fn strip_comment(line: &str) -> &str {
    let mut in_quote = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => in_quote = !in_quote,
            '#' if !in_quote => return &line[..i],
            _ => {}
        }
    }
    line
}

fn parse_rule(content: &str, ordinal: usize) -> Result<HornRule, String> {
    let mut p = Parser { s: content, pos: 0 };
    p.skip_ws();
    let mut name = format!("r{ordinal}");
    // A leading `ident:` before any `(` names the rule.
    if let (Some(colon), paren) = (content.find(':'), content.find('(')) {
        if paren.is_none_or(|q| colon < q) {
            let candidate = content[..colon].trim();
            if !candidate.is_empty() && candidate.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '-') {
                name = candidate.to_string();
                p.pos = colon + 1;
            } else {
                return Err(format!("invalid rule name `{candidate}`"));
            }
        }
    }
    let mut body = Vec::new();
    p.skip_ws();
    if !p.eat("->") {
        loop {
            body.push(p.atom()?);
            p.skip_ws();
            if p.eat("&") {
                continue;
            }
            if p.eat("->") {
                break;
            }
            return Err(p.unexpected("`&` or `->`"));
        }
    }
    let head = p.atom()?;
    p.skip_ws();
    if p.pos < p.s.len() {
        return Err(p.unexpected("end of rule"));
    }
    HornRule::new(&name, body, head)
}

struct Parser<'a> {
    s: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn rest(&self) -> &str {
        &self.s[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.s.len() - trimmed.len();
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn unexpected(&self, wanted: &str) -> String {
        match self.peek() {
            Some(c) => format!("column {}: expected {wanted}, found `{c}`", self.pos + 1),
            None => format!("column {}: expected {wanted}, found end of line", self.pos + 1),
        }
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let len = self.rest().find(|c: char| !(c.is_alphanumeric() || c == '_' || c == '.' || c == '-')).unwrap_or(self.rest().len());
        if len == 0 {
            return None;
        }
        let start = self.pos;
        self.pos += len;
        Some(self.s[start..start + len].to_string())
    }

    fn atom(&mut self) -> Result<AtomPattern, String> {
        let negated = self.eat("!");
        self.skip_ws();
        let Some(relation) = self.ident() else {
            return Err(self.unexpected("a relation name"));
        };
        if !self.eat("(") {
            return Err(self.unexpected("`(`"));
        }
        let mut args = Vec::new();
        if !self.eat(")") {
            loop {
                args.push(self.term()?);
                if self.eat(",") {
                    continue;
                }
                if self.eat(")") {
                    break;
                }
                return Err(self.unexpected("`,` or `)`"));
            }
        }
        Ok(AtomPattern { relation, args, negated })
    }

    fn term(&mut self) -> Result<Term, String> {
        self.skip_ws();
        match self.peek() {
            Some('"') => Ok(Term::Const(Value::Object(self.quoted()?))),
            Some('{') => {
                self.pos += 1;
                let mut members = BTreeSet::new();
                if !self.eat("}") {
                    loop {
                        members.insert(self.object()?);
                        if self.eat(",") {
                            continue;
                        }
                        if self.eat("}") {
                            break;
                        }
                        return Err(self.unexpected("`,` or `}`"));
                    }
                }
                Ok(Term::Const(Value::Set(members)))
            }
            Some(c) if c.is_uppercase() || c == '_' => {
                let name = self.ident().expect("starts with an identifier character");
                if self.rest().starts_with(':') {
                    self.pos += 1;
                    let Some(class) = self.ident() else {
                        return Err(self.unexpected("a class name"));
                    };
                    Ok(Term::Var { name, class: Some(class) })
                } else {
                    Ok(Term::Var { name, class: None })
                }
            }
            _ => Ok(Term::Const(Value::Object(self.object()?))),
        }
    }

    fn object(&mut self) -> Result<DomainObject, String> {
        self.skip_ws();
        if self.peek() == Some('"') {
            return self.quoted();
        }
        match self.ident() {
            Some(id) if id.starts_with(|c: char| c.is_uppercase()) => Err(format!("uppercase constant `{id}` must be quoted")),
            Some(id) => Ok(DomainObject::new(id)),
            None => Err(self.unexpected("a term")),
        }
    }

    fn quoted(&mut self) -> Result<DomainObject, String> {
        let start = self.pos + 1;
        match self.s[start..].find('"') {
            Some(len) => {
                self.pos = start + len + 1;
                Ok(DomainObject::new(&self.s[start..start + len]))
            }
            None => Err(format!("column {}: unterminated string", self.pos + 1)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_typed_rules_and_comments() {
        let rules =
            parse_rules("# capitals\ncapital(X:City, Y:G) -> HasCapital(Y)  # trailing\n\nnamed: p(X) & q(X, \"Paris\", 3, {a, b}) -> !r(X)\n")
                .unwrap();
        assert_eq!(rules.len(), 2);
        assert_eq!(rules[0].to_string(), "r1: capital(X:City, Y:G) -> HasCapital(Y)");
        assert_eq!(rules[1].name, "named");
        assert_eq!(rules[1].to_string(), "named: p(X) & q(X, Paris, 3, {a, b}) -> !r(X)");
    }

    #[test]
    fn facts_are_rules_with_empty_bodies() {
        let rules = parse_rules("-> p(a)").unwrap();
        assert!(rules[0].body.is_empty());
        assert!(parse_rules("-> p(X)").is_err());
    }

    #[test]
    fn errors_are_line_precise() {
        let err = parse_rules("p(X) -> q(X)\n\np(X) -> q(Y)\n").unwrap_err();
        assert_eq!(err.to_string(), "line 3: head variable `Y` does not occur in the body");
        let err = parse_rules("p(X) q(X)").unwrap_err();
        assert_eq!(err.to_string(), "line 1: column 6: expected `&` or `->`, found `q`");
        assert!(parse_rules("p(X) -> q({China})").is_err());
        assert!(parse_rules("p(\"China) -> q(X)").is_err());
    }

    #[test]
    fn class_annotations_are_checked() {
        let rules = parse_rules("p(X:Nowhere) -> q(X)").unwrap();
        let sig = DomainSignature::new("d");
        assert!(matches!(rules[0].check(&sig), Err(InferenceError::Signature(_))));
    }
}
