use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{check_method, DomainError, DomainObject, GroundAtom, MethodSpec, Value};

/// A function symbol with its finite graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionSymbol {
    pub name: String,
    pub arity: usize,
    pub graph: BTreeMap<Vec<Value>, Value>,
}

impl FunctionSymbol {
    pub fn apply(&self, args: &[Value]) -> Option<&Value> {
        self.graph.get(args)
    }
}

/// How a missing observation of a relation is read during induction.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureMode {
    /// Only explicit negative atoms count as failures.
    #[default]
    Explicit,
    /// Classes are fully observed: any unobserved tuple is a failure.
    ClosedWorld,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationSymbol {
    pub name: String,
    pub arity: usize,
    pub primitive: bool,
    /// Function and relation symbols a derived relation is defined through.
    pub derived_from: Vec<String>,
    /// Reading template with `{0}`, `{1}`, … placeholders.
    pub gloss: Option<String>,
    pub failure: FailureMode,
    /// Tuples on which the relation is known to hold, when enumerated.
    pub extension: Option<BTreeSet<Vec<Value>>>,
}

impl RelationSymbol {
    pub fn new(name: &str, arity: usize) -> Self {
        Self {
            name: name.to_string(),
            arity,
            primitive: true,
            derived_from: Vec::new(),
            gloss: None,
            failure: FailureMode::default(),
            extension: None,
        }
    }

    /// The gloss with arguments substituted; `None` without a gloss or for
    /// negated atoms.
    pub fn render(&self, atom: &GroundAtom) -> Option<String> {
        let template = self.gloss.as_ref().filter(|_| !atom.negated)?;
        let mut out = template.clone();
        for (i, v) in atom.args.iter().enumerate() {
            out = out.replace(&format!("{{{i}}}"), &v.to_string());
        }
        Some(out)
    }
}

/// A derived object: the value of a function applied to earlier objects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedObject {
    pub name: DomainObject,
    pub function: String,
    pub args: Vec<Value>,
}

/// A finite, extensional domain: classes of objects, function graphs,
/// relation symbols, and method specifications.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DomainSignature {
    pub name: String,
    pub classes: BTreeMap<String, BTreeSet<DomainObject>>,
    pub derived_objects: Vec<DerivedObject>,
    pub functions: BTreeMap<String, FunctionSymbol>,
    pub relations: BTreeMap<String, RelationSymbol>,
    pub methods: BTreeMap<String, MethodSpec>,
}

impl DomainSignature {
    pub fn new(name: &str) -> Self {
        Self { name: name.to_string(), ..Self::default() }
    }

    pub fn add_class<'a>(&mut self, name: &str, members: impl IntoIterator<Item = &'a str>) -> &mut Self {
        self.classes.insert(name.to_string(), members.into_iter().map(DomainObject::new).collect());
        self
    }

    pub fn add_function(&mut self, name: &str, arity: usize, graph: impl IntoIterator<Item = (Vec<Value>, Value)>) -> &mut Self {
        let graph = graph.into_iter().collect();
        self.functions.insert(name.to_string(), FunctionSymbol { name: name.to_string(), arity, graph });
        self
    }

    pub fn add_relation(&mut self, relation: RelationSymbol) -> &mut Self {
        self.relations.insert(relation.name.clone(), relation);
        self
    }

    pub fn add_method(&mut self, method: MethodSpec) -> &mut Self {
        self.methods.insert(method.name.clone(), method);
        self
    }

    pub fn class(&self, name: &str) -> Option<&BTreeSet<DomainObject>> {
        self.classes.get(name)
    }

    pub fn function(&self, name: &str) -> Option<&FunctionSymbol> {
        self.functions.get(name)
    }

    pub fn relation(&self, name: &str) -> Option<&RelationSymbol> {
        self.relations.get(name)
    }

    pub fn method(&self, name: &str) -> Option<&MethodSpec> {
        self.methods.get(name)
    }

    pub fn failure_mode(&self, relation: &str) -> FailureMode {
        self.relation(relation).map(|r| r.failure).unwrap_or_default()
    }

    /// Whether the object occurs anywhere in the signature.
    pub fn knows_object(&self, o: &DomainObject) -> bool {
        self.classes.values().any(|c| c.contains(o))
            || self.derived_objects.iter().any(|d| &d.name == o)
            || self
                .functions
                .values()
                .any(|f| f.graph.iter().any(|(args, v)| v.objects().any(|x| x == o) || args.iter().any(|a| a.objects().any(|x| x == o))))
            || self.relations.values().any(|r| r.extension.iter().flatten().any(|t| t.iter().any(|a| a.objects().any(|x| x == o))))
    }

    pub fn gloss(&self, atom: &GroundAtom) -> Option<String> {
        self.relation(&atom.relation)?.render(atom)
    }

    /// Value of a derived object, computed through its function graph.
    pub fn derived_value(&self, name: &DomainObject) -> Option<Value> {
        let d = self.derived_objects.iter().find(|d| &d.name == name)?;
        let args = d
            .args
            .iter()
            .map(|a| match a {
                Value::Object(o) if self.derived_objects.iter().any(|e| &e.name == o) => self.derived_value(o),
                other => Some(other.clone()),
            })
            .collect::<Option<Vec<_>>>()?;
        self.function(&d.function)?.apply(&args).cloned()
    }

    /// Checks arities, references, and that derived definitions are acyclic.
    pub fn check(&self) -> Result<(), DomainError> {
        for f in self.functions.values() {
            for args in f.graph.keys() {
                if args.len() != f.arity {
                    return Err(DomainError::Signature(format!(
                        "function `{}` has arity {} but its graph has a {}-tuple",
                        f.name,
                        f.arity,
                        args.len()
                    )));
                }
            }
        }
        for r in self.relations.values() {
            if let Some(t) = r.extension.iter().flatten().find(|t| t.len() != r.arity) {
                return Err(DomainError::Signature(format!("relation `{}` has arity {} but its extension has a {}-tuple", r.name, r.arity, t.len())));
            }
        }
        self.check_definition_order()?;
        for m in self.methods.values() {
            check_method(m, self)?;
        }
        Ok(())
    }

    fn check_definition_order(&self) -> Result<(), DomainError> {
        // Nodes are derived objects and derived relations; an edge runs from
        // each dependency to its dependent.
        let mut deps: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        let derived_objects: BTreeSet<&DomainObject> = self.derived_objects.iter().map(|d| &d.name).collect();
        for d in &self.derived_objects {
            let f = self
                .function(&d.function)
                .ok_or_else(|| DomainError::Signature(format!("derived object `{}` uses unknown function `{}`", d.name, d.function)))?;
            if f.arity != d.args.len() {
                return Err(DomainError::Signature(format!("derived object `{}` applies `{}` to {} arguments", d.name, f.name, d.args.len())));
            }
            let node = deps.entry(format!("object {}", d.name)).or_default();
            for o in d.args.iter().flat_map(Value::objects) {
                if derived_objects.contains(o) {
                    node.insert(format!("object {o}"));
                }
            }
        }
        for r in self.relations.values().filter(|r| !r.primitive) {
            let mut node = BTreeSet::new();
            for name in &r.derived_from {
                match (self.function(name), self.relation(name)) {
                    (Some(_), _) => {}
                    (None, Some(dep)) if !dep.primitive => {
                        node.insert(format!("relation {name}"));
                    }
                    (None, Some(_)) => {}
                    (None, None) => return Err(DomainError::Signature(format!("derived relation `{}` references unknown symbol `{name}`", r.name))),
                }
            }
            deps.insert(format!("relation {}", r.name), node);
        }
        // Kahn's algorithm.
        let mut remaining = deps;
        loop {
            let ready: Vec<String> = remaining.iter().filter(|(_, d)| d.iter().all(|x| !remaining.contains_key(x))).map(|(k, _)| k.clone()).collect();
            if ready.is_empty() {
                break;
            }
            for k in ready {
                remaining.remove(&k);
            }
        }
        if !remaining.is_empty() {
            let names: Vec<&str> = remaining.keys().map(String::as_str).collect();
            return Err(DomainError::Signature(format!("cyclic definitions: {}", names.join(", "))));
        }
        Ok(())
    }

    /// Parses and checks a domain specification document.
    pub fn from_json(text: &str) -> Result<Self, DomainError> {
        let doc: SignatureDoc = serde_json::from_str(text).map_err(DomainError::from_json)?;
        let sig = doc.into_signature()?;
        sig.check()?;
        Ok(sig)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SignatureDoc {
    name: String,
    #[serde(default)]
    classes: BTreeMap<String, Vec<DomainObject>>,
    #[serde(default)]
    objects: Vec<ObjectEntry>,
    #[serde(default)]
    functions: Vec<FunctionEntry>,
    #[serde(default)]
    relations: Vec<RelationEntry>,
    #[serde(default)]
    methods: Vec<MethodSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObjectEntry {
    name: DomainObject,
    function: String,
    args: Vec<Value>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FunctionEntry {
    name: String,
    arity: usize,
    #[serde(default)]
    graph: Vec<GraphEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphEntry {
    args: Vec<Value>,
    value: Value,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationEntry {
    name: String,
    arity: usize,
    #[serde(default = "yes")]
    primitive: bool,
    #[serde(default)]
    derived_from: Vec<String>,
    #[serde(default)]
    gloss: Option<String>,
    #[serde(default)]
    failure: FailureMode,
    #[serde(default)]
    extension: Option<Vec<Vec<Value>>>,
}

fn yes() -> bool {
    true
}

impl SignatureDoc {
    fn into_signature(self) -> Result<DomainSignature, DomainError> {
        let mut sig = DomainSignature::new(&self.name);
        sig.classes = self.classes.into_iter().map(|(k, v)| (k, v.into_iter().collect())).collect();
        sig.derived_objects = self.objects.into_iter().map(|o| DerivedObject { name: o.name, function: o.function, args: o.args }).collect();
        for (i, f) in self.functions.into_iter().enumerate() {
            let mut graph = BTreeMap::new();
            for (j, e) in f.graph.into_iter().enumerate() {
                if graph.insert(e.args, e.value).is_some() {
                    return Err(DomainError::Document {
                        path: format!("functions[{i}].graph[{j}]"),
                        message: format!("duplicate argument tuple for `{}`", f.name),
                    });
                }
            }
            if sig.functions.contains_key(&f.name) {
                return Err(DomainError::Document { path: format!("functions[{i}]"), message: format!("duplicate function `{}`", f.name) });
            }
            sig.add_function(&f.name, f.arity, graph);
        }
        for (i, r) in self.relations.into_iter().enumerate() {
            if sig.relations.contains_key(&r.name) {
                return Err(DomainError::Document { path: format!("relations[{i}]"), message: format!("duplicate relation `{}`", r.name) });
            }
            sig.add_relation(RelationSymbol {
                name: r.name,
                arity: r.arity,
                primitive: r.primitive,
                derived_from: r.derived_from,
                gloss: r.gloss,
                failure: r.failure,
                extension: r.extension.map(|e| e.into_iter().collect()),
            });
        }
        for (i, m) in self.methods.into_iter().enumerate() {
            if sig.methods.contains_key(&m.name) {
                return Err(DomainError::Document { path: format!("methods[{i}]"), message: format!("duplicate method `{}`", m.name) });
            }
            sig.add_method(m);
        }
        Ok(sig)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gloss_substitutes_arguments() {
        let mut r = RelationSymbol::new("average_is", 2);
        r.gloss = Some("the average of {0} is equal to {1}".into());
        let atom = GroundAtom::new("average_is", vec![Value::set(["3", "7", "11", "23"]), Value::object("11")]);
        assert_eq!(r.render(&atom).unwrap(), "the average of {3, 7, 11, 23} is equal to 11");
        assert!(r.render(&atom.complement()).is_none());
    }

    #[test]
    fn derived_objects_evaluate_in_order() {
        let json = r#"{
            "name": "mathematics",
            "classes": {"Number": ["3", "7"]},
            "objects": [
                {"name": "s", "function": "sum", "args": [["3", "7"]]},
                {"name": "half", "function": "halve", "args": ["s"]}
            ],
            "functions": [
                {"name": "sum", "arity": 1, "graph": [{"args": [["3", "7"]], "value": "10"}]},
                {"name": "halve", "arity": 1, "graph": [{"args": ["10"], "value": "5"}]}
            ]
        }"#;
        let sig = DomainSignature::from_json(json).unwrap();
        assert_eq!(sig.derived_value(&DomainObject::new("half")), Some(Value::object("5")));
        assert!(sig.knows_object(&DomainObject::new("10")));
    }

    #[test]
    fn cyclic_derived_relations_are_rejected() {
        let json = r#"{
            "name": "d",
            "relations": [
                {"name": "p", "arity": 1, "primitive": false, "derived_from": ["q"]},
                {"name": "q", "arity": 1, "primitive": false, "derived_from": ["p"]},
                {"name": "r", "arity": 1, "primitive": false, "derived_from": ["base"]},
                {"name": "base", "arity": 1}
            ]
        }"#;
        let err = DomainSignature::from_json(json).unwrap_err();
        assert_eq!(err.to_string(), "signature error: cyclic definitions: relation p, relation q");
    }

    #[test]
    fn unknown_reference_and_arity_errors() {
        let json = r#"{"name": "d", "relations": [{"name": "p", "arity": 1, "primitive": false, "derived_from": ["nope"]}]}"#;
        assert!(DomainSignature::from_json(json).is_err());
        let json = r#"{"name": "d", "functions": [{"name": "f", "arity": 2, "graph": [{"args": ["a"], "value": "b"}]}]}"#;
        assert!(matches!(DomainSignature::from_json(json), Err(DomainError::Signature(_))));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = DomainSignature::from_json("{\n  \"name\": \"d\",\n  \"classes\": 5\n}").unwrap_err();
        match err {
            DomainError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }
}
