//! Methods: ordered instructions, each applying a domain function to slots.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{DomainError, DomainSignature, GroundAtom, Value};

/// Which values an input slot accepts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlotDomain {
    MembersOf(String),
    SubsetsOf {
        class: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        size: Option<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotDecl {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<SlotDomain>,
}

/// Output slots, and optionally the relation that must hold between the
/// inputs and outputs.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Goal {
    #[serde(default)]
    pub outputs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation: Option<String>,
}

/// A slot name, or `{"const": value}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ArgSource {
    Slot(String),
    Const {
        #[serde(rename = "const")]
        value: Value,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instruction {
    pub function: String,
    pub args: Vec<ArgSource>,
    pub result: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodSpec {
    pub name: String,
    #[serde(default)]
    pub given: Vec<SlotDecl>,
    #[serde(default)]
    pub goal: Goal,
    #[serde(default)]
    pub instructions: Vec<Instruction>,
}

impl MethodSpec {
    /// Output slot names; with no declared outputs the inputs are returned.
    pub fn output_slots(&self) -> Vec<&str> {
        if self.goal.outputs.is_empty() {
            self.given.iter().map(|s| s.name.as_str()).collect()
        } else {
            self.goal.outputs.iter().map(String::as_str).collect()
        }
    }
}

/// One evaluation `f(v₁, …, vₙ) = v` performed while running a method.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Operation {
    pub index: usize,
    pub function: String,
    pub sources: Vec<ArgSource>,
    pub args: Vec<Value>,
    pub result: String,
    pub value: Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperationTrace {
    pub method: String,
    pub given: Vec<String>,
    pub inputs: Vec<Value>,
    pub operations: Vec<Operation>,
    pub output_slots: Vec<String>,
    pub outputs: Vec<Value>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MethodRun {
    pub outputs: Vec<Value>,
    pub trace: OperationTrace,
}

impl MethodRun {
    /// `goal(inputs…, outputs…)` when the method names a goal relation.
    pub fn goal_atom(&self, spec: &MethodSpec) -> Option<GroundAtom> {
        let relation = spec.goal.relation.as_ref()?;
        let args = self.trace.inputs.iter().chain(&self.outputs).cloned().collect();
        Some(GroundAtom::new(relation.clone(), args))
    }
}

/// Static well-formedness: slots are assigned once and defined before use,
/// functions exist with matching arity, and the goal is consistent.
pub(crate) fn check_method(spec: &MethodSpec, sig: &DomainSignature) -> Result<(), DomainError> {
    let fail = |msg: String| Err(DomainError::MethodInvalid(format!("`{}`: {msg}", spec.name)));
    let mut defined: Vec<&str> = Vec::new();
    for slot in &spec.given {
        if defined.contains(&slot.name.as_str()) {
            return fail(format!("slot `{}` is declared twice", slot.name));
        }
        if let Some(SlotDomain::MembersOf(c) | SlotDomain::SubsetsOf { class: c, .. }) = &slot.domain {
            if sig.class(c).is_none() {
                return fail(format!("slot `{}` ranges over unknown class `{c}`", slot.name));
            }
        }
        defined.push(&slot.name);
    }
    for (i, ins) in spec.instructions.iter().enumerate() {
        let Some(f) = sig.function(&ins.function) else {
            return fail(format!("instruction {i} calls unknown function `{}`", ins.function));
        };
        if f.arity != ins.args.len() {
            return fail(format!("instruction {i} passes {} arguments to `{}` of arity {}", ins.args.len(), f.name, f.arity));
        }
        for a in &ins.args {
            if let ArgSource::Slot(s) = a {
                if !defined.contains(&s.as_str()) {
                    return fail(format!("instruction {i} reads undefined slot `{s}`"));
                }
            }
        }
        if defined.contains(&ins.result.as_str()) {
            return fail(format!("instruction {i} reassigns slot `{}`", ins.result));
        }
        defined.push(&ins.result);
    }
    for out in &spec.goal.outputs {
        if !defined.contains(&out.as_str()) {
            return fail(format!("output slot `{out}` is never assigned"));
        }
    }
    if let Some(rel) = &spec.goal.relation {
        let Some(r) = sig.relation(rel) else {
            return fail(format!("goal relation `{rel}` is not declared"));
        };
        let expected = spec.given.len() + spec.output_slots().len();
        if r.arity != expected {
            return fail(format!("goal relation `{rel}` has arity {}, expected {expected}", r.arity));
        }
    }
    Ok(())
}

fn check_inputs(spec: &MethodSpec, sig: &DomainSignature, inputs: &[Value]) -> Result<(), DomainError> {
    if inputs.len() != spec.given.len() {
        return Err(DomainError::MethodInvalid(format!("`{}` takes {} inputs, got {}", spec.name, spec.given.len(), inputs.len())));
    }
    for (slot, v) in spec.given.iter().zip(inputs) {
        let ok = match &slot.domain {
            None => true,
            Some(SlotDomain::MembersOf(c)) => {
                let class = sig.class(c).expect("checked statically");
                v.as_object().is_some_and(|o| class.contains(o))
            }
            Some(SlotDomain::SubsetsOf { class, size }) => {
                let class = sig.class(class).expect("checked statically");
                match v {
                    Value::Set(s) => s.is_subset(class) && size.is_none_or(|n| s.len() == n),
                    Value::Object(o) => class.contains(o) && size.is_none_or(|n| n == 1),
                }
            }
        };
        if !ok {
            return Err(DomainError::MethodInvalid(format!("input {v} does not satisfy slot `{}`", slot.name)));
        }
    }
    Ok(())
}

/// Runs the method's instructions in order on `inputs`.
pub fn execute_method(spec: &MethodSpec, sig: &DomainSignature, inputs: &[Value]) -> Result<MethodRun, DomainError> {
    check_method(spec, sig)?;
    check_inputs(spec, sig, inputs)?;
    let mut slots: BTreeMap<&str, Value> = spec.given.iter().map(|s| s.name.as_str()).zip(inputs.iter().cloned()).collect();
    let mut operations = Vec::with_capacity(spec.instructions.len());
    for (index, ins) in spec.instructions.iter().enumerate() {
        let args: Vec<Value> = ins
            .args
            .iter()
            .map(|a| match a {
                ArgSource::Slot(s) => slots[s.as_str()].clone(),
                ArgSource::Const { value } => value.clone(),
            })
            .collect();
        let f = sig.function(&ins.function).expect("checked statically");
        let value = f.apply(&args).cloned().ok_or_else(|| {
            let shown: Vec<String> = args.iter().map(Value::to_string).collect();
            DomainError::Undefined { index, message: format!("`{}` is undefined on ({})", f.name, shown.join(", ")) }
        })?;
        slots.insert(&ins.result, value.clone());
        operations.push(Operation { index, function: ins.function.clone(), sources: ins.args.clone(), args, result: ins.result.clone(), value });
    }
    let output_slots = spec.output_slots();
    let outputs: Vec<Value> = output_slots.iter().map(|s| slots[s].clone()).collect();
    let trace = OperationTrace {
        method: spec.name.clone(),
        given: spec.given.iter().map(|s| s.name.clone()).collect(),
        inputs: inputs.to_vec(),
        operations,
        output_slots: output_slots.iter().map(|s| s.to_string()).collect(),
        outputs: outputs.clone(),
    };
    Ok(MethodRun { outputs, trace })
}

/// Re-executes a trace's operations against the signature and returns the
/// outputs they produce. Fails if any recorded operation is not reproduced.
pub fn replay(trace: &OperationTrace, sig: &DomainSignature) -> Result<Vec<Value>, DomainError> {
    let mut slots: BTreeMap<&str, Value> = trace.given.iter().map(String::as_str).zip(trace.inputs.iter().cloned()).collect();
    for op in &trace.operations {
        let args = op
            .sources
            .iter()
            .map(|a| match a {
                ArgSource::Slot(s) => slots.get(s.as_str()).cloned(),
                ArgSource::Const { value } => Some(value.clone()),
            })
            .collect::<Option<Vec<Value>>>()
            .ok_or_else(|| DomainError::MethodInvalid(format!("operation {} reads an unassigned slot", op.index)))?;
        if args != op.args {
            return Err(DomainError::MethodInvalid(format!("operation {} recorded different arguments", op.index)));
        }
        let value = sig.function(&op.function).and_then(|f| f.apply(&args)).cloned().ok_or_else(|| DomainError::Undefined {
            index: op.index,
            message: format!("`{}` is undefined on the recorded arguments", op.function),
        })?;
        if value != op.value {
            return Err(DomainError::MethodInvalid(format!("operation {} produced {value}, trace recorded {}", op.index, op.value)));
        }
        slots.insert(&op.result, value);
    }
    trace
        .output_slots
        .iter()
        .map(|s| slots.get(s.as_str()).cloned())
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| DomainError::MethodInvalid("trace output slot is never assigned".into()))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::domain::RelationSymbol;

    /// Mathematics over {3, 7, 11, 23}: sum, cardinality and division graphs
    /// for the whole set and every 2-element subset, and the averaging method.
    pub(crate) fn averaging() -> (DomainSignature, MethodSpec) {
        let members = [3u32, 7, 11, 23];
        let mut sig = DomainSignature::new("mathematics");
        sig.add_class("Number", ["3", "7", "11", "23"]);
        let mut subsets: Vec<Vec<u32>> = vec![members.to_vec()];
        for i in 0..4 {
            for j in i + 1..4 {
                subsets.push(vec![members[i], members[j]]);
            }
        }
        let names = |s: &[u32]| s.iter().map(|v| v.to_string()).collect::<Vec<_>>();
        let set_of = |s: &[u32]| {
            let n = names(s);
            Value::set(n.iter().map(String::as_str))
        };
        let obj = |v: u32| Value::object(&v.to_string());
        sig.add_function("sum", 1, subsets.iter().map(|s| (vec![set_of(s)], obj(s.iter().sum()))));
        sig.add_function("card", 1, subsets.iter().map(|s| (vec![set_of(s)], obj(s.len() as u32))));
        sig.add_function(
            "div",
            2,
            subsets.iter().map(|s| (vec![obj(s.iter().sum()), obj(s.len() as u32)], obj(s.iter().sum::<u32>() / s.len() as u32))),
        );
        let mut goal = RelationSymbol::new("average_is", 2);
        goal.gloss = Some("the average of {0} is equal to {1}".into());
        sig.add_relation(goal);
        let spec: MethodSpec = serde_json::from_str(
            r#"{
                "name": "average",
                "given": [{"name": "xs", "domain": {"subsets_of": {"class": "Number"}}}],
                "goal": {"outputs": ["avg"], "relation": "average_is"},
                "instructions": [
                    {"function": "sum", "args": ["xs"], "result": "s"},
                    {"function": "card", "args": ["xs"], "result": "n"},
                    {"function": "div", "args": ["s", "n"], "result": "avg"}
                ]
            }"#,
        )
        .unwrap();
        (sig, spec)
    }

    #[test]
    fn average_of_the_four_numbers_is_eleven() {
        let (sig, spec) = averaging();
        let run = execute_method(&spec, &sig, &[Value::set(["3", "7", "11", "23"])]).unwrap();
        assert_eq!(run.outputs, vec![Value::object("11")]);
        assert_eq!(run.trace.operations.len(), 3);
        assert_eq!(sig.gloss(&run.goal_atom(&spec).unwrap()).unwrap(), "the average of {3, 7, 11, 23} is equal to 11");
        assert_eq!(replay(&run.trace, &sig).unwrap(), run.outputs);
    }

    #[test]
    fn empty_method_returns_its_inputs() {
        let sig = DomainSignature::new("d");
        let spec = MethodSpec {
            name: "id".into(),
            given: vec![SlotDecl { name: "a".into(), domain: None }, SlotDecl { name: "b".into(), domain: None }],
            goal: Goal::default(),
            instructions: vec![],
        };
        let inputs = vec![Value::object("p"), Value::object("q")];
        assert_eq!(execute_method(&spec, &sig, &inputs).unwrap().outputs, inputs);
    }

    #[test]
    fn missing_slot_fails_before_execution() {
        let (sig, mut spec) = averaging();
        spec.instructions[2].args[1] = ArgSource::Slot("m".into());
        let err = execute_method(&spec, &sig, &[Value::set(["3", "7", "11", "23"])]).unwrap_err();
        assert!(matches!(err, DomainError::MethodInvalid(ref m) if m.contains("undefined slot `m`")), "{err}");
    }

    #[test]
    fn undefined_function_application_names_the_instruction() {
        let (sig, spec) = averaging();
        let err = execute_method(&spec, &sig, &[Value::set(["3", "7", "11"])]).unwrap_err();
        assert!(matches!(err, DomainError::Undefined { index: 0, .. }), "{err}");
    }

    #[test]
    fn inputs_outside_the_given_domain_are_rejected() {
        let (sig, spec) = averaging();
        assert!(execute_method(&spec, &sig, &[Value::set(["3", "4"])]).is_err());
    }

    #[test]
    fn tampered_traces_do_not_replay() {
        let (sig, spec) = averaging();
        let mut run = execute_method(&spec, &sig, &[Value::set(["3", "7"])]).unwrap();
        run.trace.operations[0].value = Value::object("11");
        assert!(replay(&run.trace, &sig).is_err());
    }
}
