//! Data functions and data relations: maps from tuples of open sets to open
//! sets or truth values, plus quantified relations over the open sets.

use std::collections::BTreeMap;

use super::{FiniteTopology, SubsetMask, TopologyError};

/// A named map `T ⊂ τⁿ → τ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DataFunction {
    Intersection,
    Union,
    /// A user function given by its finite graph; tuples outside the table
    /// are outside the function's domain.
    Table {
        name: String,
        arity: usize,
        table: BTreeMap<Vec<SubsetMask>, SubsetMask>,
    },
}

impl DataFunction {
    pub fn table(name: impl Into<String>, arity: usize, entries: impl IntoIterator<Item = (Vec<SubsetMask>, SubsetMask)>) -> Self {
        Self::Table { name: name.into(), arity, table: entries.into_iter().collect() }
    }

    pub fn name(&self) -> &str {
        match self {
            Self::Intersection => "intersection",
            Self::Union => "union",
            Self::Table { name, .. } => name,
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Self::Intersection | Self::Union => 2,
            Self::Table { arity, .. } => *arity,
        }
    }
}

/// A named map `T ⊂ τⁿ → {true, false}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DataRelation {
    Subset,
    Equal,
    Table { name: String, arity: usize, table: BTreeMap<Vec<SubsetMask>, bool> },
}

impl DataRelation {
    pub fn table(name: impl Into<String>, arity: usize, entries: impl IntoIterator<Item = (Vec<SubsetMask>, bool)>) -> Self {
        Self::Table { name: name.into(), arity, table: entries.into_iter().collect() }
    }

    pub fn name(&self) -> &str {
        match self {
            Self::Subset => "subset",
            Self::Equal => "equal",
            Self::Table { name, .. } => name,
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Self::Subset | Self::Equal => 2,
            Self::Table { arity, .. } => *arity,
        }
    }

    /// Argument tuples on which the relation is declared true.
    ///
    /// Built-in relations range over all of `candidates`ⁿ.
    pub fn true_instances(&self, t: &FiniteTopology, candidates: &[SubsetMask]) -> Result<Vec<Vec<SubsetMask>>, TopologyError> {
        match self {
            Self::Table { table, .. } => Ok(table.iter().filter(|(_, v)| **v).map(|(k, _)| k.clone()).collect()),
            _ => {
                let mut out = Vec::new();
                for &a in candidates {
                    for &b in candidates {
                        if eval_data_relation(t, self, &[a, b])? {
                            out.push(vec![a, b]);
                        }
                    }
                }
                Ok(out)
            }
        }
    }
}

fn check_args(t: &FiniteTopology, name: &str, arity: usize, args: &[SubsetMask]) -> Result<(), TopologyError> {
    if args.len() != arity {
        return Err(TopologyError::Domain(format!("`{name}` takes {arity} arguments, got {}", args.len())));
    }
    for a in args {
        t.ground().check_width(*a)?;
        if !t.is_open(*a) {
            return Err(TopologyError::Domain(format!("argument {} of `{name}` is not open", t.ground().format_mask(*a))));
        }
    }
    Ok(())
}

fn format_tuple(t: &FiniteTopology, args: &[SubsetMask]) -> String {
    let parts: Vec<String> = args.iter().map(|a| t.ground().format_mask(*a)).collect();
    format!("({})", parts.join(", "))
}

pub fn eval_data_function(t: &FiniteTopology, f: &DataFunction, args: &[SubsetMask]) -> Result<SubsetMask, TopologyError> {
    check_args(t, f.name(), f.arity(), args)?;
    let value = match f {
        DataFunction::Intersection => args[0].intersection(args[1]),
        DataFunction::Union => args[0].union(args[1]),
        DataFunction::Table { name, table, .. } => {
            *table.get(args).ok_or_else(|| TopologyError::Domain(format!("{} is outside the domain of `{name}`", format_tuple(t, args))))?
        }
    };
    t.ground().check_width(value)?;
    if !t.is_open(value) {
        return Err(TopologyError::Domain(format!(
            "`{}` maps {} to {}, which is not open",
            f.name(),
            format_tuple(t, args),
            t.ground().format_mask(value)
        )));
    }
    Ok(value)
}

pub fn eval_data_relation(t: &FiniteTopology, r: &DataRelation, args: &[SubsetMask]) -> Result<bool, TopologyError> {
    check_args(t, r.name(), r.arity(), args)?;
    match r {
        DataRelation::Subset => Ok(args[0].is_subset(args[1])),
        DataRelation::Equal => Ok(args[0] == args[1]),
        DataRelation::Table { name, table, .. } => {
            table.get(args).copied().ok_or_else(|| TopologyError::Domain(format!("{} is outside the domain of `{name}`", format_tuple(t, args))))
        }
    }
}

/// A term denoting an open set inside an [`OpenFormula`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OpenTerm {
    Var(String),
    Set(SubsetMask),
    Empty,
    Full,
    Apply(DataFunction, Vec<OpenTerm>),
}

impl OpenTerm {
    pub fn var(name: &str) -> Self {
        Self::Var(name.to_string())
    }
}

/// A quantified data relation; quantifiers range over the open sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OpenFormula {
    Holds(DataRelation, Vec<OpenTerm>),
    Not(Box<OpenFormula>),
    And(Vec<OpenFormula>),
    Or(Vec<OpenFormula>),
    ForAll(String, Box<OpenFormula>),
    Exists(String, Box<OpenFormula>),
}

impl OpenFormula {
    pub fn forall(var: &str, body: OpenFormula) -> Self {
        Self::ForAll(var.to_string(), Box::new(body))
    }

    pub fn exists(var: &str, body: OpenFormula) -> Self {
        Self::Exists(var.to_string(), Box::new(body))
    }
}

/// Evaluates a closed formula by enumerating every open set for each
/// quantifier.
pub fn eval_open_formula(t: &FiniteTopology, formula: &OpenFormula) -> Result<bool, TopologyError> {
    let mut env = Vec::new();
    eval_formula(t, formula, &mut env)
}

fn eval_formula(t: &FiniteTopology, formula: &OpenFormula, env: &mut Vec<(String, SubsetMask)>) -> Result<bool, TopologyError> {
    match formula {
        OpenFormula::Holds(r, terms) => {
            let args = terms.iter().map(|term| eval_term(t, term, env)).collect::<Result<Vec<_>, _>>()?;
            eval_data_relation(t, r, &args)
        }
        OpenFormula::Not(inner) => Ok(!eval_formula(t, inner, env)?),
        OpenFormula::And(parts) => {
            for p in parts {
                if !eval_formula(t, p, env)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        OpenFormula::Or(parts) => {
            for p in parts {
                if eval_formula(t, p, env)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        OpenFormula::ForAll(var, body) | OpenFormula::Exists(var, body) => {
            let universal = matches!(formula, OpenFormula::ForAll(..));
            for &o in t.opens() {
                env.push((var.clone(), o));
                let value = eval_formula(t, body, env);
                env.pop();
                if value? != universal {
                    return Ok(!universal);
                }
            }
            Ok(universal)
        }
    }
}

fn eval_term(t: &FiniteTopology, term: &OpenTerm, env: &[(String, SubsetMask)]) -> Result<SubsetMask, TopologyError> {
    match term {
        OpenTerm::Var(v) => {
            env.iter().rev().find(|(name, _)| name == v).map(|(_, m)| *m).ok_or_else(|| TopologyError::Domain(format!("unbound variable `{v}`")))
        }
        OpenTerm::Set(m) => Ok(*m),
        OpenTerm::Empty => Ok(t.ground().empty_mask()),
        OpenTerm::Full => Ok(t.ground().full_mask()),
        OpenTerm::Apply(f, args) => {
            let args = args.iter().map(|a| eval_term(t, a, env)).collect::<Result<Vec<_>, _>>()?;
            eval_data_function(t, f, &args)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{generate_topology, GroundSet};

    fn numbers() -> FiniteTopology {
        let g = GroundSet::new(["3", "7", "11", "23"]).unwrap();
        let sub = [g.mask_of(["3"]).unwrap(), g.mask_of(["3", "7"]).unwrap()];
        generate_topology(&g, &sub).unwrap()
    }

    #[test]
    fn builtin_functions() {
        let t = numbers();
        let three = t.ground().mask_of(["3"]).unwrap();
        let three_seven = t.ground().mask_of(["3", "7"]).unwrap();
        assert_eq!(eval_data_function(&t, &DataFunction::Intersection, &[three, three_seven]).unwrap(), three);
        let empty = t.ground().empty_mask();
        assert_eq!(eval_data_function(&t, &DataFunction::Union, &[empty, three_seven]).unwrap(), three_seven);
        let seven = t.ground().mask_of(["7"]).unwrap();
        assert!(matches!(eval_data_function(&t, &DataFunction::Union, &[seven, three]), Err(TopologyError::Domain(_))));
    }

    #[test]
    fn table_function_lookup() {
        let g = GroundSet::new(["a", "b"]).unwrap();
        let t = FiniteTopology::discrete(g.clone());
        let a = g.mask_of(["a"]).unwrap();
        let b = g.mask_of(["b"]).unwrap();
        let f = DataFunction::table("f", 2, [(vec![a, b], g.full_mask())]);
        assert_eq!(eval_data_function(&t, &f, &[a, b]).unwrap(), g.full_mask());
        assert!(matches!(eval_data_function(&t, &f, &[b, a]), Err(TopologyError::Domain(_))));
        assert!(eval_data_function(&t, &f, &[a]).is_err());
    }

    #[test]
    fn relations_and_quantifiers() {
        let t = numbers();
        let three = t.ground().mask_of(["3"]).unwrap();
        let three_seven = t.ground().mask_of(["3", "7"]).unwrap();
        assert!(eval_data_relation(&t, &DataRelation::Subset, &[three, three_seven]).unwrap());
        let e = t.ground().empty_mask();
        assert!(eval_data_relation(&t, &DataRelation::Equal, &[e, e]).unwrap());

        // ∀t ∃s (t ∪ s = X)
        let f = OpenFormula::forall(
            "t",
            OpenFormula::exists(
                "s",
                OpenFormula::Holds(
                    DataRelation::Equal,
                    vec![OpenTerm::Apply(DataFunction::Union, vec![OpenTerm::var("t"), OpenTerm::var("s")]), OpenTerm::Full],
                ),
            ),
        );
        assert!(eval_open_formula(&t, &f).unwrap());

        // ∀t ∀s (t ⊂ s) fails
        let g = OpenFormula::forall(
            "t",
            OpenFormula::forall("s", OpenFormula::Holds(DataRelation::Subset, vec![OpenTerm::var("t"), OpenTerm::var("s")])),
        );
        assert!(!eval_open_formula(&t, &g).unwrap());

        let unbound = OpenFormula::Holds(DataRelation::Equal, vec![OpenTerm::var("z"), OpenTerm::Empty]);
        assert!(eval_open_formula(&t, &unbound).is_err());
    }
}
