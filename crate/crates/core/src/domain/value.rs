use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// An object of study in a domain, identified by name.
///
/// Names that parse as numbers sort numerically before all other names, so
/// `{3, 7, 11, 23}` renders in its natural order.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DomainObject(String);

impl DomainObject {
    pub fn new(name: impl Into<String>) -> Self {
        Self(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    fn numeric(&self) -> Option<f64> {
        self.0.parse::<f64>().ok().filter(|v| v.is_finite())
    }
}

impl Ord for DomainObject {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.numeric(), other.numeric()) {
            (Some(a), Some(b)) => a.total_cmp(&b).then_with(|| self.0.cmp(&other.0)),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => self.0.cmp(&other.0),
        }
    }
}

impl PartialOrd for DomainObject {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DomainObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for DomainObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<&str> for DomainObject {
    fn from(s: &str) -> Self {
        Self::new(s)
    }
}

/// A domain object or a set of them. In JSON a string is an object and an
/// array of strings is a set.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Object(DomainObject),
    Set(BTreeSet<DomainObject>),
}

impl Value {
    pub fn object(name: &str) -> Self {
        Self::Object(DomainObject::new(name))
    }

    pub fn set<'a>(names: impl IntoIterator<Item = &'a str>) -> Self {
        Self::Set(names.into_iter().map(DomainObject::new).collect())
    }

    /// Image of an open set: a singleton collapses to its object.
    pub fn from_image(image: &BTreeSet<DomainObject>) -> Self {
        match image.len() {
            1 => Self::Object(image.iter().next().cloned().expect("len is 1")),
            _ => Self::Set(image.clone()),
        }
    }

    pub fn as_object(&self) -> Option<&DomainObject> {
        match self {
            Self::Object(o) => Some(o),
            Self::Set(_) => None,
        }
    }

    /// The objects a value mentions; sets contribute their members.
    pub fn objects(&self) -> Box<dyn Iterator<Item = &DomainObject> + '_> {
        match self {
            Self::Object(o) => Box::new(std::iter::once(o)),
            Self::Set(s) => Box::new(s.iter()),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Object(o) => write!(f, "{o}"),
            Self::Set(s) => {
                let parts: Vec<&str> = s.iter().map(DomainObject::as_str).collect();
                write!(f, "{{{}}}", parts.join(", "))
            }
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numeric_names_sort_naturally() {
        let v = Value::set(["23", "11", "3", "7"]);
        assert_eq!(v.to_string(), "{3, 7, 11, 23}");
        assert!(DomainObject::new("9") < DomainObject::new("Beijing"));
        assert!(DomainObject::new("Beijing") < DomainObject::new("China"));
    }

    #[test]
    fn json_shape() {
        let v: Vec<Value> = serde_json::from_str(r#"["11", ["3", "7"]]"#).unwrap();
        assert_eq!(v, vec![Value::object("11"), Value::set(["3", "7"])]);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"["11",["3","7"]]"#);
    }

    #[test]
    fn singleton_images_collapse() {
        let one: BTreeSet<DomainObject> = [DomainObject::new("3")].into();
        assert_eq!(Value::from_image(&one), Value::object("3"));
    }
}
