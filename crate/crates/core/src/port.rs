//! Ports, port scopes and the finite data domain.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A named point through which one datum flows per round.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Port(Arc<str>);

impl Port {
    pub fn new(name: impl AsRef<str>) -> Self {
        Port(Arc::from(name.as_ref()))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Port {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Port {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Port {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Port {
    fn from(s: &str) -> Self {
        Port::new(s)
    }
}

impl Serialize for Port {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Port {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Ok(Port::new(s))
    }
}

pub type PortSet = BTreeSet<Port>;

/// Builds a port set from names; `ports(["a", "b"])`.
pub fn ports<I, S>(names: I) -> PortSet
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    names.into_iter().map(Port::new).collect()
}

/// A datum from the configured finite domain.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Value(pub i64);

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub type DataMap = BTreeMap<Port, Value>;

/// The finite data domain; sorted and free of duplicates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Domain(Vec<Value>);

impl Domain {
    pub fn new(values: impl IntoIterator<Item = i64>) -> Self {
        let set: BTreeSet<i64> = values.into_iter().collect();
        Domain(set.into_iter().map(Value).collect())
    }

    /// The default `{0, 1}` domain.
    pub fn binary() -> Self {
        Domain::new([0, 1])
    }

    pub fn values(&self) -> &[Value] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Value) -> bool {
        self.0.binary_search(&v).is_ok()
    }
}

impl Default for Domain {
    fn default() -> Self {
        Domain::binary()
    }
}

/// The port set an automaton or atomic step ranges over.
///
/// Linda automata live over the whole (infinite) port universe, so a scope
/// is either a finite set or everything.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scope {
    Finite(PortSet),
    Universe,
}

impl Scope {
    pub fn empty() -> Self {
        Scope::Finite(PortSet::new())
    }

    pub fn contains(&self, p: &Port) -> bool {
        match self {
            Scope::Finite(s) => s.contains(p),
            Scope::Universe => true,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Scope::Finite(s) if s.is_empty())
    }

    pub fn as_finite(&self) -> Option<&PortSet> {
        match self {
            Scope::Finite(s) => Some(s),
            Scope::Universe => None,
        }
    }

    pub fn union(&self, other: &Scope) -> Scope {
        match (self, other) {
            (Scope::Finite(a), Scope::Finite(b)) => Scope::Finite(a.union(b).cloned().collect()),
            _ => Scope::Universe,
        }
    }

    pub fn intersect(&self, other: &Scope) -> Scope {
        match (self, other) {
            (Scope::Finite(a), Scope::Finite(b)) => {
                Scope::Finite(a.intersection(b).cloned().collect())
            }
            (Scope::Finite(a), Scope::Universe) | (Scope::Universe, Scope::Finite(a)) => {
                Scope::Finite(a.clone())
            }
            (Scope::Universe, Scope::Universe) => Scope::Universe,
        }
    }

    /// `set ∩ self`.
    pub fn filter(&self, set: &PortSet) -> PortSet {
        match self {
            Scope::Finite(s) => set.intersection(s).cloned().collect(),
            Scope::Universe => set.clone(),
        }
    }

    pub fn intersects(&self, other: &Scope) -> bool {
        match (self, other) {
            (Scope::Finite(a), Scope::Finite(b)) => a.iter().any(|p| b.contains(p)),
            (Scope::Finite(a), Scope::Universe) | (Scope::Universe, Scope::Finite(a)) => {
                !a.is_empty()
            }
            (Scope::Universe, Scope::Universe) => true,
        }
    }

    pub fn is_subset(&self, other: &Scope) -> bool {
        match (self, other) {
            (_, Scope::Universe) => true,
            (Scope::Universe, Scope::Finite(_)) => false,
            (Scope::Finite(a), Scope::Finite(b)) => a.is_subset(b),
        }
    }
}

impl From<PortSet> for Scope {
    fn from(s: PortSet) -> Self {
        Scope::Finite(s)
    }
}

impl Serialize for Scope {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Scope::Finite(set) => set.serialize(s),
            Scope::Universe => s.serialize_str("*"),
        }
    }
}

impl<'de> Deserialize<'de> for Scope {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Star(String),
            Set(PortSet),
        }
        match Raw::deserialize(d)? {
            Raw::Set(s) => Ok(Scope::Finite(s)),
            Raw::Star(s) if s == "*" => Ok(Scope::Universe),
            Raw::Star(s) => Err(serde::de::Error::custom(format!(
                "expected a port list or \"*\", found {s:?}"
            ))),
        }
    }
}

/// Formats a port set the compact way, `{a,b}`.
pub fn fmt_ports(set: &PortSet) -> String {
    let names: Vec<&str> = set.iter().map(Port::name).collect();
    format!("{{{}}}", names.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn universe_behaves_as_top() {
        let a = Scope::from(ports(["a", "b"]));
        assert_eq!(a.intersect(&Scope::Universe), a);
        assert_eq!(a.union(&Scope::Universe), Scope::Universe);
        assert!(a.intersects(&Scope::Universe));
        assert!(!Scope::empty().intersects(&Scope::Universe));
        assert!(a.is_subset(&Scope::Universe));
        assert!(!Scope::Universe.is_subset(&a));
    }

    #[test]
    fn domain_is_sorted_and_deduplicated() {
        let d = Domain::new([43, 1, 42, 1, 2]);
        assert_eq!(d.values(), &[Value(1), Value(2), Value(42), Value(43)]);
        assert!(d.contains(Value(42)));
        assert!(!d.contains(Value(0)));
    }

    #[test]
    fn scope_json_shapes() {
        let s = serde_json::to_string(&Scope::from(ports(["b", "a"]))).unwrap();
        assert_eq!(s, r#"["a","b"]"#);
        assert_eq!(serde_json::to_string(&Scope::Universe).unwrap(), r#""*""#);
        let back: Scope = serde_json::from_str(r#""*""#).unwrap();
        assert_eq!(back, Scope::Universe);
    }
}
