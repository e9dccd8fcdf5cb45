//! Transition labels and their textual heads.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::port::{PortSet, Scope, Value};
use crate::step::AtomicStep;

/// Identifier of a Linda process, used by the priority predicate.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProcessId(pub String);

impl ProcessId {
    pub fn new(s: impl Into<String>) -> Self {
        ProcessId(s.into())
    }
}

impl fmt::Display for ProcessId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ActionOp {
    Out,
    Rd,
    In,
}

impl ActionOp {
    pub fn keyword(self) -> &'static str {
        match self {
            ActionOp::Out => "out",
            ActionOp::Rd => "rd",
            ActionOp::In => "in",
        }
    }

    fn from_keyword(s: &str) -> Option<Self> {
        match s {
            "out" => Some(ActionOp::Out),
            "rd" => Some(ActionOp::Rd),
            "in" => Some(ActionOp::In),
            _ => None,
        }
    }
}

/// Whether a Linda head is the process side, the tuple-space mirror, or the
/// synchronised completion of both.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LindaKind {
    Act,
    Dual,
    Tau,
}

/// A ground Linda action such as `out(42,43)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundAction {
    pub op: ActionOp,
    pub tuple: Vec<Value>,
}

impl fmt::Display for GroundAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.op.keyword(), join_values(&self.tuple))
    }
}

/// The semantics-specific constructor of a label.
///
/// `out`, `rd` and `in` are reserved for Linda heads; every other name is a
/// plain named head such as `s1(0,1)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Head {
    Identity,
    Named {
        name: String,
        params: Vec<Value>,
    },
    Linda {
        kind: LindaKind,
        action: GroundAction,
    },
    /// A product of heads, flattened and sorted.
    Composite(Vec<Head>),
}

impl Head {
    pub fn named(name: impl Into<String>, params: impl IntoIterator<Item = i64>) -> Self {
        Head::Named {
            name: name.into(),
            params: params.into_iter().map(Value).collect(),
        }
    }

    /// Joins two heads into a composite; identities vanish.
    pub fn join(a: &Head, b: &Head) -> Head {
        let mut parts = Vec::new();
        for h in [a, b] {
            match h {
                Head::Identity => {}
                Head::Composite(xs) => parts.extend(xs.iter().cloned()),
                other => parts.push(other.clone()),
            }
        }
        parts.sort();
        match parts.len() {
            0 => Head::Identity,
            1 => parts.pop().unwrap(),
            _ => Head::Composite(parts),
        }
    }

    /// The atomic heads making up this head.
    pub fn parts(&self) -> Vec<&Head> {
        match self {
            Head::Identity => Vec::new(),
            Head::Composite(xs) => xs.iter().collect(),
            h => vec![h],
        }
    }

    pub fn linda(&self) -> Option<(LindaKind, &GroundAction)> {
        match self {
            Head::Linda { kind, action } => Some((*kind, action)),
            _ => None,
        }
    }
}

fn join_values(vs: &[Value]) -> String {
    vs.iter()
        .map(|v| v.0.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Display for Head {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Head::Identity => f.write_str("ε"),
            Head::Named { name, params } if params.is_empty() => f.write_str(name),
            Head::Named { name, params } => write!(f, "{}({})", name, join_values(params)),
            Head::Linda { kind, action } => {
                let prefix = match kind {
                    LindaKind::Act => "",
                    LindaKind::Dual => "~",
                    LindaKind::Tau => "τ",
                };
                write!(f, "{prefix}{action}")
            }
            Head::Composite(xs) => {
                let s: Vec<String> = xs.iter().map(|h| h.to_string()).collect();
                f.write_str(&s.join("·"))
            }
        }
    }
}

fn parse_atom(s: &str) -> Result<Head, CoreError> {
    let bad = || CoreError::BadHead(s.to_string());
    let s = s.trim();
    if s.is_empty() {
        return Err(bad());
    }
    if s == "ε" {
        return Ok(Head::Identity);
    }
    let (kind, rest) = if let Some(r) = s.strip_prefix('~') {
        (Some(LindaKind::Dual), r)
    } else if let Some(r) = s.strip_prefix('τ') {
        (Some(LindaKind::Tau), r)
    } else {
        (None, s)
    };
    let (name, params) = match rest.find('(') {
        Some(i) => {
            let inner = rest[i + 1..].strip_suffix(')').ok_or_else(bad)?;
            let params = if inner.trim().is_empty() {
                Vec::new()
            } else {
                inner
                    .split(',')
                    .map(|t| t.trim().parse::<i64>().map(Value).map_err(|_| bad()))
                    .collect::<Result<Vec<_>, _>>()?
            };
            (&rest[..i], params)
        }
        None => (rest, Vec::new()),
    };
    if name.is_empty() || name.contains(['(', ')', ',', '·']) {
        return Err(bad());
    }
    match (ActionOp::from_keyword(name), kind) {
        (Some(op), k) => Ok(Head::Linda {
            kind: k.unwrap_or(LindaKind::Act),
            action: GroundAction { op, tuple: params },
        }),
        (None, None) => Ok(Head::Named {
            name: name.to_string(),
            params,
        }),
        (None, Some(_)) => Err(bad()),
    }
}

impl FromStr for Head {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split('·').collect();
        if parts.len() == 1 {
            return parse_atom(parts[0]);
        }
        let mut atoms = parts
            .into_iter()
            .map(parse_atom)
            .collect::<Result<Vec<_>, _>>()?;
        if atoms.contains(&Head::Identity) {
            return Err(CoreError::BadHead(s.to_string()));
        }
        atoms.sort();
        Ok(Head::Composite(atoms))
    }
}

impl Serialize for Head {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Head {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A transition label: a head, the atomic step it denotes, the ports that
/// are required NOT to flow, and an optional process tag.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label {
    pub head: Head,
    pub step: AtomicStep,
    pub noflow: PortSet,
    pub tag: Option<ProcessId>,
}

impl Label {
    pub fn new(head: Head, step: AtomicStep) -> Self {
        Label {
            head,
            step,
            noflow: PortSet::new(),
            tag: None,
        }
    }

    pub fn with_noflow(mut self, noflow: PortSet) -> Self {
        self.noflow = noflow;
        self
    }

    pub fn with_tag(mut self, tag: Option<ProcessId>) -> Self {
        self.tag = tag;
        self
    }

    /// The identity label ε over `scope`.
    pub fn identity(scope: Scope) -> Self {
        Label::new(Head::Identity, AtomicStep::idle(scope))
    }

    pub fn is_identity(&self) -> bool {
        self.head == Head::Identity
    }

    /// The atomic step of the label.
    pub fn alpha(&self) -> &AtomicStep {
        &self.step
    }

    pub fn scope(&self) -> &Scope {
        &self.step.scope
    }

    /// Same label over a larger scope.
    pub fn widen(mut self, scope: &Scope) -> Self {
        self.step.scope = self.step.scope.union(scope);
        self
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        if !self.noflow.is_empty() {
            write!(f, "^{}", crate::port::fmt_ports(&self.noflow))?;
        }
        if let Some(t) = &self.tag {
            write!(f, "@{t}")?;
        }
        Ok(())
    }
}

/// `ℓ↾P′`: intersects every component with `ports`. A label left with
/// neither flow nor no-flow collapses to ε.
pub fn restrict(label: &Label, ports: &Scope) -> Label {
    let step = label.step.restrict(ports);
    let noflow = ports.filter(&label.noflow);
    if step.flow.is_empty() && noflow.is_empty() {
        return Label::identity(step.scope);
    }
    Label {
        head: label.head.clone(),
        step,
        noflow,
        tag: label.tag.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::port::{ports, Port};

    #[test]
    fn heads_round_trip_through_text() {
        for s in [
            "ε",
            "s1(1,0)·s4(0)",
            "out(42,43)",
            "~rd(1)",
            "τin(2,-1)",
            "cas",
            "fill(0)",
        ] {
            let h: Head = s.parse().unwrap();
            assert_eq!(h.to_string(), s);
        }
        assert!("~foo(1)".parse::<Head>().is_err());
        assert!("s(1".parse::<Head>().is_err());
    }

    #[test]
    fn join_flattens_and_sorts() {
        let a = Head::named("s4", [0]);
        let b = Head::Composite(vec![Head::named("s1", [1, 0]), Head::named("x", [])]);
        let j = Head::join(&a, &b);
        assert_eq!(j.to_string(), "s1(1,0)·s4(0)·x");
        assert_eq!(Head::join(&Head::Identity, &a), a);
    }

    #[test]
    fn restriction_to_disjoint_ports_is_identity() {
        let step = AtomicStep::new(
            Scope::from(ports(["a", "b", "c"])),
            ports(["c"]),
            PortSet::new(),
            ports(["c"]),
            [(Port::new("c"), Value(1))].into_iter().collect(),
        );
        let l = Label::new(Head::named("s2", [1]), step);
        assert!(restrict(&l, &Scope::from(ports(["a'", "a"]))).is_identity());
        assert_eq!(restrict(&l, l.scope()), l);
    }
}
