//! The standard Reo channels and nodes as constraint automata.

use std::fmt;
use std::str::FromStr;

use crate::port::{Domain, Port, PortSet};
use crate::reo::ca::ConstraintAutomaton;
use crate::reo::constraint::DataConstraint;
use crate::reo::ReoError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PrimitiveKind {
    Sync,
    LossySync,
    SyncDrain,
    Fifo1,
    /// Two source ends, one sink end: `merger(a, b, c)`.
    Merger,
    /// One source end, any number (≥ 1) of sink ends.
    Replicator,
}

impl PrimitiveKind {
    pub const ALL: [PrimitiveKind; 6] = [
        PrimitiveKind::Sync,
        PrimitiveKind::LossySync,
        PrimitiveKind::SyncDrain,
        PrimitiveKind::Fifo1,
        PrimitiveKind::Merger,
        PrimitiveKind::Replicator,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            PrimitiveKind::Sync => "sync",
            PrimitiveKind::LossySync => "lossy_sync",
            PrimitiveKind::SyncDrain => "sync_drain",
            PrimitiveKind::Fifo1 => "fifo1",
            PrimitiveKind::Merger => "merger",
            PrimitiveKind::Replicator => "replicator",
        }
    }
}

impl fmt::Display for PrimitiveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

impl FromStr for PrimitiveKind {
    type Err = ReoError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PrimitiveKind::ALL
            .into_iter()
            .find(|k| k.keyword() == s)
            .ok_or_else(|| ReoError::UnknownKind(s.to_string()))
    }
}

fn set(ps: &[&Port]) -> PortSet {
    ps.iter().map(|p| (*p).clone()).collect()
}

/// Builds primitive `kind` over `ports`; transition names are prefixed with
/// `name` so composite heads stay readable.
pub fn primitive(
    kind: PrimitiveKind,
    name: &str,
    ports: &[Port],
    domain: &Domain,
) -> Result<ConstraintAutomaton, ReoError> {
    let arity_ok = match kind {
        PrimitiveKind::Merger => ports.len() == 3,
        PrimitiveKind::Replicator => ports.len() >= 2,
        _ => ports.len() == 2,
    };
    if !arity_ok {
        let expected = match kind {
            PrimitiveKind::Merger => "3",
            PrimitiveKind::Replicator => "at least 2",
            _ => "2",
        };
        return Err(ReoError::ArityError {
            kind: kind.to_string(),
            expected: expected.into(),
            got: ports.len(),
        });
    }
    let all: PortSet = ports.iter().cloned().collect();
    if all.len() != ports.len() {
        return Err(ReoError::ArityError {
            kind: kind.to_string(),
            expected: "distinct ports".into(),
            got: all.len(),
        });
    }
    let mut ca = ConstraintAutomaton::new(all);
    let eq = |a: &Port, b: &Port| DataConstraint::ports_eq(a, b, domain);
    let tn = |suffix: &str| format!("{name}.{suffix}");
    match kind {
        PrimitiveKind::Sync => {
            let q = ca.add_state("q");
            let (a, b) = (&ports[0], &ports[1]);
            ca.add_transition(name, q, set(&[a, b]), eq(a, b), q);
        }
        PrimitiveKind::LossySync => {
            let q = ca.add_state("q");
            let (a, b) = (&ports[0], &ports[1]);
            ca.add_transition(tn("pass"), q, set(&[a, b]), eq(a, b), q);
            ca.add_transition(tn("lose"), q, set(&[a]), DataConstraint::True, q);
        }
        PrimitiveKind::SyncDrain => {
            let q = ca.add_state("q");
            let (a, b) = (&ports[0], &ports[1]);
            ca.add_transition(name, q, set(&[a, b]), DataConstraint::True, q);
        }
        PrimitiveKind::Fifo1 => {
            let (a, b) = (&ports[0], &ports[1]);
            let empty = ca.add_state("empty");
            for &d in domain.values() {
                let full = ca.add_state(format!("full({d})"));
                ca.add_transition(
                    tn("put"),
                    empty,
                    set(&[a]),
                    DataConstraint::Eq(a.clone(), d),
                    full,
                );
                ca.add_transition(
                    tn("take"),
                    full,
                    set(&[b]),
                    DataConstraint::Eq(b.clone(), d),
                    empty,
                );
            }
        }
        PrimitiveKind::Merger => {
            let q = ca.add_state("q");
            let (a, b, c) = (&ports[0], &ports[1], &ports[2]);
            ca.add_transition(tn("left"), q, set(&[a, c]), eq(a, c), q);
            ca.add_transition(tn("right"), q, set(&[b, c]), eq(b, c), q);
        }
        PrimitiveKind::Replicator => {
            let q = ca.add_state("q");
            let src = &ports[0];
            let guard = DataConstraint::all(ports[1..].iter().map(|b| eq(src, b)));
            ca.add_transition(name, q, ca.ports.clone(), guard, q);
        }
    }
    ca.initial.push(0);
    Ok(ca)
}
