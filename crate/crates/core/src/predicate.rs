//! Concurrency predicates as symbolic terms.
//!
//! A predicate describes the labels that need this automaton's cooperation.
//! Labels outside it may fire while the automaton stays put.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::label::{Label, LindaKind, ProcessId};
use crate::port::PortSet;

pub type LabelTest = Arc<dyn Fn(&Label) -> bool + Send + Sync>;

#[derive(Clone)]
pub enum ConcurrencyPredicate {
    /// Labels flowing on any port of the set.
    Excl(PortSet),
    /// `Excl(ports)` or labels whose no-flow set meets `noflow`.
    Ctx {
        ports: PortSet,
        noflow: PortSet,
    },
    /// Raw Linda actions and their duals.
    LindaBase,
    /// Base Linda predicate plus τ steps of processes ranked no higher than
    /// `process`, as long as `process` has not ended. `order` lists process
    /// ids from highest to lowest priority.
    LindaPriority {
        process: ProcessId,
        ended: bool,
        order: Vec<ProcessId>,
    },
    Union(Box<ConcurrencyPredicate>, Box<ConcurrencyPredicate>),
    Never,
    /// An arbitrary membership test; the only kind allowed to contain ε.
    Custom {
        name: String,
        test: LabelTest,
    },
}

impl ConcurrencyPredicate {
    pub fn excl(ports: PortSet) -> Self {
        ConcurrencyPredicate::Excl(ports)
    }

    pub fn ctx(ports: PortSet, noflow: PortSet) -> Self {
        ConcurrencyPredicate::Ctx { ports, noflow }
    }

    /// The predicate holding for every label, ε included.
    pub fn all() -> Self {
        ConcurrencyPredicate::Custom {
            name: "all".into(),
            test: Arc::new(|_| true),
        }
    }

    pub fn union(a: Self, b: Self) -> Self {
        match (a, b) {
            (ConcurrencyPredicate::Never, x) | (x, ConcurrencyPredicate::Never) => x,
            (a, b) => ConcurrencyPredicate::Union(Box::new(a), Box::new(b)),
        }
    }

    pub fn union_all(items: impl IntoIterator<Item = Self>) -> Self {
        items
            .into_iter()
            .fold(ConcurrencyPredicate::Never, ConcurrencyPredicate::union)
    }

    /// True when membership can only grow as the flow set grows, so a label
    /// already blocked stays blocked under further composition.
    pub fn is_flow_monotone(&self) -> bool {
        match self {
            ConcurrencyPredicate::Excl(_) | ConcurrencyPredicate::Never => true,
            ConcurrencyPredicate::Union(a, b) => a.is_flow_monotone() && b.is_flow_monotone(),
            _ => false,
        }
    }
}

/// Position in the priority list, 0 being highest; unknown ids rank lowest.
fn rank(order: &[ProcessId], p: &ProcessId) -> usize {
    order.iter().position(|x| x == p).unwrap_or(order.len())
}

/// Membership test `ℓ ∈ C`.
pub fn cp_contains(cp: &ConcurrencyPredicate, label: &Label) -> bool {
    if let ConcurrencyPredicate::Custom { test, .. } = cp {
        return test(label);
    }
    if label.is_identity() {
        return false;
    }
    match cp {
        ConcurrencyPredicate::Excl(p0) => !label.step.flow.is_disjoint(p0),
        ConcurrencyPredicate::Ctx { ports, noflow } => {
            !label.step.flow.is_disjoint(ports) || !label.noflow.is_disjoint(noflow)
        }
        ConcurrencyPredicate::LindaBase => matches!(
            label.head.linda(),
            Some((LindaKind::Act | LindaKind::Dual, _))
        ),
        ConcurrencyPredicate::LindaPriority {
            process,
            ended,
            order,
        } => match label.head.linda() {
            Some((LindaKind::Act | LindaKind::Dual, _)) => true,
            Some((LindaKind::Tau, _)) => match &label.tag {
                // x ⪯ p: x ranks at or below p.
                Some(x) => !ended && rank(order, x) >= rank(order, process),
                None => false,
            },
            None => false,
        },
        ConcurrencyPredicate::Union(a, b) => cp_contains(a, label) || cp_contains(b, label),
        ConcurrencyPredicate::Never => false,
        ConcurrencyPredicate::Custom { .. } => unreachable!(),
    }
}

impl fmt::Debug for ConcurrencyPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ConcurrencyPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::port::fmt_ports;
        match self {
            ConcurrencyPredicate::Excl(p) => write!(f, "excl{}", fmt_ports(p)),
            ConcurrencyPredicate::Ctx { ports, noflow } => {
                write!(f, "ctx({},{})", fmt_ports(ports), fmt_ports(noflow))
            }
            ConcurrencyPredicate::LindaBase => f.write_str("linda"),
            ConcurrencyPredicate::LindaPriority { process, ended, .. } => {
                write!(
                    f,
                    "linda_prio({process}{})",
                    if *ended { ",end" } else { "" }
                )
            }
            ConcurrencyPredicate::Union(a, b) => write!(f, "{a} ∪ {b}"),
            ConcurrencyPredicate::Never => f.write_str("never"),
            ConcurrencyPredicate::Custom { name, .. } => write!(f, "custom:{name}"),
        }
    }
}

impl PartialEq for ConcurrencyPredicate {
    fn eq(&self, other: &Self) -> bool {
        Repr::from(self) == Repr::from(other)
    }
}

impl Eq for ConcurrencyPredicate {}

#[derive(Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case")]
enum Repr {
    Excl(PortSet),
    Ctx {
        ports: PortSet,
        noflow: PortSet,
    },
    LindaBase,
    LindaPriority {
        process: ProcessId,
        ended: bool,
        order: Vec<ProcessId>,
    },
    Union(Box<Repr>, Box<Repr>),
    Never,
    Custom(String),
}

impl From<&ConcurrencyPredicate> for Repr {
    fn from(cp: &ConcurrencyPredicate) -> Self {
        match cp {
            ConcurrencyPredicate::Excl(p) => Repr::Excl(p.clone()),
            ConcurrencyPredicate::Ctx { ports, noflow } => Repr::Ctx {
                ports: ports.clone(),
                noflow: noflow.clone(),
            },
            ConcurrencyPredicate::LindaBase => Repr::LindaBase,
            ConcurrencyPredicate::LindaPriority {
                process,
                ended,
                order,
            } => Repr::LindaPriority {
                process: process.clone(),
                ended: *ended,
                order: order.clone(),
            },
            ConcurrencyPredicate::Union(a, b) => {
                Repr::Union(Box::new(Repr::from(&**a)), Box::new(Repr::from(&**b)))
            }
            ConcurrencyPredicate::Never => Repr::Never,
            ConcurrencyPredicate::Custom { name, .. } => Repr::Custom(name.clone()),
        }
    }
}

impl TryFrom<Repr> for ConcurrencyPredicate {
    type Error = String;

    fn try_from(r: Repr) -> Result<Self, String> {
        Ok(match r {
            Repr::Excl(p) => ConcurrencyPredicate::Excl(p),
            Repr::Ctx { ports, noflow } => ConcurrencyPredicate::Ctx { ports, noflow },
            Repr::LindaBase => ConcurrencyPredicate::LindaBase,
            Repr::LindaPriority {
                process,
                ended,
                order,
            } => ConcurrencyPredicate::LindaPriority {
                process,
                ended,
                order,
            },
            Repr::Union(a, b) => {
                ConcurrencyPredicate::Union(Box::new((*a).try_into()?), Box::new((*b).try_into()?))
            }
            Repr::Never => ConcurrencyPredicate::Never,
            Repr::Custom(name) if name == "all" => ConcurrencyPredicate::all(),
            Repr::Custom(name) => return Err(format!("unknown custom predicate {name:?}")),
        })
    }
}

impl Serialize for ConcurrencyPredicate {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Repr::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ConcurrencyPredicate {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Repr::deserialize(d)?
            .try_into()
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::{ActionOp, GroundAction, Head};
    use crate::port::{ports, Port, Scope, Value};
    use crate::step::AtomicStep;

    fn flow_label(flow: &[&str], noflow: &[&str]) -> Label {
        let f = ports(flow);
        let step = AtomicStep::new(
            Scope::from(ports(["a", "b", "c"])),
            f.clone(),
            PortSet::new(),
            f.clone(),
            f.iter().map(|p: &Port| (p.clone(), Value(0))).collect(),
        );
        Label::new(Head::named("s", []), step).with_noflow(ports(noflow))
    }

    fn tau(tag: &str) -> Label {
        let head = Head::Linda {
            kind: LindaKind::Tau,
            action: GroundAction {
                op: ActionOp::In,
                tuple: vec![Value(1)],
            },
        };
        Label::new(head, AtomicStep::idle(Scope::Universe)).with_tag(Some(ProcessId::new(tag)))
    }

    #[test]
    fn excl_and_ctx_membership() {
        let excl = ConcurrencyPredicate::excl(ports(["a", "b", "c"]));
        assert!(cp_contains(&excl, &flow_label(&["c"], &[])));
        assert!(!cp_contains(&excl, &Label::identity(Scope::empty())));
        let ctx = ConcurrencyPredicate::ctx(ports(["b", "c"]), ports(["b"]));
        assert!(cp_contains(&ctx, &flow_label(&["a"], &["b"])));
        assert!(!cp_contains(&ctx, &flow_label(&["a"], &[])));
    }

    #[test]
    fn priority_blocks_lower_ranked_tau() {
        let order = vec![ProcessId::new("p2"), ProcessId::new("p1")];
        let p2 = ConcurrencyPredicate::LindaPriority {
            process: ProcessId::new("p2"),
            ended: false,
            order: order.clone(),
        };
        assert!(cp_contains(&p2, &tau("p1")));
        let p1 = ConcurrencyPredicate::LindaPriority {
            process: ProcessId::new("p1"),
            ended: false,
            order,
        };
        assert!(!cp_contains(&p1, &tau("p2")));
        assert!(!cp_contains(&ConcurrencyPredicate::LindaBase, &tau("p1")));
    }

    #[test]
    fn json_round_trip() {
        let cp = ConcurrencyPredicate::union(
            ConcurrencyPredicate::excl(ports(["a"])),
            ConcurrencyPredicate::ctx(ports(["b"]), ports(["c"])),
        );
        let s = serde_json::to_string(&cp).unwrap();
        assert_eq!(
            s,
            r#"{"union":[{"excl":["a"]},{"ctx":{"ports":["b"],"noflow":["c"]}}]}"#
        );
        let back: ConcurrencyPredicate = serde_json::from_str(&s).unwrap();
        assert_eq!(back, cp);
        let all: ConcurrencyPredicate = serde_json::from_str(r#"{"custom":"all"}"#).unwrap();
        assert!(cp_contains(&all, &Label::identity(Scope::empty())));
    }
}
