//! JSON network specifications and the networks they describe.
//!
//! ```json
//! {
//!   "domain": [0, 1],
//!   "reo": [{"kind": "lossy_fifo", "name": "LF", "ports": ["a'", "a"]}],
//!   "context_reo": [{"kind": "fifo1", "name": "F", "ports": ["b", "c"]}],
//!   "linda": {"processes": [{"id": "p1", "source": "out(1).end"}], "tuples": [[2]]},
//!   "components": [{"kind": "writer", "name": "w", "port": "a'", "values": [0, 1]}]
//! }
//! ```
//!
//! Reo kinds are the primitive keywords plus `lossy_fifo` and
//! `alternator`. Ends are plugged by name, and no port may be used by more
//! than two ends.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automaton::{Automaton, ExplicitAutomaton};
use crate::label::ProcessId;
use crate::linda::{encode_factors, parse_process, LindaError, Process, Tuple, TupleSpaceTerm};
use crate::port::{Domain, Port, Value};
use crate::predicate::ConcurrencyPredicate;
use crate::reo::{
    alternating_coordinator, context_fifo, encode_ca, lossy_fifo, make_context_lossy, primitive,
    reader, writer, ConstraintAutomaton, PrimitiveKind, ReoAlgebra, ReoError, WriterMode,
};
use crate::sim::{Network, SimError};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkSpec {
    #[serde(default = "binary_domain")]
    pub domain: Vec<i64>,
    #[serde(default)]
    pub reo: Vec<ReoSpec>,
    #[serde(default)]
    pub context_reo: Vec<ReoSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linda: Option<LindaSpec>,
    #[serde(default)]
    pub components: Vec<ComponentSpec>,
}

fn binary_domain() -> Vec<i64> {
    vec![0, 1]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReoSpec {
    pub kind: String,
    pub name: String,
    pub ports: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LindaSpec {
    pub processes: Vec<ProcessSpec>,
    #[serde(default)]
    pub tuples: Vec<Vec<i64>>,
    /// Process ids, highest priority first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub priority: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProcessSpec {
    pub id: String,
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ComponentSpec {
    /// Writes `values` in order (then stops, or starts over with `repeat`);
    /// without values it can write anything at any time.
    Writer {
        name: String,
        port: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        values: Option<Vec<i64>>,
        #[serde(default)]
        repeat: bool,
    },
    Reader {
        name: String,
        port: String,
        #[serde(default)]
        blocked: bool,
    },
    /// A stateless automaton whose predicate holds for every label. It
    /// violates locality; useful to exercise `check`.
    Blocker { name: String, ports: Vec<String> },
}

impl ComponentSpec {
    pub fn name(&self) -> &str {
        match self {
            ComponentSpec::Writer { name, .. }
            | ComponentSpec::Reader { name, .. }
            | ComponentSpec::Blocker { name, .. } => name,
        }
    }

    fn ports(&self) -> Vec<&str> {
        match self {
            ComponentSpec::Writer { port, .. } | ComponentSpec::Reader { port, .. } => vec![port],
            ComponentSpec::Blocker { ports, .. } => ports.iter().map(|s| s.as_str()).collect(),
        }
    }
}

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("invalid spec at line {line}, column {column}: {msg}")]
    Parse {
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("{field}: {msg}")]
    Field { field: String, msg: String },
    #[error("port {port} is used by {uses} ends; ends plug together in pairs")]
    Wiring { port: String, uses: usize },
    #[error(transparent)]
    Reo(#[from] ReoError),
    #[error(transparent)]
    Linda(#[from] LindaError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

fn field(field: impl Into<String>, msg: impl Into<String>) -> SpecError {
    SpecError::Field {
        field: field.into(),
        msg: msg.into(),
    }
}

/// Parses and validates a spec.
pub fn parse_spec(text: &str) -> Result<NetworkSpec, SpecError> {
    let spec: NetworkSpec = serde_json::from_str(text).map_err(|e| SpecError::Parse {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })?;
    spec.validate()?;
    Ok(spec)
}

impl NetworkSpec {
    pub fn validate(&self) -> Result<(), SpecError> {
        if self.domain.is_empty() {
            return Err(field("domain", "must not be empty"));
        }
        let mut names = BTreeSet::new();
        let mut uses: BTreeMap<&str, usize> = BTreeMap::new();
        let reo = self.reo.iter().map(|r| ("reo", r));
        let ctx = self.context_reo.iter().map(|r| ("context_reo", r));
        for (i, (list, r)) in reo.chain(ctx).enumerate() {
            if !names.insert(r.name.as_str()) {
                return Err(field(
                    format!("{list}[{i}].name"),
                    format!("duplicate name {:?}", r.name),
                ));
            }
            for p in &r.ports {
                *uses.entry(p).or_default() += 1;
            }
        }
        for (i, c) in self.components.iter().enumerate() {
            if !names.insert(c.name()) {
                return Err(field(
                    format!("components[{i}].name"),
                    format!("duplicate name {:?}", c.name()),
                ));
            }
            for p in c.ports() {
                *uses.entry(p).or_default() += 1;
            }
        }
        if let Some((port, &n)) = uses.iter().find(|(_, &n)| n > 2) {
            return Err(SpecError::Wiring {
                port: port.to_string(),
                uses: n,
            });
        }
        if let Some(l) = &self.linda {
            if !self.reo.is_empty() || !self.context_reo.is_empty() || !self.components.is_empty() {
                return Err(field(
                    "linda",
                    "cannot be combined with Reo connectors or components",
                ));
            }
            let mut ids = BTreeSet::new();
            for (i, p) in l.processes.iter().enumerate() {
                if !ids.insert(p.id.as_str()) {
                    return Err(field(
                        format!("linda.processes[{i}].id"),
                        format!("duplicate id {:?}", p.id),
                    ));
                }
            }
            if let Some(order) = &l.priority {
                for id in order {
                    if !ids.contains(id.as_str()) {
                        return Err(field("linda.priority", format!("unknown process {id:?}")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serialises")
    }
}

/// A built network plus what the checks need to know about its parts.
pub struct BuiltNetwork {
    pub network: Network,
    pub domain: Domain,
    /// Network index and constraint automaton of every plain Reo primitive.
    pub primitives: Vec<(usize, ConstraintAutomaton)>,
    /// The Linda term, when the spec describes one.
    pub linda: Option<TupleSpaceTerm>,
}

fn ports(names: &[String]) -> Vec<Port> {
    names.iter().map(Port::new).collect()
}

fn arity(kind: &str, ports: &[String], n: usize) -> Result<(), SpecError> {
    if ports.len() != n {
        return Err(ReoError::ArityError {
            kind: kind.to_string(),
            expected: n.to_string(),
            got: ports.len(),
        }
        .into());
    }
    Ok(())
}

fn blocker(ports: &[String]) -> ExplicitAutomaton {
    let ps = crate::port::ports(ports.iter().map(|s| s.as_str()));
    let mut b = ExplicitAutomaton::builder(ps, ReoAlgebra::shared());
    let q = b.state("q", ConcurrencyPredicate::all());
    b.initial(q);
    b.build()
}

/// Builds the network: Reo connectors, context connectors and components
/// in the order listed, or the Linda processes followed by the store.
pub fn build_network(spec: &NetworkSpec) -> Result<BuiltNetwork, SpecError> {
    spec.validate()?;
    let domain = Domain::new(spec.domain.iter().copied());
    let mut entries: Vec<(String, Automaton)> = Vec::new();
    let mut primitives = Vec::new();
    for r in &spec.reo {
        let a: Automaton = match r.kind.as_str() {
            "lossy_fifo" => {
                arity(&r.kind, &r.ports, 2)?;
                Arc::new(lossy_fifo(&r.ports[0], &r.ports[1], &domain))
            }
            "alternator" => {
                arity(&r.kind, &r.ports, 3)?;
                Arc::new(alternating_coordinator(
                    &r.ports[0],
                    &r.ports[1],
                    &r.ports[2],
                    &domain,
                ))
            }
            kind => {
                let kind: PrimitiveKind = kind.parse()?;
                let ca = primitive(kind, &r.name, &ports(&r.ports), &domain)?;
                let a = Arc::new(encode_ca(&ca, &domain)?);
                primitives.push((entries.len(), ca));
                a
            }
        };
        entries.push((r.name.clone(), a));
    }
    for r in &spec.context_reo {
        arity(&r.kind, &r.ports, 2)?;
        let a: Automaton = match r.kind.as_str() {
            "lossy_sync" => Arc::new(make_context_lossy(&r.ports[0], &r.ports[1], &domain)),
            "fifo1" => Arc::new(context_fifo(&r.ports[0], &r.ports[1], &domain)),
            other => return Err(ReoError::UnknownKind(other.to_string()).into()),
        };
        entries.push((r.name.clone(), a));
    }
    for c in &spec.components {
        let a: Automaton = match c {
            ComponentSpec::Writer {
                name,
                port,
                values,
                repeat,
            } => {
                let mode = match values {
                    Some(vs) => WriterMode::Sequence {
                        values: vs.iter().copied().map(Value).collect(),
                        repeat: *repeat,
                    },
                    None => WriterMode::Any,
                };
                Arc::new(writer(name, port, &mode, &domain))
            }
            ComponentSpec::Reader {
                name,
                port,
                blocked,
            } => Arc::new(reader(name, port, &domain, *blocked)),
            ComponentSpec::Blocker { ports, .. } => Arc::new(blocker(ports)),
        };
        entries.push((c.name().to_string(), a));
    }
    let mut linda = None;
    if let Some(l) = &spec.linda {
        let procs = l
            .processes
            .iter()
            .map(|p| Ok((ProcessId::new(&p.id), parse_process(&p.source)?)))
            .collect::<Result<Vec<(ProcessId, Process)>, LindaError>>()?;
        let tuples: Vec<Tuple> = l
            .tuples
            .iter()
            .map(|t| Tuple::ground(t.iter().copied()))
            .collect();
        let priority = l
            .priority
            .as_ref()
            .map(|o| o.iter().map(ProcessId::new).collect());
        let factors = encode_factors(&procs, &tuples, priority)?;
        let names = procs
            .iter()
            .map(|(id, _)| id.to_string())
            .chain(["tuplespace".to_string()]);
        entries.extend(names.zip(factors));
        linda = Some(TupleSpaceTerm::new(
            procs.into_iter().map(|(_, p)| p).collect(),
            l.tuples
                .iter()
                .map(|t| t.iter().copied().map(Value).collect())
                .collect(),
        ));
    }
    let network = Network::new(entries, &domain)?;
    Ok(BuiltNetwork {
        network,
        domain,
        primitives,
        linda,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_spec_builds_an_empty_network() {
        let spec = parse_spec("{}").unwrap();
        let built = build_network(&spec).unwrap();
        assert!(built.network.is_empty());
        assert_eq!(crate::sim::explore(&built.network, 10).states.len(), 1);
    }

    #[test]
    fn triple_use_is_a_wiring_error() {
        let text = r#"{"reo": [
            {"kind": "sync", "name": "s1", "ports": ["a", "b"]},
            {"kind": "sync", "name": "s2", "ports": ["b", "c"]},
            {"kind": "sync_drain", "name": "s3", "ports": ["b", "d"]}
        ]}"#;
        match parse_spec(text) {
            Err(SpecError::Wiring { port, uses }) => {
                assert_eq!(port, "b");
                assert_eq!(uses, 3);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_positions() {
        match parse_spec("{\n  \"domain\": [0,\n  \"x\"]\n}") {
            Err(SpecError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_spec(r#"{"bogus": 1}"#),
            Err(SpecError::Parse { .. })
        ));
    }

    #[test]
    fn linda_ids_are_unique() {
        let text = r#"{"linda": {"processes": [
            {"id": "p", "source": "end"}, {"id": "p", "source": "end"}]}}"#;
        assert!(matches!(parse_spec(text), Err(SpecError::Field { .. })));
    }

    #[test]
    fn round_trips_through_json() {
        let text = r#"{"domain": [0, 1],
            "reo": [{"kind": "lossy_fifo", "name": "LF", "ports": ["a'", "a"]}],
            "components": [{"kind": "writer", "name": "w", "port": "a'", "values": [1], "repeat": true},
                           {"kind": "reader", "name": "r", "port": "a"}]}"#;
        let spec = parse_spec(text).unwrap();
        assert_eq!(parse_spec(&spec.to_json()).unwrap(), spec);
        let built = build_network(&spec).unwrap();
        assert_eq!(built.network.len(), 3);
        assert!(built.network.all_certified());
    }
}
