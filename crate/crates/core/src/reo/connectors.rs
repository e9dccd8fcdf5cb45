//! Hand-built connectors and boundary components.

use crate::automaton::ExplicitAutomaton;
use crate::label::{Head, Label};
use crate::port::{DataMap, Domain, Port, PortSet, Scope, Value};
use crate::predicate::ConcurrencyPredicate;
use crate::reo::ReoAlgebra;
use crate::step::AtomicStep;

fn p(s: impl AsRef<str>) -> Port {
    Port::new(s)
}

fn set(ps: &[&Port]) -> PortSet {
    ps.iter().map(|p| (*p).clone()).collect()
}

fn data(pairs: &[(&Port, Value)]) -> DataMap {
    pairs.iter().map(|(p, v)| ((*p).clone(), *v)).collect()
}

fn label(
    name: &str,
    params: &[Value],
    scope: &PortSet,
    step: (&[&Port], &[&Port], &[&Port], DataMap),
) -> Label {
    let (flow, ip, op, d) = step;
    Label::new(
        Head::Named {
            name: name.to_string(),
            params: params.to_vec(),
        },
        AtomicStep::new(Scope::from(scope.clone()), set(flow), set(ip), set(op), d),
    )
}

/// The overwriting lossy FIFO between `src` (a′) and `snk` (a).
///
/// `s3(v)` stores `v` arriving on `src`, replacing any buffered value;
/// `s4(v)` hands the buffered `v` out on `snk`.
pub fn lossy_fifo(
    src: impl AsRef<str>,
    snk: impl AsRef<str>,
    domain: &Domain,
) -> ExplicitAutomaton {
    let (a1, a) = (p(src), p(snk));
    let ports = set(&[&a1, &a]);
    let cp = || ConcurrencyPredicate::excl(ports.clone());
    let mut b = ExplicitAutomaton::builder(ports.clone(), ReoAlgebra::shared());
    let empty = b.state("empty", cp());
    b.initial(empty);
    let s3 = |v: Value| label("s3", &[v], &ports, (&[&a1], &[&a1], &[], data(&[(&a1, v)])));
    let s4 = |v: Value| label("s4", &[v], &ports, (&[&a], &[], &[&a], data(&[(&a, v)])));
    for &v in domain.values() {
        let full = b.state(format!("full({v})"), cp());
        b.transition(empty, s3(v), full);
        b.transition(full, s4(v), empty);
        for &w in domain.values() {
            let other = b.state(format!("full({w})"), cp());
            b.transition(full, s3(w), other);
        }
    }
    b.build()
}

/// The alternating coordinator: `s1(v,w)` reads `w` on `a` and `v` on `b`
/// and writes `w` to `c`; `s2(v)` then writes the stored `v` to `c`.
pub fn alternating_coordinator(
    a: impl AsRef<str>,
    b: impl AsRef<str>,
    c: impl AsRef<str>,
    domain: &Domain,
) -> ExplicitAutomaton {
    let (a, bp, c) = (p(a), p(b), p(c));
    let ports = set(&[&a, &bp, &c]);
    let cp = || ConcurrencyPredicate::excl(ports.clone());
    let mut bld = ExplicitAutomaton::builder(ports.clone(), ReoAlgebra::shared());
    let q0 = bld.state("q0", cp());
    bld.initial(q0);
    for &v in domain.values() {
        let q1 = bld.state(format!("q1({v})"), cp());
        for &w in domain.values() {
            let s1 = label(
                "s1",
                &[v, w],
                &ports,
                (
                    &[&a, &bp, &c],
                    &[&a, &bp],
                    &[&c],
                    data(&[(&a, w), (&bp, v), (&c, w)]),
                ),
            );
            bld.transition(q0, s1, q1);
        }
        let s2 = label("s2", &[v], &ports, (&[&c], &[], &[&c], data(&[(&c, v)])));
        bld.transition(q1, s2, q0);
    }
    bld.build()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WriterMode {
    /// Offers the values in order, then idles (or starts over).
    Sequence { values: Vec<Value>, repeat: bool },
    /// Always ready to write any value of the domain.
    Any,
}

/// A data producer on `port`; its labels are `name(v)`.
pub fn writer(
    name: &str,
    port: impl AsRef<str>,
    mode: &WriterMode,
    domain: &Domain,
) -> ExplicitAutomaton {
    let x = p(port);
    let ports = set(&[&x]);
    let cp = || ConcurrencyPredicate::excl(ports.clone());
    let w = |v: Value| label(name, &[v], &ports, (&[&x], &[], &[&x], data(&[(&x, v)])));
    let mut b = ExplicitAutomaton::builder(ports.clone(), ReoAlgebra::shared());
    match mode {
        WriterMode::Any => {
            let q = b.state("ready", cp());
            b.initial(q);
            for &v in domain.values() {
                b.transition(q, w(v), q);
            }
        }
        WriterMode::Sequence { values, repeat } => {
            let ids: Vec<_> = (0..=values.len())
                .map(|i| b.state(format!("w{i}"), cp()))
                .collect();
            b.initial(ids[0]);
            for (i, &v) in values.iter().enumerate() {
                let next = if *repeat && i + 1 == values.len() {
                    ids[0]
                } else {
                    ids[i + 1]
                };
                b.transition(ids[i], w(v), next);
            }
        }
    }
    b.build()
}

/// A data consumer on `port`: `name(v) = ⟨c, c, c, ∅, {c ↦ v}⟩`. A blocked
/// reader never takes data.
pub fn reader(
    name: &str,
    port: impl AsRef<str>,
    domain: &Domain,
    blocked: bool,
) -> ExplicitAutomaton {
    let c = p(port);
    let ports = set(&[&c]);
    let mut b = ExplicitAutomaton::builder(ports.clone(), ReoAlgebra::shared());
    let q = b.state("ready", ConcurrencyPredicate::excl(ports.clone()));
    b.initial(q);
    if !blocked {
        for &v in domain.values() {
            b.transition(
                q,
                label(name, &[v], &ports, (&[&c], &[&c], &[], data(&[(&c, v)]))),
                q,
            );
        }
    }
    b.build()
}

/// LossySync from `a` to `b` whose lossy step `s2ᵇ(v)` insists on no flow
/// at `b`, so it cannot drop data that `b` could have accepted.
pub fn make_context_lossy(
    a: impl AsRef<str>,
    b: impl AsRef<str>,
    domain: &Domain,
) -> ExplicitAutomaton {
    let (a, bp) = (p(a), p(b));
    let ports = set(&[&a, &bp]);
    let mut bld = ExplicitAutomaton::builder(ports.clone(), ReoAlgebra::shared());
    let q = bld.state(
        "q",
        ConcurrencyPredicate::ctx(ports.clone(), PortSet::new()),
    );
    bld.initial(q);
    for &v in domain.values() {
        let s1 = label(
            "s1",
            &[v],
            &ports,
            (&[&a, &bp], &[], &[&a, &bp], data(&[(&a, v), (&bp, v)])),
        );
        let s2 = label("s2", &[v], &ports, (&[&a], &[], &[&a], data(&[(&a, v)])))
            .with_noflow(set(&[&bp]));
        bld.transition(q, s1, q);
        bld.transition(q, s2, q);
    }
    bld.build()
}

/// FIFO1 from `b` to `c` with context predicates: when empty it objects to
/// labels forbidding flow on `b`, when full to labels forbidding flow on `c`.
pub fn context_fifo(b: impl AsRef<str>, c: impl AsRef<str>, domain: &Domain) -> ExplicitAutomaton {
    let (bp, c) = (p(b), p(c));
    let ports = set(&[&bp, &c]);
    let mut bld = ExplicitAutomaton::builder(ports.clone(), ReoAlgebra::shared());
    let empty = bld.state(
        "empty",
        ConcurrencyPredicate::ctx(ports.clone(), set(&[&bp])),
    );
    bld.initial(empty);
    for &v in domain.values() {
        let full = bld.state(
            format!("full({v})"),
            ConcurrencyPredicate::ctx(ports.clone(), set(&[&c])),
        );
        let s3 = label("s3", &[v], &ports, (&[&bp], &[], &[&bp], data(&[(&bp, v)])));
        let s4 = label("s4", &[v], &ports, (&[&c], &[], &[&c], data(&[(&c, v)])));
        bld.transition(empty, s3, full);
        bld.transition(full, s4, empty);
    }
    bld.build()
}
