//! Reo connectors as behavioural automata.
//!
//! Constraint automata are encoded by enumerating the solutions of each
//! guard over a finite domain. The same label algebra also covers
//! hand-built automata whose steps have proper input ports (the lossy FIFO,
//! the alternating coordinator, readers) and context labels that forbid
//! flow on some ports.

mod ca;
mod connectors;
mod constraint;
mod primitives;

use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{Algebra, LabelAlgebra};
use crate::label::{Head, Label};
use crate::port::{Port, PortSet};
use crate::step::compose_atomic_steps;

pub use ca::{ca_product_oracle, encode_ca, CaTransition, ConstraintAutomaton};
pub use connectors::{
    alternating_coordinator, context_fifo, lossy_fifo, make_context_lossy, reader, writer,
    WriterMode,
};
pub use constraint::{
    assignments, compose_cas, dc_satisfies, enumerate_solutions, CasLabel, DataConstraint,
};
pub use primitives::{primitive, PrimitiveKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReoError {
    #[error("constraint mentions unbound port {0}")]
    UnboundPort(Port),
    #[error("data domain is empty")]
    EmptyDomain,
    #[error("{kind} expects {expected} ports, got {got}")]
    ArityError {
        kind: String,
        expected: String,
        got: usize,
    },
    #[error("unknown primitive kind {0:?}")]
    UnknownKind(String),
}

/// Composition of Reo steps: both sides agree on which shared ports flow
/// and on their data, and neither flows where the other forbids flow.
#[derive(Debug, Default)]
pub struct ReoAlgebra;

impl ReoAlgebra {
    pub fn shared() -> Algebra {
        Arc::new(ReoAlgebra)
    }
}

impl LabelAlgebra for ReoAlgebra {
    fn name(&self) -> &str {
        "reo"
    }

    fn combine(&self, a: &Label, b: &Label) -> Option<Label> {
        let (sa, sb) = (&a.step, &b.step);
        if sb.scope.filter(&sa.flow) != sa.scope.filter(&sb.flow) {
            return None;
        }
        if !a.noflow.is_disjoint(&sb.flow) || !b.noflow.is_disjoint(&sa.flow) {
            return None;
        }
        let step = compose_atomic_steps(sa, sb).ok()?;
        let noflow: PortSet = a
            .noflow
            .union(&b.noflow)
            .filter(|p| !step.flow.contains(*p))
            .cloned()
            .collect();
        Some(Label {
            head: Head::join(&a.head, &b.head),
            step,
            noflow,
            tag: None,
        })
    }
}
