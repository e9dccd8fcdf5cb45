//! Errors raised by the automata core.

use thiserror::Error;

use crate::port::{Port, Value};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    #[error("data mismatch on port {port}: {left} vs {right}")]
    DataMismatch {
        port: Port,
        left: Value,
        right: Value,
    },
    #[error("automata use different label algebras ({left} vs {right})")]
    AlgebraMismatch { left: String, right: String },
    #[error("automaton index {index} out of range (network has {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("witness ports overlap the automaton's ports: {0:?}")]
    SharedPorts(Vec<Port>),
    #[error("malformed atomic step: {0}")]
    MalformedStep(String),
    #[error("cannot parse label head {0:?}")]
    BadHead(String),
    #[error("unknown state {0}")]
    UnknownState(u32),
    #[error("invalid automaton document: {0}")]
    Import(String),
}
