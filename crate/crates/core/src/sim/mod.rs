//! Round-based execution of networks of behavioural automata.
//!
//! Each round some automata fire together. Regions grow from a seed along
//! shared ports: a neighbour joins when the label so far needs it, or is
//! asked to let the label pass. Automata further away are never looked at,
//! which is sound once every automaton has the locality property.

mod network;
mod rounds;
mod run;

use thiserror::Error;

use crate::error::CoreError;

pub use network::Network;
pub use rounds::{enabled_rounds, enabled_rounds_with, fire_round, RoundResult, SearchMode};
pub use run::{explore, run, GlobalGraph, Policy, RunRecord, RunTrace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error("round is not enabled in the current state")]
    StaleRound,
    #[error("expected {expected} states, got {got}")]
    StateCount { expected: usize, got: usize },
    #[error(transparent)]
    Core(#[from] CoreError),
}
