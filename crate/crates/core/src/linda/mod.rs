//! The Linda calculus: syntax, a small-step interpreter and the encoding of
//! processes and tuple spaces as behavioural automata.
//!
//! Every Linda automaton shares the universal port set, so restriction is
//! the identity here and neighbour-only checks give no savings.

use thiserror::Error;

mod corpus;
mod encode;
mod interp;
mod syntax;

pub use corpus::{random_corpus, random_process, CorpusConfig};
pub use encode::{
    automaton_traces, default_ids, encode_factors, encode_process, encode_term, encode_tuplespace,
    linda_label, trace_correspondence, CorrespondenceReport, LindaAlgebra, ProcessAutomaton,
    TupleSpaceAutomaton,
};
pub use interp::{interp_step, interpreter_traces, match_tuple, Rule, Trace, TupleSpaceTerm};
pub use syntax::{parse_process, Param, Process, Subst, Tuple};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LindaError {
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("process is not closed: {0}")]
    OpenProcess(String),
    #[error("unguarded recursion on {0}")]
    UnguardedRecursion(String),
    #[error("tuple {0} is not ground")]
    NonGroundTuple(String),
}
