//! Behavioural automata: a common model for synchronous coordination.
//!
//! Automata carry labels drawn from a pluggable partial monoid, a
//! concurrency predicate per state, and compose through a synchronous
//! product. Two instantiations ship with the crate: Reo constraint automata
//! ([`reo`]) and the Linda calculus ([`linda`]). The [`sim`] module runs
//! networks of automata round by round, firing local steps without looking
//! past an automaton's neighbours.

pub mod algebra;
pub mod automaton;
pub mod bisim;
pub mod error;
pub mod explore;
pub mod export;
pub mod label;
pub mod linda;
pub mod locality;
pub mod netspec;
pub mod port;
pub mod predicate;
pub mod product;
pub mod reo;
pub mod sim;
pub mod step;

pub use algebra::{compose_all, Algebra, LabelAlgebra};
pub use automaton::{
    Automaton, BehaviouralAutomaton, Clause, ExplicitAutomaton, Provenance, StateId, Transition,
};
pub use error::CoreError;
pub use explore::{materialize, reachable, StateGraph};
pub use label::{restrict, ActionOp, GroundAction, Head, Label, LindaKind, ProcessId};
pub use locality::{check_locality, is_local_step};
pub use port::{ports, DataMap, Domain, Port, PortSet, Scope, Value};
pub use predicate::{cp_contains, ConcurrencyPredicate};
pub use product::{product, Product};
pub use step::{compose_atomic_steps, AtomicStep};
