//! Behavioural automata and a finite, explicitly stored implementation.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::label::Label;
use crate::port::Scope;
use crate::predicate::{cp_contains, ConcurrencyPredicate};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StateId(pub u32);

/// Which product clause produced a composed transition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Clause {
    /// Two or more factors moved together.
    Joint,
    /// Only factor `i` moved; the others accepted the label.
    Independent(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Primitive,
    Composed {
        clause: Clause,
        parts: Vec<(usize, Transition)>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub source: StateId,
    pub label: Label,
    pub target: StateId,
    pub provenance: Provenance,
}

impl Transition {
    pub fn new(source: StateId, label: Label, target: StateId) -> Self {
        Transition {
            source,
            label,
            target,
            provenance: Provenance::Primitive,
        }
    }
}

/// Sorts transitions by label, then target; the order every automaton
/// reports them in.
pub fn sort_transitions(ts: &mut [Transition]) {
    ts.sort_by(|a, b| (&a.label, a.target).cmp(&(&b.label, b.target)));
}

/// A labelled transition system with a concurrency predicate per state.
///
/// States are produced on demand. `enabled` lists the transitions an
/// automaton can start on its own; `respond` lists those it can only take in
/// answer to a label offered by a partner (a Linda `rd` needs to know which
/// tuple is on offer). Finite automata have nothing to respond with.
pub trait BehaviouralAutomaton: Send + Sync {
    fn ports(&self) -> &Scope;

    fn algebra(&self) -> &Algebra;

    fn initial(&self) -> Vec<StateId>;

    fn enabled(&self, q: StateId) -> Vec<Transition>;

    fn respond(&self, _q: StateId, _offer: &Label) -> Vec<Transition> {
        Vec::new()
    }

    /// Whether `respond` can ever return anything.
    fn is_reactive(&self) -> bool {
        false
    }

    fn predicate(&self, q: StateId) -> ConcurrencyPredicate;

    /// Whether `label` (already restricted to this automaton's ports) needs
    /// this automaton to take part.
    fn blocks(&self, q: StateId, label: &Label) -> bool {
        cp_contains(&self.predicate(q), label)
    }

    fn state_name(&self, q: StateId) -> String;
}

pub type Automaton = Arc<dyn BehaviouralAutomaton>;

/// Maps structured states to dense ids; shared behind a lock so automata
/// stay usable from several threads.
#[derive(Debug)]
pub struct Interner<S> {
    inner: Mutex<(HashMap<S, u32>, Vec<S>)>,
}

impl<S: Clone + Eq + Hash> Interner<S> {
    pub fn new() -> Self {
        Interner {
            inner: Mutex::new((HashMap::new(), Vec::new())),
        }
    }

    pub fn intern(&self, s: &S) -> StateId {
        let mut g = self.inner.lock().expect("interner poisoned");
        if let Some(&id) = g.0.get(s) {
            return StateId(id);
        }
        let id = g.1.len() as u32;
        g.1.push(s.clone());
        g.0.insert(s.clone(), id);
        StateId(id)
    }

    pub fn get(&self, id: StateId) -> S {
        let g = self.inner.lock().expect("interner poisoned");
        g.1[id.0 as usize].clone()
    }

    pub fn len(&self) -> usize {
        self.inner.lock().expect("interner poisoned").1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl<S: Clone + Eq + Hash> Default for Interner<S> {
    fn default() -> Self {
        Self::new()
    }
}

/// A finite automaton with every state and transition stored up front.
#[derive(Clone)]
pub struct ExplicitAutomaton {
    ports: Scope,
    algebra: Algebra,
    names: Vec<String>,
    predicates: Vec<ConcurrencyPredicate>,
    outgoing: Vec<Vec<Transition>>,
    initial: Vec<StateId>,
}

impl ExplicitAutomaton {
    pub fn builder(ports: impl Into<Scope>, algebra: Algebra) -> ExplicitBuilder {
        ExplicitBuilder {
            inner: ExplicitAutomaton {
                ports: ports.into(),
                algebra,
                names: Vec::new(),
                predicates: Vec::new(),
                outgoing: Vec::new(),
                initial: Vec::new(),
            },
            by_name: HashMap::new(),
        }
    }

    pub fn state_count(&self) -> usize {
        self.names.len()
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| StateId(i as u32))
    }

    pub fn transitions(&self) -> impl Iterator<Item = &Transition> {
        self.outgoing.iter().flatten()
    }
}

impl BehaviouralAutomaton for ExplicitAutomaton {
    fn ports(&self) -> &Scope {
        &self.ports
    }

    fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    fn initial(&self) -> Vec<StateId> {
        self.initial.clone()
    }

    fn enabled(&self, q: StateId) -> Vec<Transition> {
        self.outgoing.get(q.0 as usize).cloned().unwrap_or_default()
    }

    fn predicate(&self, q: StateId) -> ConcurrencyPredicate {
        self.predicates
            .get(q.0 as usize)
            .cloned()
            .unwrap_or(ConcurrencyPredicate::Never)
    }

    fn state_name(&self, q: StateId) -> String {
        self.names
            .get(q.0 as usize)
            .cloned()
            .unwrap_or_else(|| format!("?{}", q.0))
    }
}

pub struct ExplicitBuilder {
    inner: ExplicitAutomaton,
    by_name: HashMap<String, StateId>,
}

impl ExplicitBuilder {
    /// Adds a state, or returns the existing one with that name.
    pub fn state(&mut self, name: impl Into<String>, cp: ConcurrencyPredicate) -> StateId {
        let name = name.into();
        if let Some(&id) = self.by_name.get(&name) {
            return id;
        }
        let id = StateId(self.inner.names.len() as u32);
        self.inner.names.push(name.clone());
        self.inner.predicates.push(cp);
        self.inner.outgoing.push(Vec::new());
        self.by_name.insert(name, id);
        id
    }

    /// Adds a transition; the label is widened to the automaton's ports.
    pub fn transition(&mut self, source: StateId, label: Label, target: StateId) -> &mut Self {
        let label = label.widen(&self.inner.ports);
        self.inner.outgoing[source.0 as usize].push(Transition::new(source, label, target));
        self
    }

    pub fn initial(&mut self, q: StateId) -> &mut Self {
        if !self.inner.initial.contains(&q) {
            self.inner.initial.push(q);
        }
        self
    }

    pub fn build(mut self) -> ExplicitAutomaton {
        for ts in &mut self.inner.outgoing {
            sort_transitions(ts);
            ts.dedup_by(|a, b| a.label == b.label && a.target == b.target);
        }
        self.inner.initial.sort();
        self.inner
    }
}
