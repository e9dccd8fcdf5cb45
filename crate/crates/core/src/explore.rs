//! Bounded breadth-first exploration and materialisation of automata.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::automaton::{
    sort_transitions, BehaviouralAutomaton, ExplicitAutomaton, StateId, Transition,
};

/// A finite fragment of an automaton.
#[derive(Clone, Debug)]
pub struct StateGraph {
    /// States in discovery order; initial states first.
    pub states: Vec<StateId>,
    pub initial: Vec<StateId>,
    pub transitions: Vec<Transition>,
    pub truncated: bool,
}

impl StateGraph {
    pub fn outgoing(&self, q: StateId) -> impl Iterator<Item = &Transition> {
        self.transitions.iter().filter(move |t| t.source == q)
    }
}

/// Explores at most `bound` states. Transitions leading outside the explored
/// set are dropped and the graph is flagged as truncated.
pub fn reachable(b: &dyn BehaviouralAutomaton, bound: usize) -> StateGraph {
    let mut seen: HashSet<StateId> = HashSet::new();
    let mut states = Vec::new();
    let mut queue = VecDeque::new();
    let mut truncated = bound == 0;
    let mut initial = Vec::new();
    for q in b.initial() {
        if states.len() >= bound {
            truncated = true;
            break;
        }
        if seen.insert(q) {
            states.push(q);
            initial.push(q);
            queue.push_back(q);
        }
    }
    let mut transitions = Vec::new();
    while let Some(q) = queue.pop_front() {
        for t in b.enabled(q) {
            if !seen.contains(&t.target) {
                if states.len() >= bound {
                    truncated = true;
                    continue;
                }
                seen.insert(t.target);
                states.push(t.target);
                queue.push_back(t.target);
            }
            transitions.push(t);
        }
    }
    StateGraph {
        states,
        initial,
        transitions,
        truncated,
    }
}

/// Copies an explored fragment into an explicit automaton whose state ids
/// follow discovery order. Duplicate state names get a `#n` suffix.
pub fn materialize(b: &dyn BehaviouralAutomaton, graph: &StateGraph) -> ExplicitAutomaton {
    let index: HashMap<StateId, usize> = graph
        .states
        .iter()
        .enumerate()
        .map(|(i, &q)| (q, i))
        .collect();
    let mut builder = ExplicitAutomaton::builder(b.ports().clone(), b.algebra().clone());
    let mut used: HashSet<String> = HashSet::new();
    let mut ids = Vec::with_capacity(graph.states.len());
    for (i, &q) in graph.states.iter().enumerate() {
        let mut name = b.state_name(q);
        if !used.insert(name.clone()) {
            name = format!("{name}#{i}");
            used.insert(name.clone());
        }
        ids.push(builder.state(name, b.predicate(q)));
    }
    let mut ts: Vec<Transition> = graph
        .transitions
        .iter()
        .map(|t| {
            Transition::new(
                ids[index[&t.source]],
                t.label.clone(),
                ids[index[&t.target]],
            )
        })
        .collect();
    sort_transitions(&mut ts);
    for t in ts {
        builder.transition(t.source, t.label, t.target);
    }
    for q in &graph.initial {
        builder.initial(ids[index[q]]);
    }
    builder.build()
}
