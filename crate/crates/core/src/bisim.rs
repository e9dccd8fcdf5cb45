//! Strong bisimulation on finite fragments, comparing transitions by a
//! projection of their labels.

use std::collections::{HashMap, HashSet};

use crate::automaton::{BehaviouralAutomaton, StateId};
use crate::explore::{reachable, StateGraph};
use crate::port::{DataMap, PortSet, Scope};

/// The part of a label two automata must agree on: where and which data
/// flows, over which scope.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StepKey {
    pub scope: Scope,
    pub flow: PortSet,
    pub data: DataMap,
}

type Edges = HashMap<StateId, Vec<(StepKey, StateId)>>;

fn edges(g: &StateGraph) -> Edges {
    let mut out: Edges = g.states.iter().map(|&q| (q, Vec::new())).collect();
    for t in &g.transitions {
        out.entry(t.source).or_default().push((
            StepKey {
                scope: t.label.step.scope.clone(),
                flow: t.label.step.flow.clone(),
                data: t.label.step.data.clone(),
            },
            t.target,
        ));
    }
    out
}

/// The greatest bisimulation between two explored fragments.
pub fn bisimulation(a: &StateGraph, b: &StateGraph) -> HashSet<(StateId, StateId)> {
    let ea = edges(a);
    let eb = edges(b);
    let mut rel: HashSet<(StateId, StateId)> = a
        .states
        .iter()
        .flat_map(|&p| b.states.iter().map(move |&q| (p, q)))
        .collect();
    let simulated = |from: &[(StepKey, StateId)],
                     to: &[(StepKey, StateId)],
                     rel: &HashSet<(StateId, StateId)>,
                     flip: bool| {
        from.iter().all(|(k, x)| {
            to.iter().any(|(k2, y)| {
                k == k2
                    && if flip {
                        rel.contains(&(*y, *x))
                    } else {
                        rel.contains(&(*x, *y))
                    }
            })
        })
    };
    loop {
        let before = rel.len();
        let snapshot = rel.clone();
        rel.retain(|(p, q)| {
            simulated(&ea[p], &eb[q], &snapshot, false)
                && simulated(&eb[q], &ea[p], &snapshot, true)
        });
        if rel.len() == before {
            return rel;
        }
    }
}

/// Explores both automata within `bound` and checks that every initial
/// state of each is related to some initial state of the other. Returns
/// `None` when either exploration was truncated.
pub fn bisimilar(
    a: &dyn BehaviouralAutomaton,
    b: &dyn BehaviouralAutomaton,
    bound: usize,
) -> Option<bool> {
    let ga = reachable(a, bound);
    let gb = reachable(b, bound);
    if ga.truncated || gb.truncated {
        return None;
    }
    let rel = bisimulation(&ga, &gb);
    let left = ga
        .initial
        .iter()
        .all(|&p| gb.initial.iter().any(|&q| rel.contains(&(p, q))));
    let right = gb
        .initial
        .iter()
        .all(|&q| ga.initial.iter().any(|&p| rel.contains(&(p, q))));
    Some(left && right)
}
