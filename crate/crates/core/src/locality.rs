//! Local steps and the locality property.

use crate::automaton::{Automaton, BehaviouralAutomaton, StateId, Transition};
use crate::error::CoreError;
use crate::explore::reachable;
use crate::label::{restrict, Head, Label};
use crate::port::{Domain, Port, PortSet, Scope};
use crate::step::AtomicStep;

fn check_index(network: &[Automaton], states: &[StateId], i: usize) -> Result<(), CoreError> {
    if i >= network.len() || i >= states.len() {
        return Err(CoreError::IndexOutOfRange {
            index: i,
            len: network.len(),
        });
    }
    Ok(())
}

/// True when no other automaton of the network needs to take part in `t`.
pub fn is_local_step(
    network: &[Automaton],
    states: &[StateId],
    i: usize,
    t: &Transition,
) -> Result<bool, CoreError> {
    check_index(network, states, i)?;
    Ok(network
        .iter()
        .enumerate()
        .all(|(j, b)| j == i || !b.blocks(states[j], &restrict(&t.label, b.ports()))))
}

/// Like [`is_local_step`] but only asks the automata sharing a port with
/// automaton `i`. Sound when every automaton has the locality property.
pub fn is_local_step_by_neighbours(
    network: &[Automaton],
    states: &[StateId],
    i: usize,
    t: &Transition,
) -> Result<bool, CoreError> {
    check_index(network, states, i)?;
    let own = network[i].ports().clone();
    Ok(network.iter().enumerate().all(|(j, b)| {
        j == i || !own.intersects(b.ports()) || !b.blocks(states[j], &restrict(&t.label, b.ports()))
    }))
}

/// Probe labels over `witness`: every single-port flow with each value,
/// every pairwise flow with each value, and the pure no-flow variants.
pub fn locality_probes(witness: &PortSet, domain: &Domain) -> Vec<Label> {
    let scope = Scope::from(witness.clone());
    let ws: Vec<&Port> = witness.iter().collect();
    let flow_probe = |ps: &[&Port], v| {
        let flow: PortSet = ps.iter().map(|p| (*p).clone()).collect();
        let data = flow.iter().map(|p| (p.clone(), v)).collect();
        let step = AtomicStep::new(scope.clone(), flow.clone(), PortSet::new(), flow, data);
        Label::new(Head::named("probe", []), step)
    };
    let mut out = Vec::new();
    for &v in domain.values() {
        for (i, w) in ws.iter().enumerate() {
            out.push(flow_probe(&[w], v));
            for w2 in &ws[i + 1..] {
                out.push(flow_probe(&[w, w2], v));
            }
        }
    }
    for w in &ws {
        let nf: PortSet = [(*w).clone()].into_iter().collect();
        out.push(
            Label::new(Head::named("probe", []), AtomicStep::idle(scope.clone())).with_noflow(nf),
        );
    }
    out
}

/// Checks that no probe over ports disjoint from `b` ever falls in one of
/// its predicates, over the states reachable within `bound`.
pub fn check_locality(
    b: &dyn BehaviouralAutomaton,
    witness: &PortSet,
    domain: &Domain,
    bound: usize,
) -> Result<bool, CoreError> {
    let shared: Vec<Port> = witness
        .iter()
        .filter(|p| b.ports().contains(p))
        .cloned()
        .collect();
    if !shared.is_empty() {
        return Err(CoreError::SharedPorts(shared));
    }
    let probes = locality_probes(witness, domain);
    let graph = reachable(b, bound);
    for &q in &graph.states {
        for probe in &probes {
            if b.blocks(q, &restrict(probe, b.ports())) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Fresh witness ports guaranteed not to clash with user port names.
pub fn default_witness() -> PortSet {
    crate::port::ports(["#w1", "#w2"])
}
