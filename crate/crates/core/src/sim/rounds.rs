use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::compose_all;
use crate::automaton::{BehaviouralAutomaton, Provenance, StateId, Transition};
use crate::label::{restrict, Label};
use crate::port::Scope;
use crate::product::Product;
use crate::sim::{Network, SimError};

/// One way the network can move in the current round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundResult {
    pub participants: BTreeSet<usize>,
    /// The composite label, scoped to the participants' ports.
    pub label: Label,
    pub successors: BTreeMap<usize, StateId>,
    /// Automata whose transitions or predicates were looked at.
    pub consulted: BTreeSet<usize>,
}

impl RoundResult {
    /// The round in which nobody moves.
    pub fn idle() -> Self {
        RoundResult {
            participants: BTreeSet::new(),
            label: Label::identity(Scope::empty()),
            successors: BTreeMap::new(),
            consulted: BTreeSet::new(),
        }
    }

    pub fn is_idle(&self) -> bool {
        self.participants.is_empty()
    }

    fn key(&self) -> (Vec<usize>, &Label, Vec<(usize, StateId)>) {
        (
            self.participants.iter().copied().collect(),
            &self.label,
            self.successors.iter().map(|(&i, &q)| (i, q)).collect(),
        )
    }

    fn from_moves(
        moves: &BTreeMap<usize, Transition>,
        label: Label,
        consulted: BTreeSet<usize>,
    ) -> Self {
        RoundResult {
            participants: moves.keys().copied().collect(),
            label,
            successors: moves.iter().map(|(&i, t)| (i, t.target)).collect(),
            consulted,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    /// Regions when every automaton is certified, exhaustive otherwise.
    Auto,
    /// Grow regions along shared ports; outsiders beyond the neighbours of
    /// a region are not checked.
    Regions,
    /// Consider every automaton for every round.
    Exhaustive,
}

/// Every non-idle round enabled at `states`, ordered by participants, then
/// label, then successors.
pub fn enabled_rounds(net: &Network, states: &[StateId]) -> Vec<RoundResult> {
    enabled_rounds_with(net, states, SearchMode::Auto)
}

pub fn enabled_rounds_with(
    net: &Network,
    states: &[StateId],
    mode: SearchMode,
) -> Vec<RoundResult> {
    if net.is_empty() || states.len() != net.len() {
        return Vec::new();
    }
    let regions = match mode {
        SearchMode::Auto => net.all_certified(),
        SearchMode::Regions => true,
        SearchMode::Exhaustive => false,
    };
    let mut rounds = if regions {
        region_rounds(net, states)
    } else {
        exhaustive_rounds(net, states)
    };
    rounds.sort_by(|a, b| a.key().cmp(&b.key()));
    rounds.dedup_by(|a, b| a.key() == b.key());
    rounds
}

fn exhaustive_rounds(net: &Network, states: &[StateId]) -> Vec<RoundResult> {
    let p = Product::new(net.automata().to_vec()).expect("network shares one algebra");
    let q = p.state_of(states);
    let everyone: BTreeSet<usize> = (0..net.len()).collect();
    let algebra = net.algebra().expect("non-empty network");
    p.enabled(q)
        .into_iter()
        .filter_map(|t| {
            let Provenance::Composed { parts, .. } = t.provenance else {
                return None;
            };
            let moves: BTreeMap<usize, Transition> = parts.into_iter().collect();
            let label = compose_all(
                algebra.as_ref(),
                Scope::empty(),
                moves.values().map(|t| &t.label),
            )?;
            Some(RoundResult::from_moves(&moves, label, everyone.clone()))
        })
        .collect()
}

struct Regions<'a> {
    net: &'a Network,
    states: &'a [StateId],
    out: Vec<RoundResult>,
}

impl Regions<'_> {
    fn blocks(&self, j: usize, label: &Label) -> bool {
        let a = self.net.automaton(j);
        a.blocks(self.states[j], &restrict(label, a.ports()))
    }

    /// Excluding `j` is hopeless once it blocks the label and more flow
    /// cannot change its mind.
    fn prunable(&self, j: usize, label: &Label) -> bool {
        let a = self.net.automaton(j);
        !a.is_reactive() && a.predicate(self.states[j]).is_flow_monotone() && self.blocks(j, label)
    }

    fn grow(
        &mut self,
        moves: &mut BTreeMap<usize, Transition>,
        excluded: &mut BTreeSet<usize>,
        acc: Label,
    ) {
        let next = moves
            .keys()
            .flat_map(|&i| self.net.neighbours(i).iter().copied())
            .filter(|j| !moves.contains_key(j) && !excluded.contains(j))
            .min();
        let Some(j) = next else {
            if excluded.iter().all(|&j| !self.blocks(j, &acc)) {
                let consulted = moves.keys().chain(excluded.iter()).copied().collect();
                self.out
                    .push(RoundResult::from_moves(moves, acc, consulted));
            }
            return;
        };
        if !self.prunable(j, &acc) {
            excluded.insert(j);
            self.grow(moves, excluded, acc.clone());
            excluded.remove(&j);
        }
        let a = self.net.automaton(j).clone();
        let q = self.states[j];
        let mut options = a.enabled(q);
        if a.is_reactive() {
            options.extend(a.respond(q, &acc));
        }
        let algebra = self.net.algebra().expect("non-empty network").clone();
        for t in options {
            let Some(acc2) = algebra.compose(&acc, &t.label) else {
                continue;
            };
            moves.insert(j, t);
            self.grow(moves, excluded, acc2);
            moves.remove(&j);
        }
    }
}

fn separated(a: &RoundResult, b: &RoundResult) -> bool {
    a.participants.is_disjoint(&b.consulted) && b.participants.is_disjoint(&a.consulted)
}

/// Joins a round with a round far enough away that neither looked at the
/// other's participants.
fn join(
    net: &Network,
    states: &[StateId],
    a: &RoundResult,
    b: &RoundResult,
) -> Option<RoundResult> {
    let algebra = net.algebra()?;
    let label = algebra.compose(&a.label, &b.label)?;
    let mut participants = a.participants.clone();
    participants.extend(b.participants.iter().copied());
    let consulted: BTreeSet<usize> = a.consulted.union(&b.consulted).copied().collect();
    for &j in consulted.difference(&participants) {
        let aj = net.automaton(j);
        if aj.blocks(states[j], &restrict(&label, aj.ports())) {
            return None;
        }
    }
    let mut successors = a.successors.clone();
    successors.extend(b.successors.iter().map(|(&i, &q)| (i, q)));
    Some(RoundResult {
        participants,
        label,
        successors,
        consulted,
    })
}

fn region_rounds(net: &Network, states: &[StateId]) -> Vec<RoundResult> {
    let mut search = Regions {
        net,
        states,
        out: Vec::new(),
    };
    for (i, &q) in states.iter().enumerate() {
        for t in net.automaton(i).enabled(q) {
            let acc = t.label.clone();
            let mut moves = BTreeMap::from([(i, t)]);
            search.grow(&mut moves, &mut BTreeSet::new(), acc);
        }
    }
    let mut base = search.out;
    base.sort_by(|a, b| a.key().cmp(&b.key()));
    base.dedup_by(|a, b| a.key() == b.key());

    // Combine separated regions: each combination is built once, from
    // rounds taken in increasing order.
    let mut all = base.clone();
    let mut stack: Vec<(RoundResult, usize)> = base.iter().cloned().zip(1..).collect();
    while let Some((r, from)) = stack.pop() {
        for (k, b) in base.iter().enumerate().skip(from) {
            if !separated(&r, b) {
                continue;
            }
            if let Some(u) = join(net, states, &r, b) {
                all.push(u.clone());
                stack.push((u, k + 1));
            }
        }
    }
    all
}

/// Fires `round`, which must be enabled at `states` (or be the idle round).
pub fn fire_round(
    net: &Network,
    states: &[StateId],
    round: &RoundResult,
) -> Result<Vec<StateId>, SimError> {
    net.check_states(states)?;
    if round.is_idle() {
        return Ok(states.to_vec());
    }
    let enabled = enabled_rounds(net, states);
    if !enabled.iter().any(|r| r.key() == round.key()) {
        return Err(SimError::StaleRound);
    }
    let mut next = states.to_vec();
    for (&i, &q) in &round.successors {
        next[i] = q;
    }
    Ok(next)
}
