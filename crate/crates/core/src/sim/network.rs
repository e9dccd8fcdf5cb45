use std::collections::BTreeSet;

use crate::algebra::{same_algebra, Algebra};
use crate::automaton::{Automaton, StateId};
use crate::error::CoreError;
use crate::locality::{check_locality, default_witness};
use crate::port::{Domain, Scope};
use crate::sim::SimError;

/// Automata wired together by shared port names.
#[derive(Clone)]
pub struct Network {
    names: Vec<String>,
    automata: Vec<Automaton>,
    neighbours: Vec<BTreeSet<usize>>,
    certified: Vec<bool>,
    algebra: Option<Algebra>,
}

/// States explored per automaton when certifying locality.
const CERTIFY_BOUND: usize = 4096;

impl Network {
    /// Builds the network and certifies each automaton's locality with
    /// probes over `domain`.
    pub fn new(entries: Vec<(String, Automaton)>, domain: &Domain) -> Result<Network, SimError> {
        let witness = default_witness();
        let mut certified = Vec::with_capacity(entries.len());
        for (_, a) in &entries {
            certified.push(
                match check_locality(a.as_ref(), &witness, domain, CERTIFY_BOUND) {
                    Ok(ok) => ok,
                    Err(CoreError::SharedPorts(_)) => false,
                    Err(e) => return Err(e.into()),
                },
            );
        }
        Network::with_certification(entries, certified)
    }

    /// Builds the network with caller-supplied certification flags.
    pub fn with_certification(
        entries: Vec<(String, Automaton)>,
        certified: Vec<bool>,
    ) -> Result<Network, SimError> {
        if certified.len() != entries.len() {
            return Err(SimError::StateCount {
                expected: entries.len(),
                got: certified.len(),
            });
        }
        let mut algebra: Option<Algebra> = None;
        for (_, a) in &entries {
            match &algebra {
                None => algebra = Some(a.algebra().clone()),
                Some(alg) if !same_algebra(alg, a.algebra()) => {
                    return Err(CoreError::AlgebraMismatch {
                        left: alg.name().to_string(),
                        right: a.algebra().name().to_string(),
                    }
                    .into())
                }
                Some(_) => {}
            }
        }
        let (names, automata): (Vec<String>, Vec<Automaton>) = entries.into_iter().unzip();
        let neighbours = (0..automata.len())
            .map(|i| {
                (0..automata.len())
                    .filter(|&j| j != i && automata[i].ports().intersects(automata[j].ports()))
                    .collect()
            })
            .collect();
        Ok(Network {
            names,
            automata,
            neighbours,
            certified,
            algebra,
        })
    }

    pub fn len(&self) -> usize {
        self.automata.len()
    }

    pub fn is_empty(&self) -> bool {
        self.automata.is_empty()
    }

    pub fn automata(&self) -> &[Automaton] {
        &self.automata
    }

    pub fn automaton(&self, i: usize) -> &Automaton {
        &self.automata[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn neighbours(&self, i: usize) -> &BTreeSet<usize> {
        &self.neighbours[i]
    }

    pub fn is_certified(&self, i: usize) -> bool {
        self.certified[i]
    }

    pub fn all_certified(&self) -> bool {
        self.certified.iter().all(|&c| c)
    }

    pub fn algebra(&self) -> Option<&Algebra> {
        self.algebra.as_ref()
    }

    pub fn ports(&self) -> Scope {
        self.automata
            .iter()
            .fold(Scope::empty(), |acc, a| acc.union(a.ports()))
    }

    /// The first initial state of every automaton.
    pub fn initial_states(&self) -> Vec<StateId> {
        self.automata
            .iter()
            .map(|a| a.initial().first().copied().unwrap_or(StateId(0)))
            .collect()
    }

    pub fn state_names(&self, states: &[StateId]) -> Vec<String> {
        self.automata
            .iter()
            .zip(states)
            .map(|(a, &q)| a.state_name(q))
            .collect()
    }

    pub(crate) fn check_states(&self, states: &[StateId]) -> Result<(), SimError> {
        if states.len() != self.len() {
            return Err(SimError::StateCount {
                expected: self.len(),
                got: states.len(),
            });
        }
        Ok(())
    }
}
