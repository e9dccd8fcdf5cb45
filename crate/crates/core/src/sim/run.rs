use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automaton::StateId;
use crate::sim::rounds::{enabled_rounds, RoundResult};
use crate::sim::{Network, SimError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Policy {
    /// Uniform choice with a seeded generator.
    Random,
    /// Always the first round in the canonical order.
    Lex,
    /// The round with most participants, ties broken canonically.
    Maximal,
}

impl FromStr for Policy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "random" => Ok(Policy::Random),
            "lex" => Ok(Policy::Lex),
            "maximal" => Ok(Policy::Maximal),
            _ => Err(format!(
                "unknown policy {s:?} (expected random, lex or maximal)"
            )),
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Policy::Random => "random",
            Policy::Lex => "lex",
            Policy::Maximal => "maximal",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunRecord {
    pub round: usize,
    pub result: RoundResult,
    /// States after the round.
    pub states: Vec<StateId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunTrace {
    pub records: Vec<RunRecord>,
    /// Set when the run stopped early because nothing could move.
    pub deadlock: bool,
}

/// Fires up to `rounds` rounds from `initial`. The result depends only on
/// the arguments.
pub fn run(
    net: &Network,
    initial: &[StateId],
    rounds: usize,
    policy: Policy,
    seed: u64,
) -> Result<RunTrace, SimError> {
    net.check_states(initial)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut states = initial.to_vec();
    let mut records = Vec::with_capacity(rounds);
    for n in 0..rounds {
        let mut options = enabled_rounds(net, &states);
        if options.is_empty() {
            return Ok(RunTrace {
                records,
                deadlock: true,
            });
        }
        let k = match policy {
            Policy::Lex => 0,
            Policy::Random => rng.gen_range(0..options.len()),
            Policy::Maximal => {
                let most = options
                    .iter()
                    .map(|r| r.participants.len())
                    .max()
                    .unwrap_or(0);
                options
                    .iter()
                    .position(|r| r.participants.len() == most)
                    .unwrap_or(0)
            }
        };
        let chosen = options.swap_remove(k);
        for (&i, &q) in &chosen.successors {
            states[i] = q;
        }
        records.push(RunRecord {
            round: n,
            result: chosen,
            states: states.clone(),
        });
    }
    Ok(RunTrace {
        records,
        deadlock: false,
    })
}

/// The global state space of a network, explored breadth first.
#[derive(Clone, Debug)]
pub struct GlobalGraph {
    pub states: Vec<Vec<StateId>>,
    pub initial: Vec<usize>,
    pub edges: Vec<(usize, RoundResult, usize)>,
    pub truncated: bool,
}

/// At most `bound` global states, starting from every combination of
/// initial states.
pub fn explore(net: &Network, bound: usize) -> GlobalGraph {
    let mut combos: Vec<Vec<StateId>> = vec![Vec::new()];
    for a in net.automata() {
        let inits = a.initial();
        combos = combos
            .into_iter()
            .flat_map(|c| {
                inits.iter().map(move |&q| {
                    let mut c = c.clone();
                    c.push(q);
                    c
                })
            })
            .collect();
    }
    let mut index: HashMap<Vec<StateId>, usize> = HashMap::new();
    let mut g = GlobalGraph {
        states: Vec::new(),
        initial: Vec::new(),
        edges: Vec::new(),
        truncated: bound == 0,
    };
    let mut queue = VecDeque::new();
    for c in combos {
        if index.contains_key(&c) {
            continue;
        }
        if g.states.len() >= bound {
            g.truncated = true;
            break;
        }
        index.insert(c.clone(), g.states.len());
        g.initial.push(g.states.len());
        queue.push_back(g.states.len());
        g.states.push(c);
    }
    while let Some(s) = queue.pop_front() {
        let states = g.states[s].clone();
        for r in enabled_rounds(net, &states) {
            let mut next = states.clone();
            for (&i, &q) in &r.successors {
                next[i] = q;
            }
            let t = match index.get(&next) {
                Some(&t) => t,
                None if g.states.len() < bound => {
                    let t = g.states.len();
                    index.insert(next.clone(), t);
                    g.states.push(next);
                    queue.push_back(t);
                    t
                }
                None => {
                    g.truncated = true;
                    continue;
                }
            };
            g.edges.push((s, r, t));
        }
    }
    g
}
