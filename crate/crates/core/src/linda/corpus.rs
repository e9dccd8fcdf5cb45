//! Seeded random closed processes for differential testing.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::label::ActionOp;
use crate::linda::interp::TupleSpaceTerm;
use crate::linda::syntax::{Param, Process, Tuple};
use crate::port::Value;

#[derive(Clone, Debug)]
pub struct CorpusConfig {
    pub values: Vec<i64>,
    pub max_size: usize,
    pub max_processes: usize,
    pub max_tuples: usize,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            values: vec![1, 2, 42, 43],
            max_size: 6,
            max_processes: 3,
            max_tuples: 2,
        }
    }
}

struct Gen<'a> {
    rng: &'a mut ChaCha8Rng,
    cfg: &'a CorpusConfig,
    fresh: usize,
}

impl Gen<'_> {
    fn value(&mut self) -> Value {
        Value(*self.cfg.values.choose(self.rng).expect("non-empty domain"))
    }

    fn tuple(&mut self, op: ActionOp, bound: &mut Vec<String>) -> Tuple {
        let arity = self.rng.gen_range(1..=2);
        let mut params = Vec::with_capacity(arity);
        for _ in 0..arity {
            let formal = self.rng.gen_bool(0.35);
            if formal && op == ActionOp::Out && !bound.is_empty() {
                params.push(Param::Formal(bound.choose(self.rng).unwrap().clone()));
            } else if formal && op != ActionOp::Out {
                self.fresh += 1;
                let x = format!("X{}", self.fresh);
                bound.push(x.clone());
                params.push(Param::Formal(x));
            } else {
                params.push(Param::Actual(self.value()));
            }
        }
        Tuple(params)
    }

    /// A process with at most `budget` constructors. `guarded` lists the
    /// recursion variables that may appear here.
    fn process(&mut self, budget: usize, bound: &mut Vec<String>, guarded: &[String]) -> Process {
        if budget == 0 {
            return match guarded.choose(self.rng) {
                Some(x) if self.rng.gen_bool(0.5) => Process::Var(x.clone()),
                _ => Process::End,
            };
        }
        match self.rng.gen_range(0..10) {
            0 => Process::End,
            1 if budget >= 3 => {
                let left = self.rng.gen_range(1..budget - 1);
                let n = bound.len();
                let a = self.process(left, bound, guarded);
                bound.truncate(n);
                let b = self.process(budget - 1 - left, bound, guarded);
                bound.truncate(n);
                Process::choice(a, b)
            }
            2 if budget >= 2 => {
                self.fresh += 1;
                let x = format!("R{}", self.fresh);
                // The body starts with an action, so the recursion is guarded.
                let op = self.op();
                let n = bound.len();
                let t = self.tuple(op, bound);
                let mut vars = guarded.to_vec();
                vars.push(x.clone());
                let cont = self.process(budget - 2, bound, &vars);
                bound.truncate(n);
                Process::rec(x, Process::prefix(op, t, cont))
            }
            _ => {
                let op = self.op();
                let n = bound.len();
                let t = self.tuple(op, bound);
                let cont = self.process(budget - 1, bound, guarded);
                bound.truncate(n);
                Process::prefix(op, t, cont)
            }
        }
    }

    fn op(&mut self) -> ActionOp {
        *[ActionOp::Out, ActionOp::Out, ActionOp::Rd, ActionOp::In]
            .choose(self.rng)
            .unwrap()
    }
}

/// One closed process of size at most `cfg.max_size`.
pub fn random_process(rng: &mut ChaCha8Rng, cfg: &CorpusConfig) -> Process {
    let budget = rng.gen_range(1..=cfg.max_size);
    let mut g = Gen { rng, cfg, fresh: 0 };
    g.process(budget, &mut Vec::new(), &[])
}

/// `n` random terms: a few closed processes plus a few ground tuples.
pub fn random_corpus(seed: u64, n: usize, cfg: &CorpusConfig) -> Vec<TupleSpaceTerm> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let np = rng.gen_range(1..=cfg.max_processes);
            let procs: Vec<Process> = (0..np).map(|_| random_process(&mut rng, cfg)).collect();
            let nt = rng.gen_range(0..=cfg.max_tuples);
            let tuples = (0..nt)
                .map(|_| {
                    let arity = rng.gen_range(1..=2);
                    (0..arity)
                        .map(|_| Value(*cfg.values.choose(&mut rng).unwrap()))
                        .collect()
                })
                .collect();
            TupleSpaceTerm::new(procs, tuples)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_closed_and_small() {
        let cfg = CorpusConfig::default();
        let corpus = random_corpus(7, 50, &cfg);
        assert_eq!(corpus, random_corpus(7, 50, &cfg));
        for m in &corpus {
            for p in &m.processes {
                p.check_closed().unwrap();
                assert!(p.size() <= cfg.max_size, "{p}");
            }
        }
    }
}
