//! The synchronous product of behavioural automata.
//!
//! A product state pairs the factor states. From it, any non-empty set of
//! factors may move together provided their labels compose, and every factor
//! that stays behind accepts the composite (restricted to its own ports) as
//! outside its concurrency predicate. With two factors this is exactly the
//! joint clause plus the two independent clauses.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::algebra::{same_algebra, Algebra};
use crate::automaton::{
    sort_transitions, Automaton, BehaviouralAutomaton, Clause, Interner, Provenance, StateId,
    Transition,
};
use crate::error::CoreError;
use crate::label::{restrict, Label};
use crate::port::Scope;
use crate::predicate::ConcurrencyPredicate;

pub struct Product {
    factors: Vec<Automaton>,
    ports: Scope,
    algebra: Algebra,
    states: Interner<Vec<StateId>>,
}

/// `b1 ⋈ b2`.
pub fn product(b1: Automaton, b2: Automaton) -> Result<Product, CoreError> {
    Product::new(vec![b1, b2])
}

impl Product {
    /// The flat product of all `factors`; at least one is required.
    pub fn new(factors: Vec<Automaton>) -> Result<Product, CoreError> {
        let first = factors
            .first()
            .ok_or(CoreError::IndexOutOfRange { index: 0, len: 0 })?;
        let algebra = first.algebra().clone();
        let mut ports = Scope::empty();
        for f in &factors {
            if !same_algebra(&algebra, f.algebra()) {
                return Err(CoreError::AlgebraMismatch {
                    left: algebra.name().to_string(),
                    right: f.algebra().name().to_string(),
                });
            }
            ports = ports.union(f.ports());
        }
        Ok(Product {
            factors,
            ports,
            algebra,
            states: Interner::new(),
        })
    }

    pub fn factors(&self) -> &[Automaton] {
        &self.factors
    }

    pub fn components(&self, q: StateId) -> Vec<StateId> {
        self.states.get(q)
    }

    pub fn state_of(&self, comps: &[StateId]) -> StateId {
        self.states.intern(&comps.to_vec())
    }

    pub fn into_arc(self) -> Automaton {
        Arc::new(self)
    }

    fn search(&self, comps: &[StateId], seed: Option<&Label>) -> Vec<Transition> {
        let n = self.factors.len();
        let mut ctx = Search {
            product: self,
            comps,
            seed,
            chosen: vec![None; n],
            skipped_monotone: Vec::new(),
            out: Vec::new(),
        };
        let own = Label::identity(Scope::empty());
        let acc = match seed {
            Some(s) => s.clone(),
            None => Label::identity(Scope::empty()),
        };
        ctx.proactive(0, own, acc);
        let mut out = ctx.out;
        sort_transitions(&mut out);
        out.dedup_by(|a, b| a.label == b.label && a.target == b.target);
        out
    }
}

struct Search<'a> {
    product: &'a Product,
    comps: &'a [StateId],
    seed: Option<&'a Label>,
    chosen: Vec<Option<Transition>>,
    /// Factors left behind whose predicate only grows with the flow set; a
    /// partial composite they already block can be dropped.
    skipped_monotone: Vec<usize>,
    out: Vec<Transition>,
}

impl Search<'_> {
    fn algebra(&self) -> &Algebra {
        &self.product.algebra
    }

    fn pruned(&self, own: &Label) -> bool {
        self.skipped_monotone.iter().any(|&j| {
            let f = &self.product.factors[j];
            f.blocks(self.comps[j], &restrict(own, f.ports()))
        })
    }

    fn proactive(&mut self, i: usize, own: Label, acc: Label) {
        let factors = &self.product.factors;
        if i == factors.len() {
            self.reactive(own, acc);
            return;
        }
        let f = factors[i].clone();
        let q = self.comps[i];
        let monotone = !f.is_reactive() && f.predicate(q).is_flow_monotone();
        if monotone {
            self.skipped_monotone.push(i);
        }
        if !self.pruned(&own) {
            self.proactive(i + 1, own.clone(), acc.clone());
        }
        if monotone {
            self.skipped_monotone.pop();
        }
        for t in f.enabled(q) {
            let Some(acc2) = self.algebra().compose(&acc, &t.label) else {
                continue;
            };
            let Some(own2) = self.algebra().compose(&own, &t.label) else {
                continue;
            };
            if self.pruned(&own2) {
                continue;
            }
            self.chosen[i] = Some(t);
            self.proactive(i + 1, own2, acc2);
            self.chosen[i] = None;
        }
    }

    fn reactive(&mut self, own: Label, acc: Label) {
        self.leaf(&own);
        let factors = self.product.factors.clone();
        for (j, f) in factors.iter().enumerate() {
            if self.chosen[j].is_some() || !f.is_reactive() {
                continue;
            }
            for t in f.respond(self.comps[j], &acc) {
                let Some(acc2) = self.algebra().compose(&acc, &t.label) else {
                    continue;
                };
                let Some(own2) = self.algebra().compose(&own, &t.label) else {
                    continue;
                };
                self.chosen[j] = Some(t);
                self.reactive(own2, acc2);
                self.chosen[j] = None;
            }
        }
    }

    fn leaf(&mut self, own: &Label) {
        let movers: Vec<usize> = (0..self.chosen.len())
            .filter(|&j| self.chosen[j].is_some())
            .collect();
        if movers.is_empty() {
            return;
        }
        if self.seed.is_some() && own.is_identity() {
            return;
        }
        let p = self.product;
        for (j, f) in p.factors.iter().enumerate() {
            if self.chosen[j].is_none() && f.blocks(self.comps[j], &restrict(own, f.ports())) {
                return;
            }
        }
        let mut next = self.comps.to_vec();
        let mut parts = Vec::with_capacity(movers.len());
        for &j in &movers {
            let t = self.chosen[j].clone().expect("mover");
            next[j] = t.target;
            parts.push((j, t));
        }
        let clause = if movers.len() == 1 {
            Clause::Independent(movers[0])
        } else {
            Clause::Joint
        };
        let source = p.states.intern(&self.comps.to_vec());
        let target = p.states.intern(&next);
        self.out.push(Transition {
            source,
            label: own.clone().widen(&p.ports),
            target,
            provenance: Provenance::Composed { clause, parts },
        });
    }
}

impl BehaviouralAutomaton for Product {
    fn ports(&self) -> &Scope {
        &self.ports
    }

    fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    fn initial(&self) -> Vec<StateId> {
        let mut combos: Vec<Vec<StateId>> = vec![Vec::new()];
        for f in &self.factors {
            let inits = f.initial();
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
        let set: BTreeSet<Vec<StateId>> = combos.into_iter().collect();
        set.iter().map(|c| self.states.intern(c)).collect()
    }

    fn enabled(&self, q: StateId) -> Vec<Transition> {
        let comps = self.components(q);
        self.search(&comps, None)
    }

    fn respond(&self, q: StateId, offer: &Label) -> Vec<Transition> {
        if !self.is_reactive() {
            return Vec::new();
        }
        let comps = self.components(q);
        self.search(&comps, Some(offer))
    }

    fn is_reactive(&self) -> bool {
        self.factors.iter().any(|f| f.is_reactive())
    }

    fn predicate(&self, q: StateId) -> ConcurrencyPredicate {
        let comps = self.components(q);
        ConcurrencyPredicate::union_all(
            self.factors
                .iter()
                .zip(&comps)
                .map(|(f, &c)| f.predicate(c)),
        )
    }

    fn state_name(&self, q: StateId) -> String {
        let comps = self.components(q);
        let names: Vec<String> = self
            .factors
            .iter()
            .zip(&comps)
            .map(|(f, &c)| f.state_name(c))
            .collect();
        format!("({})", names.join(","))
    }
}
