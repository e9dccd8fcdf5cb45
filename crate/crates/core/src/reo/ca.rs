//! Constraint automata, their encoding, and the standard product used as a
//! reference when testing the encoding.

use std::collections::BTreeMap;

use crate::automaton::ExplicitAutomaton;
use crate::label::{Head, Label};
use crate::port::{Domain, PortSet, Scope};
use crate::predicate::ConcurrencyPredicate;
use crate::reo::constraint::{enumerate_solutions, DataConstraint};
use crate::reo::{ReoAlgebra, ReoError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaTransition {
    /// Head name given to the encoded labels.
    pub name: String,
    pub source: usize,
    pub flow: PortSet,
    pub guard: DataConstraint,
    pub target: usize,
}

/// `⟨Q, N, →, Q₀⟩`. Idle transitions `q --∅|tt--> q` are implicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintAutomaton {
    pub ports: PortSet,
    pub states: Vec<String>,
    pub transitions: Vec<CaTransition>,
    pub initial: Vec<usize>,
}

impl ConstraintAutomaton {
    pub fn new(ports: PortSet) -> Self {
        ConstraintAutomaton {
            ports,
            states: Vec::new(),
            transitions: Vec::new(),
            initial: Vec::new(),
        }
    }

    pub fn add_state(&mut self, name: impl Into<String>) -> usize {
        self.states.push(name.into());
        self.states.len() - 1
    }

    pub fn add_transition(
        &mut self,
        name: impl Into<String>,
        source: usize,
        flow: PortSet,
        guard: DataConstraint,
        target: usize,
    ) {
        self.transitions.push(CaTransition {
            name: name.into(),
            source,
            flow,
            guard,
            target,
        });
    }

    /// `"X | g"` for each transition, for display.
    pub fn describe(&self, t: &CaTransition) -> String {
        let xs: Vec<&str> = t.flow.iter().map(|p| p.name()).collect();
        format!("{} | {}", xs.join(""), t.guard)
    }
}

/// One labelled transition per solution of each guard; every state gets
/// `excl(N)`. Solutions with no flow are the idle step and are left out.
pub fn encode_ca(a: &ConstraintAutomaton, domain: &Domain) -> Result<ExplicitAutomaton, ReoError> {
    if domain.is_empty() {
        return Err(ReoError::EmptyDomain);
    }
    let scope = Scope::from(a.ports.clone());
    let mut b = ExplicitAutomaton::builder(scope.clone(), ReoAlgebra::shared());
    let ids: Vec<_> = a
        .states
        .iter()
        .map(|s| b.state(s.clone(), ConcurrencyPredicate::excl(a.ports.clone())))
        .collect();
    for t in &a.transitions {
        for sol in enumerate_solutions(&t.flow, &t.guard, domain) {
            if sol.flow.is_empty() {
                continue;
            }
            let params = sol.assignment.values().map(|v| v.0);
            let mut cas = sol.clone();
            cas.scope = a.ports.clone();
            let label = Label::new(Head::named(t.name.clone(), params), cas.step());
            b.transition(ids[t.source], label, ids[t.target]);
        }
    }
    for &i in &a.initial {
        b.initial(ids[i]);
    }
    Ok(b.build())
}

/// The textbook product of constraint automata: both sides move, or one
/// side idles, whenever they agree on which shared ports fire.
pub fn ca_product_oracle(
    a1: &ConstraintAutomaton,
    a2: &ConstraintAutomaton,
) -> ConstraintAutomaton {
    let ports: PortSet = a1.ports.union(&a2.ports).cloned().collect();
    let mut out = ConstraintAutomaton::new(ports);
    let mut index = BTreeMap::new();
    for (i, s1) in a1.states.iter().enumerate() {
        for (j, s2) in a2.states.iter().enumerate() {
            let id = out.add_state(format!("({s1},{s2})"));
            index.insert((i, j), id);
        }
    }
    let idle = |n: usize| CaTransition {
        name: String::new(),
        source: n,
        flow: PortSet::new(),
        guard: DataConstraint::True,
        target: n,
    };
    for i in 0..a1.states.len() {
        for j in 0..a2.states.len() {
            let left: Vec<CaTransition> = a1
                .transitions
                .iter()
                .filter(|t| t.source == i)
                .cloned()
                .chain([idle(i)])
                .collect();
            let right: Vec<CaTransition> = a2
                .transitions
                .iter()
                .filter(|t| t.source == j)
                .cloned()
                .chain([idle(j)])
                .collect();
            for t1 in &left {
                for t2 in &right {
                    if t1.flow.is_empty() && t2.flow.is_empty() {
                        continue;
                    }
                    let x1n2: PortSet = t1.flow.intersection(&a2.ports).cloned().collect();
                    let x2n1: PortSet = t2.flow.intersection(&a1.ports).cloned().collect();
                    if x1n2 != x2n1 {
                        continue;
                    }
                    let name = match (t1.name.is_empty(), t2.name.is_empty()) {
                        (false, false) => format!("{}.{}", t1.name, t2.name),
                        (false, true) => t1.name.clone(),
                        _ => t2.name.clone(),
                    };
                    out.add_transition(
                        name,
                        index[&(i, j)],
                        t1.flow.union(&t2.flow).cloned().collect(),
                        DataConstraint::and(t1.guard.clone(), t2.guard.clone()),
                        index[&(t1.target, t2.target)],
                    );
                }
            }
        }
    }
    for &i in &a1.initial {
        for &j in &a2.initial {
            out.initial.push(index[&(i, j)]);
        }
    }
    out
}
