//! Atomic steps: where and which data flows during one round.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::port::{fmt_ports, DataMap, PortSet, Scope};

/// `⟨P, F, IP, OP, data⟩`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AtomicStep {
    pub scope: Scope,
    pub flow: PortSet,
    pub inputs: PortSet,
    pub outputs: PortSet,
    pub data: DataMap,
}

impl AtomicStep {
    /// The step with no flow at all.
    pub fn idle(scope: Scope) -> Self {
        AtomicStep {
            scope,
            flow: PortSet::new(),
            inputs: PortSet::new(),
            outputs: PortSet::new(),
            data: DataMap::new(),
        }
    }

    pub fn new(
        scope: Scope,
        flow: PortSet,
        inputs: PortSet,
        outputs: PortSet,
        data: DataMap,
    ) -> Self {
        AtomicStep {
            scope,
            flow,
            inputs,
            outputs,
            data,
        }
    }

    /// Checks `F ⊆ P`, `IP, OP ⊆ F`, `IP ∩ OP = ∅` and `dom(data) = IP ∪ OP`.
    pub fn validate(&self) -> Result<(), CoreError> {
        let bad = |what: &str| Err(CoreError::MalformedStep(what.to_string()));
        if !self.flow.iter().all(|p| self.scope.contains(p)) {
            return bad("flow escapes scope");
        }
        if !self.inputs.is_subset(&self.flow) || !self.outputs.is_subset(&self.flow) {
            return bad("io ports outside flow");
        }
        if !self.inputs.is_disjoint(&self.outputs) {
            return bad("port is both input and output");
        }
        let io: PortSet = self.inputs.union(&self.outputs).cloned().collect();
        let dom: PortSet = self.data.keys().cloned().collect();
        if dom != io {
            return bad("data domain differs from inputs and outputs");
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Componentwise intersection with `ports`.
    pub fn restrict(&self, ports: &Scope) -> AtomicStep {
        let keep = |s: &PortSet| ports.filter(s);
        AtomicStep {
            scope: self.scope.intersect(ports),
            flow: keep(&self.flow),
            inputs: keep(&self.inputs),
            outputs: keep(&self.outputs),
            data: self
                .data
                .iter()
                .filter(|(p, _)| ports.contains(p))
                .map(|(p, v)| (p.clone(), *v))
                .collect(),
        }
    }
}

impl fmt::Display for AtomicStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let scope = match &self.scope {
            Scope::Finite(s) => fmt_ports(s),
            Scope::Universe => "*".to_string(),
        };
        let data: Vec<String> = self.data.iter().map(|(p, v)| format!("{p}↦{v}")).collect();
        write!(
            f,
            "⟨{}, {}, {}, {}, {{{}}}⟩",
            scope,
            fmt_ports(&self.flow),
            fmt_ports(&self.inputs),
            fmt_ports(&self.outputs),
            data.join(",")
        )
    }
}

/// Composes two atomic steps, choosing the largest sets the composition
/// conditions allow. Inputs fed by an output of the other step stop being
/// inputs.
pub fn compose_atomic_steps(s1: &AtomicStep, s2: &AtomicStep) -> Result<AtomicStep, CoreError> {
    let mut data = s1.data.clone();
    for (p, v) in &s2.data {
        match data.get(p) {
            Some(w) if w != v => {
                return Err(CoreError::DataMismatch {
                    port: p.clone(),
                    left: *w,
                    right: *v,
                })
            }
            _ => {
                data.insert(p.clone(), *v);
            }
        }
    }
    let outputs: PortSet = s1.outputs.union(&s2.outputs).cloned().collect();
    let inputs: PortSet = s1
        .inputs
        .union(&s2.inputs)
        .filter(|p| !outputs.contains(*p))
        .cloned()
        .collect();
    data.retain(|p, _| inputs.contains(p) || outputs.contains(p));
    Ok(AtomicStep {
        scope: s1.scope.union(&s2.scope),
        flow: s1.flow.union(&s2.flow).cloned().collect(),
        inputs,
        outputs,
        data,
    })
}
