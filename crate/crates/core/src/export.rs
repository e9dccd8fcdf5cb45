//! JSON and DOT renderings of finite automata.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::automaton::{BehaviouralAutomaton, ExplicitAutomaton, StateId};
use crate::error::CoreError;
use crate::label::{Head, Label, ProcessId};
use crate::port::{DataMap, PortSet, Scope};
use crate::predicate::ConcurrencyPredicate;
use crate::step::AtomicStep;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AutomatonDoc {
    pub ports: Scope,
    pub states: Vec<StateDoc>,
    pub transitions: Vec<TransitionDoc>,
    pub initial: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateDoc {
    pub id: String,
    pub cp: ConcurrencyPredicate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransitionDoc {
    pub src: String,
    pub label: LabelDoc,
    pub dst: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabelDoc {
    pub head: Head,
    pub flow: PortSet,
    pub inputs: PortSet,
    pub outputs: PortSet,
    pub data: DataMap,
    pub noflow: PortSet,
    pub tag: Option<ProcessId>,
}

impl From<&Label> for LabelDoc {
    fn from(l: &Label) -> Self {
        LabelDoc {
            head: l.head.clone(),
            flow: l.step.flow.clone(),
            inputs: l.step.inputs.clone(),
            outputs: l.step.outputs.clone(),
            data: l.step.data.clone(),
            noflow: l.noflow.clone(),
            tag: l.tag.clone(),
        }
    }
}

impl LabelDoc {
    pub fn into_label(self, scope: Scope) -> Label {
        Label {
            head: self.head,
            step: AtomicStep::new(scope, self.flow, self.inputs, self.outputs, self.data),
            noflow: self.noflow,
            tag: self.tag,
        }
    }
}

pub fn to_doc(a: &ExplicitAutomaton) -> AutomatonDoc {
    let n = a.state_count();
    let ids = (0..n as u32).map(StateId);
    AutomatonDoc {
        ports: a.ports().clone(),
        states: ids
            .clone()
            .map(|q| StateDoc {
                id: a.state_name(q),
                cp: a.predicate(q),
            })
            .collect(),
        transitions: ids
            .flat_map(|q| a.enabled(q))
            .map(|t| TransitionDoc {
                src: a.state_name(t.source),
                label: LabelDoc::from(&t.label),
                dst: a.state_name(t.target),
            })
            .collect(),
        initial: a.initial().into_iter().map(|q| a.state_name(q)).collect(),
    }
}

pub fn from_doc(doc: AutomatonDoc, algebra: Algebra) -> Result<ExplicitAutomaton, CoreError> {
    let mut b = ExplicitAutomaton::builder(doc.ports.clone(), algebra);
    let mut names = std::collections::HashMap::new();
    for s in doc.states {
        if names.contains_key(&s.id) {
            return Err(CoreError::Import(format!("duplicate state {:?}", s.id)));
        }
        let id = b.state(s.id.clone(), s.cp);
        names.insert(s.id, id);
    }
    let lookup = |n: &str| {
        names
            .get(n)
            .copied()
            .ok_or_else(|| CoreError::Import(format!("unknown state {n:?}")))
    };
    for t in doc.transitions {
        let (src, dst) = (lookup(&t.src)?, lookup(&t.dst)?);
        let label = t.label.into_label(doc.ports.clone());
        label.step.validate()?;
        b.transition(src, label, dst);
    }
    for i in &doc.initial {
        b.initial(lookup(i)?);
    }
    Ok(b.build())
}

pub fn to_json(a: &ExplicitAutomaton) -> String {
    serde_json::to_string_pretty(&to_doc(a)).expect("automaton documents always serialise")
}

pub fn from_json(text: &str, algebra: Algebra) -> Result<ExplicitAutomaton, CoreError> {
    let doc: AutomatonDoc =
        serde_json::from_str(text).map_err(|e| CoreError::Import(e.to_string()))?;
    from_doc(doc, algebra)
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz rendering with nodes and edges sorted by name so that output
/// is stable across runs.
pub fn to_dot(a: &ExplicitAutomaton) -> String {
    let n = a.state_count() as u32;
    let initial = a.initial();
    let mut nodes: Vec<(String, bool)> = (0..n)
        .map(StateId)
        .map(|q| (a.state_name(q), initial.contains(&q)))
        .collect();
    nodes.sort();
    let mut edges: Vec<(String, String, String)> = a
        .transitions()
        .map(|t| {
            (
                a.state_name(t.source),
                t.label.to_string(),
                a.state_name(t.target),
            )
        })
        .collect();
    edges.sort();
    let mut out = String::from("digraph automaton {\n  rankdir=LR;\n  node [shape=circle];\n");
    for (name, init) in &nodes {
        let shape = if *init { ", shape=doublecircle" } else { "" };
        let _ = writeln!(
            out,
            "  \"{}\" [label=\"{}\"{}];",
            escape(name),
            escape(name),
            shape
        );
    }
    for (src, label, dst) in &edges {
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\" [label=\"{}\"];",
            escape(src),
            escape(dst),
            escape(label)
        );
    }
    out.push_str("}\n");
    out
}
