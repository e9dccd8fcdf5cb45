//! Small-step interpreter for tuple-space terms.

use std::collections::BTreeSet;
use std::fmt;

use crate::label::{ActionOp, GroundAction};
use crate::linda::syntax::{Param, Process, Subst, Tuple};
use crate::port::Value;

/// `match(s, t)`: the substitution `γ` with `s[γ] = t`, if any.
pub fn match_tuple(s: &Tuple, t: &[Value]) -> Option<Subst> {
    if s.0.len() != t.len() {
        return None;
    }
    let mut gamma = Subst::new();
    for (p, v) in s.0.iter().zip(t) {
        match p {
            Param::Actual(a) if a == v => {}
            Param::Actual(_) => return None,
            Param::Formal(x) => {
                if let Some(prev) = gamma.insert(x.clone(), *v) {
                    if prev != *v {
                        return None;
                    }
                }
            }
        }
    }
    Some(gamma)
}

/// A multiset of processes and ground tuples, kept sorted so that equal
/// terms compare equal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct TupleSpaceTerm {
    pub processes: Vec<Process>,
    pub tuples: Vec<Vec<Value>>,
}

impl TupleSpaceTerm {
    pub fn new(processes: Vec<Process>, tuples: Vec<Vec<Value>>) -> Self {
        let mut t = TupleSpaceTerm { processes, tuples };
        t.normalise();
        t
    }

    fn normalise(&mut self) {
        self.processes.sort();
        self.tuples.sort();
    }
}

impl fmt::Display for TupleSpaceTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.processes.iter().map(|p| p.to_string()).collect();
        parts.extend(self.tuples.iter().map(|t| {
            let vs: Vec<String> = t.iter().map(|v| v.to_string()).collect();
            format!("⟨{}⟩", vs.join(","))
        }));
        if parts.is_empty() {
            f.write_str("∅")
        } else {
            f.write_str(&parts.join(" ⊕ "))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    Left,
    Right,
    End,
    Out(Vec<Value>),
    Rd(Vec<Value>),
    In(Vec<Value>),
}

impl Rule {
    /// The observable action, for the rules that touch the tuple space.
    pub fn observable(&self) -> Option<GroundAction> {
        let (op, t) = match self {
            Rule::Out(t) => (ActionOp::Out, t),
            Rule::Rd(t) => (ActionOp::Rd, t),
            Rule::In(t) => (ActionOp::In, t),
            _ => return None,
        };
        Some(GroundAction {
            op,
            tuple: t.clone(),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Rule::Left => "left",
            Rule::Right => "right",
            Rule::End => "end",
            Rule::Out(_) => "out",
            Rule::Rd(_) => "rd",
            Rule::In(_) => "in",
        }
    }
}

/// What a single process can do on its own, before looking at the store.
enum Local {
    Silent(Rule, Option<Process>),
    Out(Vec<Value>, Process),
    Take(ActionOp, Tuple, Process),
}

fn local_steps(p: &Process) -> Vec<Local> {
    match p {
        Process::End => vec![Local::Silent(Rule::End, None)],
        Process::Var(_) => Vec::new(),
        Process::Choice(a, b) => vec![
            Local::Silent(Rule::Left, Some((**a).clone())),
            Local::Silent(Rule::Right, Some((**b).clone())),
        ],
        Process::Rec(..) => local_steps(&p.unfold()),
        Process::Prefix { op, tuple, cont } => match op {
            ActionOp::Out => match tuple.values() {
                Some(t) => vec![Local::Out(t, (**cont).clone())],
                None => Vec::new(),
            },
            _ => vec![Local::Take(*op, tuple.clone(), (**cont).clone())],
        },
    }
}

/// Every one-step successor of `m`. `rec` is unfolded and fused with the
/// step of its body.
pub fn interp_step(m: &TupleSpaceTerm) -> Vec<(Rule, TupleSpaceTerm)> {
    let mut out = BTreeSet::new();
    let mut seen = BTreeSet::new();
    for (i, p) in m.processes.iter().enumerate() {
        if !seen.insert(p) {
            continue;
        }
        let without = |replacement: Option<Process>| {
            let mut procs = m.processes.clone();
            procs.remove(i);
            procs.extend(replacement);
            procs
        };
        for step in local_steps(p) {
            match step {
                Local::Silent(rule, next) => {
                    out.insert((rule, TupleSpaceTerm::new(without(next), m.tuples.clone())));
                }
                Local::Out(t, next) => {
                    let mut tuples = m.tuples.clone();
                    tuples.push(t.clone());
                    out.insert((
                        Rule::Out(t),
                        TupleSpaceTerm::new(without(Some(next)), tuples),
                    ));
                }
                Local::Take(op, pattern, cont) => {
                    let distinct: BTreeSet<&Vec<Value>> = m.tuples.iter().collect();
                    for t in distinct {
                        let Some(gamma) = match_tuple(&pattern, t) else {
                            continue;
                        };
                        let next = cont.subst_data(&gamma);
                        let mut tuples = m.tuples.clone();
                        let rule = if op == ActionOp::In {
                            let k = tuples.iter().position(|u| u == t).expect("present");
                            tuples.remove(k);
                            Rule::In(t.clone())
                        } else {
                            Rule::Rd(t.clone())
                        };
                        out.insert((rule, TupleSpaceTerm::new(without(Some(next)), tuples)));
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

pub type Trace = Vec<GroundAction>;

/// All terms reachable from `m` through silent rules only, `m` included.
fn silent_closure(m: &TupleSpaceTerm) -> BTreeSet<TupleSpaceTerm> {
    let mut seen = BTreeSet::new();
    let mut stack = vec![m.clone()];
    while let Some(t) = stack.pop() {
        if !seen.insert(t.clone()) {
            continue;
        }
        for (rule, next) in interp_step(&t) {
            if rule.observable().is_none() && !seen.contains(&next) {
                stack.push(next);
            }
        }
    }
    seen
}

/// Prefix-closed set of observable traces of length at most `depth`.
pub fn interpreter_traces(m: &TupleSpaceTerm, depth: usize) -> BTreeSet<Trace> {
    let mut traces = BTreeSet::new();
    traces.insert(Vec::new());
    let mut frontier: BTreeSet<(Trace, TupleSpaceTerm)> = silent_closure(m)
        .into_iter()
        .map(|t| (Vec::new(), t))
        .collect();
    for _ in 0..depth {
        let mut next = BTreeSet::new();
        for (trace, term) in &frontier {
            for (rule, succ) in interp_step(term) {
                let Some(a) = rule.observable() else { continue };
                let mut tr = trace.clone();
                tr.push(a);
                traces.insert(tr.clone());
                for s in silent_closure(&succ) {
                    next.insert((tr.clone(), s));
                }
            }
        }
        frontier = next;
    }
    traces
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linda::syntax::parse_process;

    fn vals(v: &[i64]) -> Vec<Value> {
        v.iter().copied().map(Value).collect()
    }

    #[test]
    fn matching() {
        let s = Tuple(vec![Param::Actual(Value(42)), Param::Formal("X".into())]);
        let g = match_tuple(&s, &vals(&[42, 43])).unwrap();
        assert_eq!(g.get("X"), Some(&Value(43)));
        assert!(match_tuple(&Tuple::ground([1, 2]), &vals(&[1, 2]))
            .unwrap()
            .is_empty());
        let xx = Tuple(vec![Param::Formal("X".into()), Param::Formal("X".into())]);
        assert!(match_tuple(&xx, &vals(&[1, 2])).is_none());
    }

    #[test]
    fn end_alone_vanishes() {
        let m = TupleSpaceTerm::new(vec![Process::End], vec![]);
        let succ = interp_step(&m);
        assert_eq!(succ.len(), 1);
        assert_eq!(succ[0].0, Rule::End);
        assert_eq!(succ[0].1, TupleSpaceTerm::default());
    }

    #[test]
    fn in_without_match_is_stuck() {
        let m = TupleSpaceTerm::new(
            vec![parse_process("in(1,X).end").unwrap()],
            vec![vals(&[2])],
        );
        assert!(interp_step(&m)
            .iter()
            .all(|(r, _)| !matches!(r, Rule::In(_))));
    }
}
