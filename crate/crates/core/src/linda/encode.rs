//! Linda processes and tuple spaces as behavioural automata.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::algebra::{Algebra, LabelAlgebra};
use crate::automaton::{
    sort_transitions, Automaton, BehaviouralAutomaton, Interner, StateId, Transition,
};
use crate::label::{ActionOp, GroundAction, Head, Label, LindaKind, ProcessId};
use crate::linda::interp::{interpreter_traces, match_tuple, Trace, TupleSpaceTerm};
use crate::linda::syntax::{Process, Tuple};
use crate::linda::LindaError;
use crate::port::{Port, PortSet, Scope, Value};
use crate::predicate::ConcurrencyPredicate;
use crate::product::Product;
use crate::step::AtomicStep;

/// The port a Linda head flows on; its own textual form.
fn port_of(kind: LindaKind, action: &GroundAction) -> Port {
    Port::new(
        Head::Linda {
            kind,
            action: action.clone(),
        }
        .to_string(),
    )
}

/// A raw action or dual flows on its own port and on the τ port of the
/// action; a τ label flows on the τ port only. No data is involved.
pub fn linda_label(kind: LindaKind, action: GroundAction, tag: Option<ProcessId>) -> Label {
    let mut flow = PortSet::new();
    flow.insert(port_of(LindaKind::Tau, &action));
    if kind != LindaKind::Tau {
        flow.insert(port_of(kind, &action));
    }
    let step = AtomicStep::new(
        Scope::Universe,
        flow,
        PortSet::new(),
        PortSet::new(),
        Default::default(),
    );
    Label::new(Head::Linda { kind, action }, step).with_tag(tag)
}

/// `a · ā = τ_a`; everything else is ⊥.
#[derive(Debug, Default)]
pub struct LindaAlgebra;

impl LindaAlgebra {
    pub fn shared() -> Algebra {
        Arc::new(LindaAlgebra)
    }
}

impl LabelAlgebra for LindaAlgebra {
    fn name(&self) -> &str {
        "linda"
    }

    fn combine(&self, a: &Label, b: &Label) -> Option<Label> {
        let (ka, xa) = a.head.linda()?;
        let (kb, xb) = b.head.linda()?;
        if xa != xb {
            return None;
        }
        let tag = match (ka, kb) {
            (LindaKind::Act, LindaKind::Dual) => a.tag.clone(),
            (LindaKind::Dual, LindaKind::Act) => b.tag.clone(),
            _ => return None,
        };
        Some(linda_label(LindaKind::Tau, xa.clone(), tag))
    }
}

struct Step {
    op: ActionOp,
    pattern: Tuple,
    cont: Process,
}

/// Action prefixes a process offers, with choices and recursion resolved.
fn offers(p: &Process) -> Vec<Step> {
    match p {
        Process::Prefix { op, tuple, cont } => vec![Step {
            op: *op,
            pattern: tuple.clone(),
            cont: (**cont).clone(),
        }],
        Process::Choice(a, b) => {
            let mut v = offers(a);
            v.extend(offers(b));
            v
        }
        Process::Rec(..) => offers(&p.unfold()),
        Process::Var(_) | Process::End => Vec::new(),
    }
}

/// A Linda process. `out` steps are offered proactively; `rd` and `in`
/// only in response to a tuple the store puts on offer.
pub struct ProcessAutomaton {
    id: ProcessId,
    priority: Option<Vec<ProcessId>>,
    initial: Process,
    states: Interner<Process>,
}

/// `⟦P⟧`; with `priority` set (highest first), labels are tagged with the
/// process id and the predicate blocks τ steps of lower-ranked processes.
pub fn encode_process(
    p: &Process,
    id: ProcessId,
    priority: Option<Vec<ProcessId>>,
) -> Result<ProcessAutomaton, LindaError> {
    p.check_closed()?;
    let states = Interner::new();
    states.intern(p);
    Ok(ProcessAutomaton {
        id,
        priority,
        initial: p.clone(),
        states,
    })
}

impl ProcessAutomaton {
    pub fn id(&self) -> &ProcessId {
        &self.id
    }

    pub fn term(&self, q: StateId) -> Process {
        self.states.get(q)
    }

    fn tag(&self) -> Option<ProcessId> {
        self.priority.as_ref().map(|_| self.id.clone())
    }

    /// The `rd`/`in` transitions enabled against a particular set of
    /// ground tuples.
    pub fn enabled_against(&self, q: StateId, tuples: &[Vec<Value>]) -> Vec<Transition> {
        let mut out = Vec::new();
        for t in tuples {
            for op in [ActionOp::Rd, ActionOp::In] {
                let offer = linda_label(
                    LindaKind::Dual,
                    GroundAction {
                        op,
                        tuple: t.clone(),
                    },
                    None,
                );
                out.extend(self.respond(q, &offer));
            }
        }
        sort_transitions(&mut out);
        out.dedup();
        out
    }
}

impl BehaviouralAutomaton for ProcessAutomaton {
    fn ports(&self) -> &Scope {
        &Scope::Universe
    }

    fn algebra(&self) -> &Algebra {
        static_linda()
    }

    fn initial(&self) -> Vec<StateId> {
        vec![self.states.intern(&self.initial)]
    }

    fn enabled(&self, q: StateId) -> Vec<Transition> {
        let p = self.states.get(q);
        let mut out: Vec<Transition> = offers(&p)
            .into_iter()
            .filter(|s| s.op == ActionOp::Out)
            .filter_map(|s| {
                let tuple = s.pattern.values()?;
                let label = linda_label(
                    LindaKind::Act,
                    GroundAction {
                        op: ActionOp::Out,
                        tuple,
                    },
                    self.tag(),
                );
                Some(Transition::new(q, label, self.states.intern(&s.cont)))
            })
            .collect();
        sort_transitions(&mut out);
        out.dedup();
        out
    }

    fn respond(&self, q: StateId, offer: &Label) -> Vec<Transition> {
        let Some((LindaKind::Dual, action)) = offer.head.linda() else {
            return Vec::new();
        };
        if action.op == ActionOp::Out {
            return Vec::new();
        }
        let p = self.states.get(q);
        let mut out: Vec<Transition> = offers(&p)
            .into_iter()
            .filter(|s| s.op == action.op)
            .filter_map(|s| {
                let gamma = match_tuple(&s.pattern, &action.tuple)?;
                let next = s.cont.subst_data(&gamma);
                let label = linda_label(LindaKind::Act, action.clone(), self.tag());
                Some(Transition::new(q, label, self.states.intern(&next)))
            })
            .collect();
        sort_transitions(&mut out);
        out.dedup();
        out
    }

    fn is_reactive(&self) -> bool {
        true
    }

    fn predicate(&self, q: StateId) -> ConcurrencyPredicate {
        match &self.priority {
            None => ConcurrencyPredicate::LindaBase,
            Some(order) => ConcurrencyPredicate::LindaPriority {
                process: self.id.clone(),
                ended: self.states.get(q) == Process::End,
                order: order.clone(),
            },
        }
    }

    fn state_name(&self, q: StateId) -> String {
        self.states.get(q).to_string()
    }
}

fn static_linda() -> &'static Algebra {
    static ALGEBRA: std::sync::OnceLock<Algebra> = std::sync::OnceLock::new();
    ALGEBRA.get_or_init(LindaAlgebra::shared)
}

/// The store: a multiset of ground tuples.
pub struct TupleSpaceAutomaton {
    initial: Vec<Vec<Value>>,
    states: Interner<Vec<Vec<Value>>>,
}

pub fn encode_tuplespace(tuples: &[Tuple]) -> Result<TupleSpaceAutomaton, LindaError> {
    let mut initial = tuples
        .iter()
        .map(|t| {
            t.values()
                .ok_or_else(|| LindaError::NonGroundTuple(t.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    initial.sort();
    Ok(TupleSpaceAutomaton {
        initial,
        states: Interner::new(),
    })
}

impl TupleSpaceAutomaton {
    pub fn contents(&self, q: StateId) -> Vec<Vec<Value>> {
        self.states.get(q)
    }
}

impl BehaviouralAutomaton for TupleSpaceAutomaton {
    fn ports(&self) -> &Scope {
        &Scope::Universe
    }

    fn algebra(&self) -> &Algebra {
        static_linda()
    }

    fn initial(&self) -> Vec<StateId> {
        vec![self.states.intern(&self.initial)]
    }

    fn enabled(&self, q: StateId) -> Vec<Transition> {
        let m = self.states.get(q);
        let distinct: BTreeSet<&Vec<Value>> = m.iter().collect();
        let mut out = Vec::new();
        for t in distinct {
            let rd = GroundAction {
                op: ActionOp::Rd,
                tuple: t.clone(),
            };
            out.push(Transition::new(
                q,
                linda_label(LindaKind::Dual, rd, None),
                q,
            ));
            let mut rest = m.clone();
            let k = rest.iter().position(|u| u == t).expect("present");
            rest.remove(k);
            let inn = GroundAction {
                op: ActionOp::In,
                tuple: t.clone(),
            };
            out.push(Transition::new(
                q,
                linda_label(LindaKind::Dual, inn, None),
                self.states.intern(&rest),
            ));
        }
        sort_transitions(&mut out);
        out
    }

    fn respond(&self, q: StateId, offer: &Label) -> Vec<Transition> {
        match offer.head.linda() {
            Some((LindaKind::Act, action)) if action.op == ActionOp::Out => {
                let mut m = self.states.get(q);
                m.push(action.tuple.clone());
                m.sort();
                let label = linda_label(LindaKind::Dual, action.clone(), None);
                vec![Transition::new(q, label, self.states.intern(&m))]
            }
            _ => Vec::new(),
        }
    }

    fn is_reactive(&self) -> bool {
        true
    }

    fn predicate(&self, _q: StateId) -> ConcurrencyPredicate {
        ConcurrencyPredicate::LindaBase
    }

    fn state_name(&self, q: StateId) -> String {
        let m = self.states.get(q);
        let parts: Vec<String> = m
            .iter()
            .map(|t| {
                let vs: Vec<String> = t.iter().map(|v| v.to_string()).collect();
                format!("⟨{}⟩", vs.join(","))
            })
            .collect();
        format!("{{{}}}", parts.join(","))
    }
}

/// Default process ids: `p1`, `p2`, ... by position.
pub fn default_ids(n: usize) -> Vec<ProcessId> {
    (1..=n).map(|i| ProcessId::new(format!("p{i}"))).collect()
}

/// The automata of `⟦P₁⟧ ⋈ … ⋈ ⟦Pₙ⟧ ⋈ ⟦T⟧`, store last.
pub fn encode_factors(
    processes: &[(ProcessId, Process)],
    tuples: &[Tuple],
    priority: Option<Vec<ProcessId>>,
) -> Result<Vec<Automaton>, LindaError> {
    let mut out: Vec<Automaton> = Vec::new();
    for (id, p) in processes {
        out.push(Arc::new(encode_process(p, id.clone(), priority.clone())?));
    }
    out.push(Arc::new(encode_tuplespace(tuples)?));
    Ok(out)
}

/// `⟦M⟧` as one flat product, processes numbered by position.
pub fn encode_term(
    m: &TupleSpaceTerm,
    priority: Option<Vec<ProcessId>>,
) -> Result<Product, LindaError> {
    let ids = default_ids(m.processes.len());
    let procs: Vec<(ProcessId, Process)> =
        ids.into_iter().zip(m.processes.iter().cloned()).collect();
    let tuples: Vec<Tuple> = m
        .tuples
        .iter()
        .map(|t| Tuple::ground(t.iter().map(|v| v.0)))
        .collect();
    let factors = encode_factors(&procs, &tuples, priority)?;
    Ok(Product::new(factors).expect("linda factors share one algebra"))
}

/// Prefix-closed τ traces of an automaton, up to `depth` steps.
pub fn automaton_traces(b: &dyn BehaviouralAutomaton, depth: usize) -> BTreeSet<Trace> {
    let mut traces = BTreeSet::new();
    traces.insert(Vec::new());
    let mut frontier: BTreeSet<(Trace, StateId)> =
        b.initial().into_iter().map(|q| (Vec::new(), q)).collect();
    for _ in 0..depth {
        let mut next = BTreeSet::new();
        for (trace, q) in &frontier {
            for t in b.enabled(*q) {
                let Some((LindaKind::Tau, action)) = t.label.head.linda() else {
                    continue;
                };
                let mut tr = trace.clone();
                tr.push(action.clone());
                traces.insert(tr.clone());
                next.insert((tr, t.target));
            }
        }
        frontier = next;
    }
    traces
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrespondenceReport {
    pub depth: usize,
    pub matched: usize,
    /// Traces of the interpreter the automaton cannot follow.
    pub missing: Vec<Trace>,
    /// Traces of the automaton the interpreter cannot follow.
    pub extra: Vec<Trace>,
    /// Maximal traces (classes) on the interpreter side.
    pub classes: usize,
}

impl CorrespondenceReport {
    pub fn holds(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }
}

fn maximal(traces: &BTreeSet<Trace>) -> usize {
    traces
        .iter()
        .filter(|t| {
            !traces
                .iter()
                .any(|u| u.len() > t.len() && u[..t.len()] == t[..])
        })
        .count()
}

/// Compares interpreter traces (silent rules absorbed) with the τ traces of
/// `⟦M⟧`, both cut at `depth` observable steps.
pub fn trace_correspondence(
    m: &TupleSpaceTerm,
    depth: usize,
) -> Result<CorrespondenceReport, LindaError> {
    let interp = interpreter_traces(m, depth);
    let automaton = encode_term(m, None)?;
    let ba = automaton_traces(&automaton, depth);
    Ok(CorrespondenceReport {
        depth,
        matched: interp.intersection(&ba).count(),
        missing: interp.difference(&ba).cloned().collect(),
        extra: ba.difference(&interp).cloned().collect(),
        classes: maximal(&interp),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explore::reachable;
    use crate::linda::syntax::parse_process;
    use crate::product::Product;

    fn act(op: ActionOp, t: &[i64]) -> GroundAction {
        GroundAction {
            op,
            tuple: t.iter().copied().map(Value).collect(),
        }
    }

    fn rd_out_in() -> TupleSpaceTerm {
        TupleSpaceTerm::new(
            vec![
                parse_process("rd(42,X).end").unwrap(),
                parse_process("out(42,43).end").unwrap(),
                parse_process("in(42,X).end").unwrap(),
            ],
            vec![],
        )
    }

    #[test]
    fn duals_meet_in_tau() {
        let alg = LindaAlgebra;
        let a = linda_label(LindaKind::Act, act(ActionOp::Out, &[42, 43]), None);
        let d = linda_label(LindaKind::Dual, act(ActionOp::Out, &[42, 43]), None);
        let t = alg.compose(&a, &d).unwrap();
        assert_eq!(t.head.to_string(), "τout(42,43)");
        assert_eq!(t.step.flow.len(), 1);
        assert!(alg.compose(&t, &a).is_none());
        assert!(alg.compose(&a, &a).is_none());
        let p = ProcessId::new("p");
        let ap = linda_label(
            LindaKind::Act,
            act(ActionOp::Rd, &[42, 43]),
            Some(p.clone()),
        );
        let dr = linda_label(LindaKind::Dual, act(ActionOp::Rd, &[42, 43]), None);
        assert_eq!(alg.compose(&dr, &ap).unwrap().tag, Some(p));
    }

    #[test]
    fn out_end_has_two_states() {
        let b = encode_process(
            &parse_process("out(1).end").unwrap(),
            ProcessId::new("p"),
            None,
        )
        .unwrap();
        let g = reachable(&b, 10);
        assert_eq!(g.states.len(), 2);
        assert_eq!(g.transitions.len(), 1);
        let e = encode_process(&Process::End, ProcessId::new("p"), None).unwrap();
        assert!(e.enabled(e.initial()[0]).is_empty());
        assert!(matches!(
            encode_process(&Process::Var("X".into()), ProcessId::new("p"), None),
            Err(LindaError::OpenProcess(_))
        ));
    }

    #[test]
    fn reads_are_offered_per_matching_tuple() {
        let b = encode_process(
            &parse_process("rd(42,X).end").unwrap(),
            ProcessId::new("p"),
            None,
        )
        .unwrap();
        let q = b.initial()[0];
        let tuples = vec![
            vec![Value(42), Value(43)],
            vec![Value(42), Value(1)],
            vec![Value(1), Value(1)],
        ];
        let ts = b.enabled_against(q, &tuples);
        let heads: Vec<String> = ts.iter().map(|t| t.label.head.to_string()).collect();
        assert_eq!(heads, ["rd(42,1)", "rd(42,43)"]);
    }

    #[test]
    fn store_moves() {
        let ts = encode_tuplespace(&[Tuple::ground([42, 43])]).unwrap();
        let q = ts.initial()[0];
        let en = ts.enabled(q);
        assert_eq!(en.len(), 2);
        let rd = en
            .iter()
            .find(|t| t.label.head.to_string() == "~rd(42,43)")
            .unwrap();
        assert_eq!(rd.target, q);
        let inn = en
            .iter()
            .find(|t| t.label.head.to_string() == "~in(42,43)")
            .unwrap();
        assert!(ts.contents(inn.target).is_empty());
        assert!(ts.enabled(inn.target).is_empty());
        let non_ground = Tuple(vec![Param::Formal("X".into())]);
        assert!(matches!(
            encode_tuplespace(&[non_ground]),
            Err(LindaError::NonGroundTuple(_))
        ));
    }

    use crate::linda::syntax::Param;

    #[test]
    fn example_term_fires_out_then_rd() {
        let m = TupleSpaceTerm::new(
            vec![
                parse_process("rd(42,X).end").unwrap(),
                parse_process("out(42,43).end").unwrap(),
            ],
            vec![],
        );
        let b = encode_term(&m, None).unwrap();
        let q0 = b.initial()[0];
        let first = b.enabled(q0);
        assert_eq!(first.len(), 1);
        assert_eq!(first[0].label.head.to_string(), "τout(42,43)");
        let second = b.enabled(first[0].target);
        assert_eq!(second.len(), 1);
        assert_eq!(second[0].label.head.to_string(), "τrd(42,43)");
        let end = encode_term(&TupleSpaceTerm::new(vec![Process::End], vec![]), None).unwrap();
        assert!(end.enabled(end.initial()[0]).is_empty());
    }

    #[test]
    fn priority_blocks_the_lower_process() {
        let m = TupleSpaceTerm::new(
            vec![
                parse_process("in(1).end").unwrap(),
                parse_process("in(1).end").unwrap(),
            ],
            vec![vec![Value(1)]],
        );
        let ids = default_ids(2);
        let procs: Vec<(ProcessId, Process)> =
            ids.iter().cloned().zip(m.processes.clone()).collect();
        let order = vec![ids[1].clone(), ids[0].clone()];
        let b = Product::new(encode_factors(&procs, &[Tuple::ground([1])], Some(order)).unwrap())
            .unwrap();
        let ts = b.enabled(b.initial()[0]);
        assert_eq!(ts.len(), 1);
        assert_eq!(ts[0].label.tag, Some(ids[1].clone()));
        let plain = encode_term(&m, None).unwrap();
        assert_eq!(plain.enabled(plain.initial()[0]).len(), 2);
    }

    #[test]
    fn rd_out_in_corresponds() {
        let r = trace_correspondence(&rd_out_in(), 4).unwrap();
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.classes, 2);
        let r = trace_correspondence(&TupleSpaceTerm::new(vec![Process::End], vec![]), 3).unwrap();
        assert!(r.holds());
        assert_eq!(r.matched, 1);
        let m = TupleSpaceTerm::new(
            vec![
                parse_process("out(1).end").unwrap(),
                parse_process("in(1).end").unwrap(),
            ],
            vec![],
        );
        let r = trace_correspondence(&m, 2).unwrap();
        assert!(r.holds());
        assert_eq!(r.classes, 1);
        assert_eq!(r.matched, 3);
    }

    #[test]
    fn recursion_and_choice() {
        let m = TupleSpaceTerm::new(
            vec![
                parse_process("rec R . out(1).R").unwrap(),
                parse_process("in(1).out(2).end [] rd(X).end").unwrap(),
            ],
            vec![],
        );
        let r = trace_correspondence(&m, 5).unwrap();
        assert!(r.holds(), "{r:?}");
    }
}
