//! Data constraints and their finite-domain solutions.

use std::fmt;

use crate::port::{DataMap, Domain, Port, PortSet, Scope, Value};
use crate::reo::ReoError;

/// `g ::= tt | x̂ = d | g ∨ g | ¬g`. Conjunction and port equality are
/// expanded into this core grammar by the helper constructors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DataConstraint {
    True,
    Eq(Port, Value),
    Or(Box<DataConstraint>, Box<DataConstraint>),
    Not(Box<DataConstraint>),
}

impl DataConstraint {
    pub fn eq(p: impl Into<Port>, v: i64) -> Self {
        DataConstraint::Eq(p.into(), Value(v))
    }

    pub fn or(a: Self, b: Self) -> Self {
        DataConstraint::Or(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Self) -> Self {
        DataConstraint::Not(Box::new(a))
    }

    pub fn and(a: Self, b: Self) -> Self {
        match (a, b) {
            (DataConstraint::True, x) | (x, DataConstraint::True) => x,
            (a, b) => Self::not(Self::or(Self::not(a), Self::not(b))),
        }
    }

    pub fn all(items: impl IntoIterator<Item = Self>) -> Self {
        items.into_iter().fold(DataConstraint::True, Self::and)
    }

    /// `â ≠ d`.
    pub fn ne(p: impl Into<Port>, v: i64) -> Self {
        Self::not(Self::eq(p, v))
    }

    /// `â = b̂`, expanded as `⋁_d (â = d ∧ b̂ = d)` over the domain.
    pub fn ports_eq(a: &Port, b: &Port, domain: &Domain) -> Self {
        let mut it = domain.values().iter().map(|&d| {
            Self::and(
                DataConstraint::Eq(a.clone(), d),
                DataConstraint::Eq(b.clone(), d),
            )
        });
        let first = it.next().unwrap_or_else(|| Self::not(DataConstraint::True));
        it.fold(first, Self::or)
    }

    pub fn ports(&self) -> PortSet {
        let mut out = PortSet::new();
        self.collect_ports(&mut out);
        out
    }

    fn collect_ports(&self, out: &mut PortSet) {
        match self {
            DataConstraint::True => {}
            DataConstraint::Eq(p, _) => {
                out.insert(p.clone());
            }
            DataConstraint::Or(a, b) => {
                a.collect_ports(out);
                b.collect_ports(out);
            }
            DataConstraint::Not(a) => a.collect_ports(out),
        }
    }
}

impl fmt::Display for DataConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DataConstraint::True => f.write_str("tt"),
            DataConstraint::Eq(p, v) => write!(f, "{p}={v}"),
            DataConstraint::Or(a, b) => write!(f, "({a} ∨ {b})"),
            DataConstraint::Not(a) => write!(f, "¬{a}"),
        }
    }
}

pub fn dc_satisfies(assignment: &DataMap, g: &DataConstraint) -> Result<bool, ReoError> {
    Ok(match g {
        DataConstraint::True => true,
        DataConstraint::Eq(p, v) => match assignment.get(p) {
            Some(w) => w == v,
            None => return Err(ReoError::UnboundPort(p.clone())),
        },
        DataConstraint::Or(a, b) => dc_satisfies(assignment, a)? || dc_satisfies(assignment, b)?,
        DataConstraint::Not(a) => !dc_satisfies(assignment, a)?,
    })
}

/// Every total assignment `X → D`, in lexicographic order.
pub fn assignments(xs: &PortSet, domain: &Domain) -> Vec<DataMap> {
    let mut out = vec![DataMap::new()];
    for p in xs {
        out = out
            .into_iter()
            .flat_map(|m| {
                domain.values().iter().map(move |&v| {
                    let mut m = m.clone();
                    m.insert(p.clone(), v);
                    m
                })
            })
            .collect();
    }
    out
}

/// A ground constraint-automaton step: the ports in `flow` fire with the
/// given values, while `noflow` must stay silent.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CasLabel {
    pub scope: PortSet,
    pub flow: PortSet,
    pub assignment: DataMap,
    pub noflow: PortSet,
}

impl CasLabel {
    pub fn new(scope: PortSet, assignment: DataMap) -> Self {
        CasLabel {
            scope,
            flow: assignment.keys().cloned().collect(),
            assignment,
            noflow: PortSet::new(),
        }
    }

    /// The atomic step `⟨N, X, ∅, X, σ⟩`.
    pub fn step(&self) -> crate::step::AtomicStep {
        crate::step::AtomicStep::new(
            Scope::from(self.scope.clone()),
            self.flow.clone(),
            PortSet::new(),
            self.flow.clone(),
            self.assignment.clone(),
        )
    }
}

impl fmt::Display for CasLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let flow: Vec<&str> = self.flow.iter().map(Port::name).collect();
        let eqs: Vec<String> = self
            .assignment
            .iter()
            .map(|(p, v)| format!("{p}={v}"))
            .collect();
        write!(f, "{}|{}", flow.join(""), eqs.join("∧"))
    }
}

/// All solutions of `g` over `X`, sorted. Constraints mentioning ports
/// outside `X` have no solutions.
pub fn enumerate_solutions(xs: &PortSet, g: &DataConstraint, domain: &Domain) -> Vec<CasLabel> {
    let mut out: Vec<CasLabel> = assignments(xs, domain)
        .into_iter()
        .filter(|m| dc_satisfies(m, g).unwrap_or(false))
        .map(|m| CasLabel::new(xs.clone(), m))
        .collect();
    out.sort();
    out
}

/// `ℓ₁ · ℓ₂` on CAS labels; `None` for ⊥.
pub fn compose_cas(l1: &CasLabel, l2: &CasLabel) -> Option<CasLabel> {
    let x1n2: PortSet = l1.flow.intersection(&l2.scope).cloned().collect();
    let x2n1: PortSet = l2.flow.intersection(&l1.scope).cloned().collect();
    if x1n2 != x2n1 {
        return None;
    }
    if !l1.noflow.is_disjoint(&l2.flow) || !l2.noflow.is_disjoint(&l1.flow) {
        return None;
    }
    let mut assignment = l1.assignment.clone();
    for (p, v) in &l2.assignment {
        if let Some(w) = assignment.insert(p.clone(), *v) {
            if w != *v {
                return None;
            }
        }
    }
    let flow: PortSet = l1.flow.union(&l2.flow).cloned().collect();
    let noflow = l1
        .noflow
        .union(&l2.noflow)
        .filter(|p| !flow.contains(*p))
        .cloned()
        .collect();
    Some(CasLabel {
        scope: l1.scope.union(&l2.scope).cloned().collect(),
        flow,
        assignment,
        noflow,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::port::ports;

    fn m(pairs: &[(&str, i64)]) -> DataMap {
        pairs
            .iter()
            .map(|(p, v)| (Port::new(p), Value(*v)))
            .collect()
    }

    #[test]
    fn satisfaction_basics() {
        let d = Domain::binary();
        let eq = DataConstraint::ports_eq(&Port::new("a"), &Port::new("b"), &d);
        assert!(dc_satisfies(&m(&[("a", 1), ("b", 1)]), &eq).unwrap());
        assert!(!dc_satisfies(&m(&[("a", 1), ("b", 0)]), &eq).unwrap());
        assert!(dc_satisfies(&m(&[]), &DataConstraint::True).unwrap());
        assert!(!dc_satisfies(&m(&[("a", 0)]), &DataConstraint::ne("a", 0)).unwrap());
        assert!(matches!(
            dc_satisfies(&m(&[]), &DataConstraint::eq("z", 0)),
            Err(ReoError::UnboundPort(_))
        ));
    }

    #[test]
    fn solutions_match_brute_force() {
        let d = Domain::binary();
        let sols = enumerate_solutions(&ports(["a"]), &DataConstraint::True, &d);
        assert_eq!(sols.len(), 2);
        let empty = enumerate_solutions(&PortSet::new(), &DataConstraint::True, &d);
        assert_eq!(empty.len(), 1);
        assert!(empty[0].flow.is_empty());
        let eq = DataConstraint::ports_eq(&Port::new("a"), &Port::new("b"), &d);
        let sols = enumerate_solutions(&ports(["a", "b"]), &eq, &d);
        assert_eq!(
            sols.iter()
                .map(|s| s.assignment.clone())
                .collect::<Vec<_>>(),
            vec![m(&[("a", 0), ("b", 0)]), m(&[("a", 1), ("b", 1)])]
        );
    }

    #[test]
    fn cas_composition_follows_shared_ports() {
        let s1 = CasLabel::new(ports(["a", "b"]), m(&[("a", 1), ("b", 1)]));
        let s3 = CasLabel::new(ports(["b", "c"]), m(&[("b", 1)]));
        let r = compose_cas(&s1, &s3).unwrap();
        assert_eq!(r.flow, ports(["a", "b"]));
        assert_eq!(r.scope, ports(["a", "b", "c"]));
        let s2 = CasLabel::new(ports(["a", "b"]), m(&[("a", 0)]));
        assert!(compose_cas(&s2, &s3).is_none());
        let s4 = CasLabel::new(ports(["b", "c"]), m(&[("c", 1)]));
        let r = compose_cas(&s2, &s4).unwrap();
        assert_eq!(r.assignment, m(&[("a", 0), ("c", 1)]));
    }
}
