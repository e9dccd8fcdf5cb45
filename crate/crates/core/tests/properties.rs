use std::collections::BTreeMap;

use proptest::prelude::*;

use coauto::export::{from_json, to_json};
use coauto::linda::{match_tuple, Param, Tuple};
use coauto::reo::{
    alternating_coordinator, encode_ca, lossy_fifo, primitive, PrimitiveKind, ReoAlgebra,
};
use coauto::{
    materialize, reachable, restrict, AtomicStep, DataMap, Domain, Head, Label, Port, PortSet,
    Product, Scope, Value,
};

const POOL: [&str; 4] = ["a", "b", "c", "d"];

fn port_set() -> impl Strategy<Value = PortSet> {
    proptest::sample::subsequence(POOL.to_vec(), 0..=4)
        .prop_map(|ps| ps.into_iter().map(Port::new).collect())
}

prop_compose! {
    fn reo_label()(
        scope in port_set(),
        roles in proptest::collection::vec((0u8..4, 0i64..2), 4),
        head in 0u8..3,
    ) -> Label {
        let (mut flow, mut ip, mut op, mut noflow) =
            (PortSet::new(), PortSet::new(), PortSet::new(), PortSet::new());
        let mut data = DataMap::new();
        for (p, (role, v)) in scope.iter().zip(roles) {
            match role {
                0 => {
                    noflow.insert(p.clone());
                }
                1 => {
                    flow.insert(p.clone());
                }
                2 => {
                    flow.insert(p.clone());
                    ip.insert(p.clone());
                    data.insert(p.clone(), Value(v));
                }
                _ => {
                    flow.insert(p.clone());
                    op.insert(p.clone());
                    data.insert(p.clone(), Value(v));
                }
            }
        }
        let step = AtomicStep::new(Scope::from(scope), flow, ip, op, data);
        Label::new(Head::named(format!("h{head}"), []), step).with_noflow(noflow)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn reo_composition_is_a_partial_commutative_monoid(
        a in reo_label(), b in reo_label(), c in reo_label()
    ) {
        let alg = ReoAlgebra::shared();
        let ab = alg.compose(&a, &b);
        prop_assert_eq!(&ab, &alg.compose(&b, &a));
        let left = ab.and_then(|ab| alg.compose(&ab, &c));
        let right = alg.compose(&b, &c).and_then(|bc| alg.compose(&a, &bc));
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(alg.compose(&Label::identity(Scope::empty()), &a), Some(a.clone()));
        if let Some(l) = left {
            prop_assert!(l.step.is_valid());
        }
    }

    #[test]
    fn restriction_composes(l in reo_label(), p in port_set(), q in port_set()) {
        let (sp, sq) = (Scope::from(p.clone()), Scope::from(q.clone()));
        let both: PortSet = p.intersection(&q).cloned().collect();
        let twice = restrict(&restrict(&l, &sp), &sq);
        let once = restrict(&l, &Scope::from(both));
        prop_assert_eq!(&twice.step, &once.step);
        prop_assert_eq!(&twice.noflow, &once.noflow);
        prop_assert!(once.step.is_valid());
    }

    #[test]
    fn matching_agrees_with_brute_force(
        pattern in proptest::collection::vec(prop_oneof![
            (1i64..4).prop_map(|v| Param::Actual(Value(v))),
            proptest::sample::select(vec!["X", "Y"]).prop_map(|x| Param::Formal(x.into())),
        ], 0..4),
        target in proptest::collection::vec(1i64..4, 0..4),
    ) {
        let s = Tuple(pattern);
        let t: Vec<Value> = target.into_iter().map(Value).collect();
        let formals: Vec<String> = s.formals().into_iter().collect();
        let mut solutions = Vec::new();
        let mut gamma: BTreeMap<String, Value> = BTreeMap::new();
        // Every assignment of the formals over the generated value range.
        let n = formals.len() as u32;
        for code in 0..3usize.pow(n) {
            let mut c = code;
            for x in &formals {
                gamma.insert(x.clone(), Value(1 + (c % 3) as i64));
                c /= 3;
            }
            if s.subst(&gamma).values().as_deref() == Some(&t[..]) {
                solutions.push(gamma.clone());
            }
        }
        prop_assert!(solutions.len() <= 1);
        prop_assert_eq!(match_tuple(&s, &t), solutions.pop());
    }
}

#[test]
fn export_round_trips_bit_identically() {
    let d = Domain::binary();
    let mut autos = vec![
        lossy_fifo("a'", "a", &d),
        alternating_coordinator("a", "b", "c", &d),
    ];
    for kind in PrimitiveKind::ALL {
        let ps: Vec<Port> = match kind {
            PrimitiveKind::Merger | PrimitiveKind::Replicator => ["x", "y", "z"],
            _ => ["x", "y", "-"],
        }
        .iter()
        .filter(|p| **p != "-")
        .map(Port::new)
        .collect();
        let ca = primitive(kind, kind.keyword(), &ps, &d).unwrap();
        autos.push(encode_ca(&ca, &d).unwrap());
    }
    let lf_ac = Product::new(vec![
        std::sync::Arc::new(autos[0].clone()),
        std::sync::Arc::new(autos[1].clone()),
    ])
    .unwrap();
    autos.push(materialize(&lf_ac, &reachable(&lf_ac, 100)));
    for a in autos {
        let text = to_json(&a);
        let back = from_json(&text, ReoAlgebra::shared()).unwrap();
        assert_eq!(to_json(&back), text);
    }
}
