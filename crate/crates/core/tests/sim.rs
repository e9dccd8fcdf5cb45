use std::collections::BTreeSet;

use coauto::netspec::{build_network, parse_spec, BuiltNetwork};
use coauto::product::Product;
use coauto::sim::{
    enabled_rounds, enabled_rounds_with, explore, fire_round, run, Network, Policy, RoundResult,
    SearchMode, SimError,
};
use coauto::{ports, BehaviouralAutomaton, PortSet, StateId};

fn load(text: &str) -> BuiltNetwork {
    build_network(&parse_spec(text).unwrap()).unwrap()
}

fn lf_ac() -> Network {
    load(include_str!("../../../specs/lf_ac.json")).network
}

fn state(net: &Network, names: &[&str]) -> Vec<StateId> {
    let g = explore(net, 1000);
    g.states
        .into_iter()
        .find(|s| net.state_names(s) == names)
        .unwrap_or_else(|| panic!("no reachable state {names:?}"))
}

fn key(r: &RoundResult) -> (BTreeSet<usize>, String, PortSet, Vec<(usize, StateId)>) {
    (
        r.participants.clone(),
        r.label.head.to_string(),
        r.label.step.flow.clone(),
        r.successors.iter().map(|(&i, &q)| (i, q)).collect(),
    )
}

#[test]
fn regions_agree_with_the_exhaustive_search() {
    for text in [
        include_str!("../../../specs/lf_ac.json"),
        include_str!("../../../specs/lossy_alternator.json"),
        include_str!("../../../specs/context_lossy_fifo.json"),
        include_str!("../../../specs/router.json"),
        include_str!("../../../specs/dreams.json"),
    ] {
        let net = load(text).network;
        assert!(net.all_certified());
        let g = explore(&net, 400);
        for s in &g.states {
            let a: Vec<_> = enabled_rounds_with(&net, s, SearchMode::Regions)
                .iter()
                .map(key)
                .collect();
            let b: Vec<_> = enabled_rounds_with(&net, s, SearchMode::Exhaustive)
                .iter()
                .map(key)
                .collect();
            assert_eq!(a, b, "at {:?}", net.state_names(s));
        }
    }
}

#[test]
fn two_automaton_rounds_are_product_transitions() {
    let net = lf_ac();
    let p = Product::new(net.automata().to_vec()).unwrap();
    for s in explore(&net, 100).states {
        let mut rounds: Vec<_> = enabled_rounds(&net, &s)
            .into_iter()
            .map(|r| {
                let mut next = s.clone();
                for (&i, &q) in &r.successors {
                    next[i] = q;
                }
                (r.label.step.flow.clone(), r.label.step.data.clone(), next)
            })
            .collect();
        let mut trans: Vec<_> = p
            .enabled(p.state_of(&s))
            .into_iter()
            .map(|t| {
                (
                    t.label.step.flow.clone(),
                    t.label.step.data.clone(),
                    p.components(t.target),
                )
            })
            .collect();
        rounds.sort();
        trans.sort();
        assert_eq!(rounds, trans);
    }
}

#[test]
fn rounds_from_a_full_buffer() {
    let net = lf_ac();
    let s = state(&net, &["full(0)", "q0"]);
    let rounds = enabled_rounds(&net, &s);
    let mut heads: Vec<String> = rounds.iter().map(|r| r.label.head.to_string()).collect();
    heads.sort();
    assert_eq!(heads, ["s1(0,0)·s4(0)", "s1(1,0)·s4(0)", "s3(0)", "s3(1)"]);
    for r in &rounds {
        let expect: BTreeSet<usize> = if r.label.head.to_string().starts_with("s3") {
            [0].into()
        } else {
            [0, 1].into()
        };
        assert_eq!(r.participants, expect);
    }
}

#[test]
fn firing_moves_only_participants() {
    let net = lf_ac();
    let s = net.initial_states();
    let fill = enabled_rounds(&net, &s)
        .into_iter()
        .find(|r| r.label.head.to_string() == "s3(1)")
        .unwrap();
    let s2 = fire_round(&net, &s, &fill).unwrap();
    assert_eq!(net.state_names(&s2), ["full(1)", "q0"]);
    assert_eq!(fire_round(&net, &s2, &RoundResult::idle()).unwrap(), s2);
    let joint = enabled_rounds(&net, &s2)
        .into_iter()
        .find(|r| r.label.head.to_string() == "s1(0,1)·s4(1)")
        .unwrap();
    let s3 = fire_round(&net, &s2, &joint).unwrap();
    assert_eq!(net.state_names(&s3), ["empty", "q1(0)"]);
    assert_eq!(fire_round(&net, &s3, &joint), Err(SimError::StaleRound));
}

#[test]
fn single_automaton_rounds_are_its_transitions() {
    let built = load(r#"{"reo": [{"kind": "sync", "name": "s", "ports": ["a", "b"]}]}"#);
    let net = built.network;
    let s = net.initial_states();
    let rounds = enabled_rounds(&net, &s);
    let ts = net.automaton(0).enabled(s[0]);
    assert_eq!(rounds.len(), ts.len());
    assert_eq!(rounds.len(), 2);
}

#[test]
fn dreams_rounds_only_consult_neighbours() {
    let net = load(include_str!("../../../specs/dreams.json")).network;
    let idx = |n: &str| net.index_of(n).unwrap();
    let ac_r: BTreeSet<usize> = [idx("AC"), idx("r")].into();
    let allowed: BTreeSet<usize> = [idx("AC"), idx("r"), idx("LF"), idx("c2_out")].into();
    let trace = run(&net, &net.initial_states(), 1000, Policy::Random, 11).unwrap();
    assert_eq!(trace.records.len(), 1000);
    let mut seen = 0;
    for rec in &trace.records {
        let r = &rec.result;
        let mut near = r.participants.clone();
        for &i in &r.participants {
            near.extend(net.neighbours(i).iter().copied());
        }
        assert!(r.consulted.is_subset(&near));
        assert!(r.participants.is_subset(&r.consulted));
        if r.participants == ac_r {
            seen += 1;
            assert!(r.consulted.is_subset(&allowed), "{:?}", r.consulted);
        }
    }
    assert!(seen > 0);
}

#[test]
fn runs_are_deterministic() {
    let net = load(include_str!("../../../specs/lossy_alternator.json")).network;
    let s = net.initial_states();
    for policy in [Policy::Random, Policy::Lex, Policy::Maximal] {
        let a = run(&net, &s, 50, policy, 3).unwrap();
        let b = run(&net, &s, 50, policy, 3).unwrap();
        assert_eq!(a, b);
    }
    assert!(run(&net, &s, 0, Policy::Random, 3)
        .unwrap()
        .records
        .is_empty());
    let maximal = run(&net, &s, 1, Policy::Maximal, 0).unwrap();
    let most = enabled_rounds(&net, &s)
        .iter()
        .map(|r| r.participants.len())
        .max()
        .unwrap();
    assert_eq!(maximal.records[0].result.participants.len(), most);
}

#[test]
fn deadlock_is_reported() {
    let net = load(
        r#"{"components": [{"kind": "writer", "name": "w", "port": "a", "values": [1]}],
                     "reo": [{"kind": "sync", "name": "s", "ports": ["a", "b"]}]}"#,
    )
    .network;
    let t = run(&net, &net.initial_states(), 5, Policy::Lex, 0).unwrap();
    assert_eq!(t.records.len(), 1);
    assert!(t.deadlock);
}

#[test]
fn delivery_alternates_between_sources() {
    let net = load(include_str!("../../../specs/lossy_alternator.json")).network;
    let ac = net.index_of("AC").unwrap();
    let t = run(&net, &net.initial_states(), 200, Policy::Random, 5).unwrap();
    let mut expect_s1 = true;
    for rec in &t.records {
        let h = rec.result.label.head.to_string();
        if rec.result.participants.contains(&ac) {
            assert_eq!(h.contains("s1("), expect_s1, "{h}");
            expect_s1 = !expect_s1;
        }
    }
}

#[test]
fn context_lossy_never_loses_into_an_empty_buffer() {
    let net = load(include_str!("../../../specs/context_lossy_fifo.json")).network;
    let f = net.index_of("F").unwrap();
    let g = explore(&net, 1000);
    assert!(!g.truncated);
    let only_a = ports(["a"]);
    let (mut empty, mut full) = (0, 0);
    for (s, r, _) in &g.edges {
        if r.label.step.flow == only_a {
            if net.state_names(&g.states[*s])[f] == "empty" {
                empty += 1;
            } else {
                full += 1;
            }
        }
    }
    assert_eq!(empty, 0);
    assert!(full > 0);
}

#[test]
fn router_flows_one_way_at_a_time() {
    let net = load(include_str!("../../../specs/router.json")).network;
    let g = explore(&net, 50);
    assert_eq!(g.states.len(), 1);
    let flows: BTreeSet<PortSet> = g
        .edges
        .iter()
        .map(|(_, r, _)| r.label.step.flow.clone())
        .collect();
    let expect: BTreeSet<PortSet> = [
        ports(["a", "b", "c", "d", "e", "f", "h", "j"]),
        ports(["a", "b", "c", "d", "f", "g", "i", "k"]),
    ]
    .into();
    assert_eq!(flows, expect);
}

#[test]
fn linda_networks_explore() {
    let one = load(r#"{"linda": {"processes": [{"id": "p", "source": "out(1).end"}]}}"#).network;
    assert!(!one.all_certified());
    assert_eq!(explore(&one, 10).states.len(), 2);
    let end = load(r#"{"linda": {"processes": [{"id": "p", "source": "end"}]}}"#).network;
    assert_eq!(explore(&end, 10).states.len(), 1);
}
