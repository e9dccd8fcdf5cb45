//! `coauto`: compose, simulate, explore and check networks described by a
//! JSON spec.
//!
//! Exit codes: 0 on success, 1 when a check fails or a bound is hit, 2 on
//! bad input.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};

use coauto::bisim::bisimilar;
use coauto::export::{to_dot, to_json, LabelDoc};
use coauto::linda::trace_correspondence;
use coauto::locality::default_witness;
use coauto::netspec::{build_network, parse_spec, BuiltNetwork};
use coauto::reo::{ca_product_oracle, encode_ca, ReoAlgebra};
use coauto::sim::{explore, run, Network, Policy, RoundResult};
use coauto::{
    check_locality, materialize, reachable, Automaton, ExplicitAutomaton, Product, Scope, StateId,
};

#[derive(Parser)]
#[command(
    name = "coauto",
    version,
    about = "Behavioural automata networks: compose, run, explore, check"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Network spec (JSON).
    spec: PathBuf,
    /// Data domain, overriding the spec's.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    domain: Option<Vec<i64>>,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Flatten the network into one automaton and export its reachable part.
    Compose {
        #[command(flatten)]
        common: Common,
        /// Accepted for compatibility; the product is always flat.
        #[arg(long)]
        flatten: bool,
        #[arg(long, default_value_t = 10_000)]
        bound: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Simulate round by round, printing one JSON record per round.
    Run {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 10)]
        rounds: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// random, lex or maximal
        #[arg(long, default_value = "random")]
        policy: Policy,
    },
    /// Explore the global state space round by round.
    Explore {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 10_000)]
        bound: usize,
    },
    /// Locality, constraint-automata product and Linda trace checks.
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, default_value_t = 10_000)]
        bound: usize,
    },
    /// Same as `compose --format dot`.
    ExportDot {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 10_000)]
        bound: usize,
    },
}

enum Failure {
    /// A check failed or a bound was hit; output may be partial.
    Check(String),
    Input(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Input(_) => 2,
        }
    }
}

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn load(common: &Common) -> Result<BuiltNetwork, Failure> {
    let text = fs::read_to_string(&common.spec)
        .map_err(|e| Failure::Input(format!("{}: {e}", common.spec.display())))?;
    let mut spec = parse_spec(&text).map_err(input)?;
    if let Some(d) = &common.domain {
        spec.domain = d.clone();
    }
    build_network(&spec).map_err(input)
}

fn emit(common: &Common, text: &str) -> Result<(), Failure> {
    match &common.out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
        }
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(input)?;
            out.flush().map_err(input)
        }
    }
}

fn flatten(net: &Network, bound: usize) -> (ExplicitAutomaton, bool) {
    if net.is_empty() {
        let mut b = ExplicitAutomaton::builder(Scope::empty(), ReoAlgebra::shared());
        let q = b.state("()", coauto::ConcurrencyPredicate::Never);
        b.initial(q);
        return (b.build(), false);
    }
    let p = Product::new(net.automata().to_vec()).expect("network shares one algebra");
    let graph = reachable(&p, bound);
    (materialize(&p, &graph), graph.truncated)
}

fn compose(common: &Common, bound: usize, format: Format) -> Result<(), Failure> {
    let built = load(common)?;
    let (a, truncated) = flatten(&built.network, bound);
    let mut text = match format {
        Format::Json => to_json(&a),
        Format::Dot => to_dot(&a),
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    emit(common, &text)?;
    if truncated {
        return Err(Failure::Check(format!(
            "bound exceeded: output limited to {bound} states"
        )));
    }
    Ok(())
}

fn states_json(net: &Network, states: &[StateId]) -> Json {
    let m: serde_json::Map<String, Json> = net
        .names()
        .iter()
        .cloned()
        .zip(net.state_names(states).into_iter().map(Json::String))
        .collect();
    Json::Object(m)
}

fn names(net: &Network, ids: impl IntoIterator<Item = usize>) -> Vec<String> {
    ids.into_iter().map(|i| net.names()[i].clone()).collect()
}

fn round_json(net: &Network, n: usize, r: &RoundResult, states: &[StateId]) -> Json {
    json!({
        "round": n,
        "participants": names(net, r.participants.iter().copied()),
        "label": LabelDoc::from(&r.label),
        "states": states_json(net, states),
        "consulted": names(net, r.consulted.iter().copied()),
    })
}

fn run_cmd(common: &Common, rounds: usize, seed: u64, policy: Policy) -> Result<(), Failure> {
    let built = load(common)?;
    let net = &built.network;
    let init = net.initial_states();
    let trace = run(net, &init, rounds, policy, seed).map_err(input)?;
    let mut lines = vec![json!({
        "automata": net.names(),
        "policy": policy.to_string(),
        "seed": seed,
        "rounds": rounds,
        "states": states_json(net, &init),
    })];
    for rec in &trace.records {
        lines.push(round_json(net, rec.round, &rec.result, &rec.states));
    }
    if trace.deadlock {
        lines.push(json!({"deadlock": true, "round": trace.records.len()}));
    }
    let text: String = lines.iter().map(|l| format!("{l}\n")).collect();
    emit(common, &text)
}

fn explore_cmd(common: &Common, bound: usize) -> Result<(), Failure> {
    let built = load(common)?;
    let net = &built.network;
    let g = explore(net, bound);
    let doc = json!({
        "automata": net.names(),
        "states": g.states.iter().map(|s| states_json(net, s)).collect::<Vec<_>>(),
        "initial": g.initial,
        "transitions": g.edges.iter().map(|(s, r, t)| json!({
            "src": s,
            "dst": t,
            "participants": names(net, r.participants.iter().copied()),
            "label": r.label.to_string(),
        })).collect::<Vec<_>>(),
        "truncated": g.truncated,
    });
    emit(common, &format!("{doc:#}\n"))?;
    if g.truncated {
        return Err(Failure::Check(format!(
            "bound exceeded: explored {bound} states"
        )));
    }
    Ok(())
}

fn check_cmd(common: &Common, depth: usize, bound: usize) -> Result<(), Failure> {
    let built = load(common)?;
    let net = &built.network;
    let mut report = String::new();
    let mut failures = Vec::new();
    let witness = default_witness();
    for (i, name) in net.names().iter().enumerate() {
        let a = net.automaton(i);
        if *a.ports() == Scope::Universe {
            report.push_str(&format!("locality {name}: n/a (shares every port)\n"));
            continue;
        }
        match check_locality(a.as_ref(), &witness, &built.domain, bound) {
            Ok(true) => report.push_str(&format!("locality {name}: ok\n")),
            Ok(false) => {
                report.push_str(&format!("locality {name}: FAIL\n"));
                failures.push(format!("locality of {name}"));
            }
            Err(e) => return Err(input(e)),
        }
    }
    for (x, (i, a1)) in built.primitives.iter().enumerate() {
        for (j, a2) in &built.primitives[x + 1..] {
            if a1.ports.is_disjoint(&a2.ports) {
                continue;
            }
            let pair = format!("{}+{}", net.names()[*i], net.names()[*j]);
            let oracle = encode_ca(&ca_product_oracle(a1, a2), &built.domain).map_err(input)?;
            let factors: Vec<Automaton> = vec![
                Arc::new(encode_ca(a1, &built.domain).map_err(input)?),
                Arc::new(encode_ca(a2, &built.domain).map_err(input)?),
            ];
            let composed = Product::new(factors).map_err(input)?;
            match bisimilar(&oracle, &composed, bound) {
                Some(true) => report.push_str(&format!("ca-product {pair}: ok\n")),
                Some(false) => {
                    report.push_str(&format!("ca-product {pair}: FAIL\n"));
                    failures.push(format!("ca-product of {pair}"));
                }
                None => {
                    report.push_str(&format!("ca-product {pair}: FAIL (bound exceeded)\n"));
                    failures.push(format!("ca-product of {pair}"));
                }
            }
        }
    }
    if let Some(term) = &built.linda {
        let r = trace_correspondence(term, depth).map_err(input)?;
        let status = if r.holds() { "ok" } else { "FAIL" };
        report.push_str(&format!(
            "linda traces (depth {depth}): {status}, {} matched, {} missing, {} extra, {} maximal\n",
            r.matched,
            r.missing.len(),
            r.extra.len(),
            r.classes
        ));
        if !r.holds() {
            failures.push("linda trace correspondence".into());
        }
    }
    emit(common, &report)?;
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(format!("failed: {}", failures.join(", "))))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Compose {
            common,
            bound,
            format,
            ..
        } => compose(common, *bound, *format),
        Command::Run {
            common,
            rounds,
            seed,
            policy,
        } => run_cmd(common, *rounds, *seed, *policy),
        Command::Explore { common, bound } => explore_cmd(common, *bound),
        Command::Check {
            common,
            depth,
            bound,
        } => check_cmd(common, *depth, *bound),
        Command::ExportDot { common, bound } => compose(common, *bound, Format::Dot),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Failure::Check(msg) | Failure::Input(msg)) = &f;
            eprintln!("coauto: {msg}");
            ExitCode::from(f.code())
        }
    }
}
