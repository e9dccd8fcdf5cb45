use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use coauto::sim::{enabled_rounds_with, explore, run, Policy, SearchMode};
use coauto::{reachable, Product};
use coauto_bench::{network, DREAMS, LF_AC, LINDA, ROUTER};

fn rounds(c: &mut Criterion) {
    let dreams = network(DREAMS);
    let init = dreams.initial_states();
    let mut g = c.benchmark_group("enabled_rounds/dreams");
    for (name, mode) in [
        ("regions", SearchMode::Regions),
        ("exhaustive", SearchMode::Exhaustive),
    ] {
        g.bench_function(name, |b| {
            b.iter(|| enabled_rounds_with(&dreams, &init, mode))
        });
    }
    g.finish();
}

fn runs(c: &mut Criterion) {
    let dreams = network(DREAMS);
    c.bench_function("run/dreams/100", |b| {
        b.iter_batched(
            || dreams.initial_states(),
            |s| run(&dreams, &s, 100, Policy::Random, 1).unwrap(),
            BatchSize::SmallInput,
        )
    });
    let linda = network(LINDA);
    c.bench_function("explore/linda", |b| b.iter(|| explore(&linda, 10_000)));
}

fn products(c: &mut Criterion) {
    for (name, spec) in [("lf_ac", LF_AC), ("router", ROUTER)] {
        let net = network(spec);
        c.bench_function(&format!("product/{name}"), |b| {
            b.iter(|| {
                let p = Product::new(net.automata().to_vec()).unwrap();
                reachable(&p, 10_000)
            })
        });
    }
}

criterion_group!(benches, rounds, runs, products);
criterion_main!(benches);
