//! Sequential vs rayon execution of the brute-force searches.
//!
//! `cargo bench -p chandisc` runs both; `--no-default-features` builds the
//! parallel arm without rayon, so it then measures the fallback.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use chandisc::{
    brute_max_entangled, brute_max_single, Exec, QubitChannel, SearchConfig, SearchMode,
};

fn pair() -> (QubitChannel, QubitChannel) {
    (
        QubitChannel::extremal(0.0, 3.0).unwrap(),
        QubitChannel::extremal(0.5, 0.0).unwrap(),
    )
}

fn cfg(exec: Exec) -> SearchConfig {
    SearchConfig {
        exec,
        ..SearchConfig::default()
    }
}

fn searches(c: &mut Criterion) {
    let (c1, c2) = pair();
    let mut g = c.benchmark_group("oracle");
    g.sample_size(10);
    for exec in [Exec::Sequential, Exec::Parallel] {
        let name = format!("{exec:?}").to_lowercase();
        let cfg = cfg(exec);
        g.bench_with_input(BenchmarkId::new("single", &name), &cfg, |b, cfg| {
            b.iter(|| brute_max_single(black_box(&c1), black_box(&c2), cfg).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("restricted", &name), &cfg, |b, cfg| {
            b.iter(|| {
                brute_max_entangled(black_box(&c1), black_box(&c2), cfg, SearchMode::Restricted)
                    .unwrap()
            })
        });
        g.bench_with_input(BenchmarkId::new("full", &name), &cfg, |b, cfg| {
            b.iter(|| {
                brute_max_entangled(black_box(&c1), black_box(&c2), cfg, SearchMode::Full).unwrap()
            })
        });
    }
    g.finish();
}

criterion_group!(benches, searches);
criterion_main!(benches);
