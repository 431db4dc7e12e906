use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use covdepth::codes;
use covdepth::exact::{alpha_counts, beta_counts, minimal_recovery_sets, tilde_expectations, Options, Target};
use covdepth::exec::Exec;
use covdepth::montecarlo::{simulate, SimConfig};

fn modes() -> [(&'static str, Exec); 2] {
    [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)]
}

fn options(exec: Exec) -> Options {
    Options {
        exec,
        ..Options::default()
    }
}

fn alpha(c: &mut Criterion) {
    let mut group = c.benchmark_group("alpha_counts");
    group.sample_size(10);
    let g = codes::simplex(2, 4).unwrap();
    for (name, exec) in modes() {
        let opts = options(exec);
        group.bench_with_input(BenchmarkId::new(name, "simplex(2,4)"), &g, |b, g| {
            b.iter(|| alpha_counts(black_box(g), &Target::Basis(0), &opts).unwrap())
        });
    }
    group.finish();
}

fn tilde(c: &mut Criterion) {
    let mut group = c.benchmark_group("tilde_expectations");
    group.sample_size(10);
    let h = codes::hamming(2, 4).unwrap();
    for (name, exec) in modes() {
        let opts = options(exec);
        group.bench_with_input(BenchmarkId::new(name, "hamming[15,11]"), &h, |b, g| {
            b.iter(|| tilde_expectations(black_box(g), &opts).unwrap())
        });
    }
    group.finish();
}

fn beta(c: &mut Criterion) {
    let mut group = c.benchmark_group("beta_counts");
    group.sample_size(10);
    let g = codes::hamming(2, 4).unwrap();
    for (name, exec) in modes() {
        let opts = options(exec);
        group.bench_with_input(BenchmarkId::new(name, "hamming[15,11]"), &g, |b, g| {
            b.iter(|| {
                beta_counts(
                    minimal_recovery_sets(black_box(g), &Target::Basis(0), &opts).unwrap(),
                    &opts,
                )
                .unwrap()
            })
        });
    }
    group.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let mut group = c.benchmark_group("simulate");
    group.sample_size(10);
    let g = codes::hamming(2, 3).unwrap();
    let cfg = SimConfig::new(200_000, 1).with_streams(32);
    for (name, exec) in modes() {
        group.bench_with_input(BenchmarkId::new(name, "hamming[7,4]"), &g, |b, g| {
            b.iter(|| simulate(black_box(g), &Target::Basis(0), &cfg, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, alpha, tilde, beta, monte_carlo);
criterion_main!(benches);
