use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ipstar_core::constructions::freesemigroup_counterexample;
use ipstar_core::largeness::{certify_ipr_star_window, difference_set_exec, DifferenceSign};
use ipstar_core::sieve::PrimeSieve;
use ipstar_core::{Element, Exec, GroundStructure, SearchConfig, SetSpec};

fn modes() -> Vec<Exec> {
    if Exec::Parallel.is_parallel() {
        vec![Exec::Sequential, Exec::Parallel]
    } else {
        vec![Exec::Sequential]
    }
}

fn ipr_window(c: &mut Criterion) {
    let a = SetSpec::multiples(5).unwrap();
    let window = GroundStructure::Integers.enumerate(21);
    let mut g = c.benchmark_group("certify_ipr_star_window");
    for exec in modes() {
        let cfg = SearchConfig::with_exec(exec);
        g.bench_with_input(BenchmarkId::new(format!("{exec:?}"), "5Z r=5"), &cfg, |b, cfg| {
            b.iter(|| certify_ipr_star_window(black_box(&a), 5, &window, cfg).unwrap())
        });
    }
    g.finish();
}

fn prime_differences(c: &mut Criterion) {
    let primes = SetSpec::primes(Arc::new(PrimeSieve::compute(200_000)));
    let mut g = c.benchmark_group("prime_difference_table");
    g.sample_size(10);
    for exec in modes() {
        g.bench_function(BenchmarkId::new(format!("{exec:?}"), "bound 20000"), |b| {
            b.iter(|| {
                let d = difference_set_exec(black_box(&primes), 20_000, DifferenceSign::Signed, exec).unwrap();
                black_box(d.contains(&Element::int(19_998)).unwrap())
            })
        });
    }
    g.finish();
}

fn free_semigroup(c: &mut Criterion) {
    let mut g = c.benchmark_group("freesemigroup_counterexample");
    g.sample_size(10);
    for exec in modes() {
        let cfg = SearchConfig::with_exec(exec);
        g.bench_with_input(BenchmarkId::new(format!("{exec:?}"), "L=13"), &cfg, |b, cfg| {
            b.iter(|| freesemigroup_counterexample(13, &[], 0, cfg).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, ipr_window, prime_differences, free_semigroup);
criterion_main!(benches);
