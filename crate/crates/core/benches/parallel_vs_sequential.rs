use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use subdiv_core::rational::rat;
use subdiv_core::refine::{refine_k_with, ControlPolygon, DEFAULT_VALUE_CAP};
use subdiv_core::scheme::catalog_get;
use subdiv_core::search::{scan, ParamRange, SearchSpec};
use subdiv_core::Execution;

const STRATEGIES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn bench_scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("scan_width6");
    group.sample_size(10);
    let range = ParamRange::new(rat(-1, 2), rat(1, 2), rat(1, 25)).unwrap();
    let spec = SearchSpec::new(6, vec![range.clone(), range], true).unwrap();
    for (name, exec) in STRATEGIES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| scan(black_box(&spec), exec).unwrap())
        });
    }
    group.finish();
}

fn bench_refine(c: &mut Criterion) {
    let mut group = c.benchmark_group("refine_scheme_a");
    group.sample_size(10);
    let mask = catalog_get("a").unwrap().mask;
    for (name, exec) in STRATEGIES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| refine_k_with(black_box(&ControlPolygon::delta()), &mask, 12, DEFAULT_VALUE_CAP, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_scan, bench_refine);
criterion_main!(benches);
