use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use streamchroma_bench::{bipartite, planted, sparse_vector};
use streamchroma_core::field::decode_sparse;
use streamchroma_core::stream::run_stream;
use streamchroma_core::{run_pipeline, RunConfig, VandermondeSketch};

fn decode(c: &mut Criterion) {
    let mut group = c.benchmark_group("decode_sparse");
    for k in [4usize, 16, 64] {
        let (f, x) = sparse_vector(10_000, k, 7);
        let sketch = VandermondeSketch::encode(f, k, &x);
        group.bench_with_input(BenchmarkId::from_parameter(k), &sketch, |b, s| {
            b.iter(|| decode_sparse(black_box(s)).unwrap())
        });
    }
    group.finish();
}

fn stream_pass(c: &mut Criterion) {
    let g = planted(32, 3);
    let edges: Vec<(usize, usize)> = g.edges().collect();
    c.bench_function("stream_pass_delta32", |b| {
        b.iter(|| run_stream(g.n(), g.delta(), RunConfig::desk(7), edges.iter().copied(), None).unwrap())
    });
}

fn pipeline(c: &mut Criterion) {
    let g = planted(32, 3);
    let summary = run_stream(g.n(), g.delta(), RunConfig::desk(7), g.edges(), None).unwrap();
    c.bench_function("pipeline_delta32", |b| b.iter(|| run_pipeline(black_box(&summary), &g)));
}

fn matching(c: &mut Criterion) {
    let b500 = bipartite(500, 20, 1);
    c.bench_function("max_matching_500", |b| b.iter(|| black_box(&b500).max_matching()));
}

criterion_group!(benches, decode, stream_pass, pipeline, matching);
criterion_main!(benches);
