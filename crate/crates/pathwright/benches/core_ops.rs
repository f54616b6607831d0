//! Parallel vs sequential comparison for the data-parallel inner loops.
//! Run with `cargo bench` (parallel feature on) to see both sides.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nalgebra::DMatrix;

use pathwright::corr::CorrelationMatrix;
use pathwright::dataset::{pearson_matrix, pearson_matrix_serial};
use pathwright::estimator::fit_model;
use pathwright::model::CausalGraph;
use pathwright::screening::{mahalanobis_d2, mahalanobis_d2_serial};
use pathwright::synth::generate_synthetic;
use pathwright::tracer::{reproduced_matrix, reproduced_matrix_serial};

fn wide_target(p: usize) -> CorrelationMatrix {
    // AR(1)-style structure, comfortably positive definite
    let names = (0..p).map(|i| format!("V{i}")).collect();
    let r = DMatrix::from_fn(p, p, |i, j| 0.6f64.powi((i as i32 - j as i32).abs()));
    CorrelationMatrix::new(names, r, 500).unwrap()
}

fn saturated_graph(p: usize) -> CausalGraph {
    let names: Vec<String> = (0..p).map(|i| format!("V{i}")).collect();
    let mut edges = Vec::new();
    for i in 0..p {
        for j in i + 1..p {
            edges.push((names[i].clone(), names[j].clone()));
        }
    }
    CausalGraph::new(names, &edges, &[]).unwrap()
}

fn bench_pearson(c: &mut Criterion) {
    let mut group = c.benchmark_group("pearson_matrix");
    for p in [8usize, 24] {
        let target = wide_target(p);
        let d = generate_synthetic(&target, 4000, 1, false).unwrap();
        group.bench_with_input(BenchmarkId::new("parallel", p), &d, |b, d| {
            b.iter(|| pearson_matrix(d).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("serial", p), &d, |b, d| {
            b.iter(|| pearson_matrix_serial(d).unwrap())
        });
    }
    group.finish();
}

fn bench_mahalanobis(c: &mut Criterion) {
    let mut group = c.benchmark_group("mahalanobis_d2");
    let target = wide_target(12);
    let d = generate_synthetic(&target, 8000, 2, false).unwrap();
    group.bench_function("parallel", |b| b.iter(|| mahalanobis_d2(&d).unwrap()));
    group.bench_function("serial", |b| b.iter(|| mahalanobis_d2_serial(&d).unwrap()));
    group.finish();
}

fn bench_traces(c: &mut Criterion) {
    let mut group = c.benchmark_group("reproduced_matrix");
    for p in [6usize, 9] {
        let target = wide_target(p);
        let g = saturated_graph(p);
        let m = fit_model(&target, &g, 0.05).unwrap();
        let pc = m.path_coefficients();
        group.bench_with_input(BenchmarkId::new("parallel", p), &pc, |b, pc| {
            b.iter(|| reproduced_matrix(pc).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("serial", p), &pc, |b, pc| {
            b.iter(|| reproduced_matrix_serial(pc).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_pearson, bench_mahalanobis, bench_traces);
criterion_main!(benches);
