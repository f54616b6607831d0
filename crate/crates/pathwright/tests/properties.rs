//! Randomized invariants over the whole pipeline: trace legality, fit-flag
//! monotonicity, relabeling invariance, and parallel/serial agreement.

use std::collections::HashMap;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pathwright::corr::CorrelationMatrix;
use pathwright::dataset::{pearson_matrix, pearson_matrix_serial};
use pathwright::estimator::{fit_model, fit_model_serial, PathCoefficients};
use pathwright::model::CausalGraph;
use pathwright::stats::correlation_pvalue;
use pathwright::synth::generate_synthetic;
use pathwright::tracer::{
    enumerate_traces, reproduced_matrix, reproduced_matrix_serial, Direction, TraceClass,
};

/// Seed-driven random DAG; declaration order is a topological order, with
/// occasional covariance arcs between exogenous variables.
fn dag_from_seed(seed: u64, p: usize) -> PathCoefficients {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names: Vec<String> = (0..p).map(|i| format!("V{i}")).collect();
    let mut edges = Vec::new();
    for i in 0..p {
        for j in i + 1..p {
            if rng.gen_bool(0.5) {
                edges.push((names[i].clone(), names[j].clone()));
            }
        }
    }
    let has_parent = |j: usize| edges.iter().any(|(_, t)| *t == names[j]);
    let mut covary = Vec::new();
    for i in 0..p {
        for j in i + 1..p {
            if !has_parent(i) && !has_parent(j) && rng.gen_bool(0.25) {
                covary.push((names[i].clone(), names[j].clone()));
            }
        }
    }
    let g = CausalGraph::new(names, &edges, &covary).unwrap();
    let mut edge = HashMap::new();
    for &(from, to) in g.edges() {
        edge.insert((from, to), rng.gen_range(-0.9..0.9));
    }
    let mut cov = HashMap::new();
    for (a, b) in &covary {
        let i = g.index_of(a).unwrap();
        let j = g.index_of(b).unwrap();
        cov.insert((i.min(j), i.max(j)), rng.gen_range(-0.9..0.9));
    }
    PathCoefficients {
        graph: g,
        edge,
        covary: cov,
    }
}

fn sample_correlation(seed: u64, p: usize, n: usize) -> CorrelationMatrix {
    let names = (0..p).map(|i| format!("V{i}")).collect();
    let eye = nalgebra::DMatrix::identity(p, p);
    let base = CorrelationMatrix::new(names, eye, n).unwrap();
    let d = generate_synthetic(&base, n, seed, false).unwrap();
    pearson_matrix(&d).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_trace_is_legal(seed in any::<u64>(), p in 2usize..=6) {
        let pc = dag_from_seed(seed, p);
        let names: Vec<String> =
            (0..p).map(|i| pc.graph.name(i).to_string()).collect();
        for i in 0..p {
            for j in i + 1..p {
                for t in enumerate_traces(&pc, &names[i], &names[j]).unwrap() {
                    // contiguous walk from i to j
                    prop_assert_eq!(t.steps.first().unwrap().from, i);
                    prop_assert_eq!(t.steps.last().unwrap().to, j);
                    for w in t.steps.windows(2) {
                        prop_assert_eq!(w[0].to, w[1].from);
                    }
                    // no variable visited twice
                    let mut seen: Vec<usize> =
                        t.steps.iter().map(|s| s.from).collect();
                    seen.push(j);
                    let mut sorted = seen.clone();
                    sorted.sort_unstable();
                    sorted.dedup();
                    prop_assert_eq!(sorted.len(), seen.len());
                    // backward steps form a prefix
                    let first_fwd = t
                        .steps
                        .iter()
                        .position(|s| s.direction != Direction::Backward)
                        .unwrap_or(t.steps.len());
                    prop_assert!(t.steps[first_fwd..]
                        .iter()
                        .all(|s| s.direction != Direction::Backward));
                    // at most one covariance step
                    let covs = t
                        .steps
                        .iter()
                        .filter(|s| s.direction == Direction::Covariance)
                        .count();
                    prop_assert!(covs <= 1);
                    // class definition
                    let all_fwd = t
                        .steps
                        .iter()
                        .all(|s| s.direction == Direction::Forward);
                    let expect = match (t.steps.len(), all_fwd) {
                        (1, true) => TraceClass::Direct,
                        (_, true) => TraceClass::Indirect,
                        _ => TraceClass::Spurious,
                    };
                    prop_assert_eq!(t.class, expect);
                }
            }
        }
    }

    #[test]
    fn reproduction_is_invariant_under_relabeling(seed in any::<u64>(), p in 2usize..=5) {
        let pc = dag_from_seed(seed, p);
        let renamed: Vec<String> = (0..p).map(|i| format!("Q{}", p - i)).collect();
        let edges: Vec<(String, String)> = pc
            .graph
            .edges()
            .iter()
            .map(|&(a, b)| (renamed[a].clone(), renamed[b].clone()))
            .collect();
        let covary: Vec<(String, String)> = pc
            .covary
            .keys()
            .map(|&(a, b)| (renamed[a].clone(), renamed[b].clone()))
            .collect();
        let g2 = CausalGraph::new(renamed, &edges, &covary).unwrap();
        let pc2 = PathCoefficients {
            graph: g2,
            edge: pc.edge.clone(),
            covary: pc.covary.clone(),
        };
        let r1 = reproduced_matrix(&pc).unwrap();
        let r2 = reproduced_matrix(&pc2).unwrap();
        for i in 0..p {
            for j in 0..p {
                prop_assert!((r1.get(i, j) - r2.get(i, j)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn parallel_and_serial_paths_agree(seed in any::<u64>(), p in 2usize..=5) {
        let pc = dag_from_seed(seed, p);
        let a = reproduced_matrix(&pc).unwrap();
        let b = reproduced_matrix_serial(&pc).unwrap();
        for i in 0..p {
            for j in 0..p {
                prop_assert_eq!(a.get(i, j), b.get(i, j));
            }
        }
        let c = sample_correlation(seed, p, 30);
        let m1 = fit_model(&c, &pc.graph, 0.05).unwrap();
        let m2 = fit_model_serial(&c, &pc.graph, 0.05).unwrap();
        for (f1, f2) in m1.fits.iter().zip(m2.fits.iter()) {
            prop_assert_eq!(&f1.outcome, &f2.outcome);
            prop_assert_eq!(f1.r_squared, f2.r_squared);
            for (t1, t2) in f1.terms.iter().zip(f2.terms.iter()) {
                prop_assert_eq!(t1.beta, t2.beta);
            }
        }
    }

    #[test]
    fn pearson_serial_matches_parallel(seed in any::<u64>(), p in 2usize..=5, n in 10usize..40) {
        let names = (0..p).map(|i| format!("V{i}")).collect();
        let eye = nalgebra::DMatrix::identity(p, p);
        let base = CorrelationMatrix::new(names, eye, n).unwrap();
        let d = generate_synthetic(&base, n, seed, false).unwrap();
        let a = pearson_matrix(&d).unwrap();
        let b = pearson_matrix_serial(&d).unwrap();
        for i in 0..p {
            for j in 0..p {
                prop_assert_eq!(a.get(i, j), b.get(i, j));
                prop_assert!(a.get(i, j).abs() <= 1.0);
            }
        }
    }

    #[test]
    fn flags_are_monotone_in_threshold(seed in any::<u64>(), p in 2usize..=5) {
        let c = sample_correlation(seed, p, 30);
        let pc = dag_from_seed(seed, p);
        let m = fit_model(&c, &pc.graph, 0.05).unwrap();
        let loose = pathwright::fit_report(&m, 0.2).unwrap();
        let tight = pathwright::fit_report(&m, 0.02).unwrap();
        prop_assert!(loose.flagged.len() <= tight.flagged.len());
        for f in &loose.flagged {
            prop_assert!(tight
                .flagged
                .iter()
                .any(|g| g.first == f.first && g.second == f.second));
        }
    }

    #[test]
    fn correlation_pvalues_stay_in_range(r in -0.999f64..0.999, n in 4usize..500) {
        let p = correlation_pvalue(r, n).unwrap();
        prop_assert!((0.0..=1.0).contains(&p));
        let mirrored = correlation_pvalue(-r, n).unwrap();
        prop_assert!((p - mirrored).abs() < 1e-12);
    }
}
