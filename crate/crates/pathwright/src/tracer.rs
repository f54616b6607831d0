//! Wright trace enumeration: every legitimate trace between two variables,
//! its direct/indirect/spurious class, and the reproduced correlations the
//! traces sum to.

use nalgebra::DMatrix;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::corr::CorrelationMatrix;
use crate::error::{Error, Result};
use crate::estimator::PathCoefficients;

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, serde::Serialize, serde::Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
    Covariance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum TraceClass {
    Direct,
    Indirect,
    Spurious,
}

impl std::fmt::Display for TraceClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TraceClass::Direct => "D",
            TraceClass::Indirect => "I",
            TraceClass::Spurious => "S",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub from: usize,
    pub to: usize,
    pub direction: Direction,
}

/// One legitimate walk between a variable pair. Backward steps, if any,
/// form a prefix; at most one covariance step sits at the turning point.
#[derive(Debug, Clone)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
    pub class: TraceClass,
    pub product: f64,
}

/// All traces between one pair and the reproduced correlation they sum to.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub first: usize,
    pub second: usize,
    pub traces: Vec<Trace>,
    pub reproduced: f64,
}

fn classify(steps: &[TraceStep]) -> TraceClass {
    let all_forward = steps.iter().all(|s| s.direction == Direction::Forward);
    match (steps.len(), all_forward) {
        (1, true) => TraceClass::Direct,
        (_, true) => TraceClass::Indirect,
        _ => TraceClass::Spurious,
    }
}

fn step_product(pc: &PathCoefficients, step: &TraceStep) -> f64 {
    match step.direction {
        Direction::Forward => pc.edge_coef(step.from, step.to),
        Direction::Backward => pc.edge_coef(step.to, step.from),
        Direction::Covariance => pc.covary_coef(step.from, step.to),
    }
}

/// Exhaustive depth-first enumeration of the traces between `i` and `j`.
///
/// The walk runs in two phases: while no forward step has been taken it may
/// keep stepping backward (effect to cause); a single covariance arc or the
/// first forward step flips it to forward-only. A trace consisting solely of
/// backward steps is the mirror image of a causal path and is normalized to
/// its forward form. Output order is lexicographic by step sequence.
pub fn enumerate_traces(pc: &PathCoefficients, i: &str, j: &str) -> Result<Vec<Trace>> {
    let g = &pc.graph;
    let (start, target) = (g.index_of(i)?, g.index_of(j)?);
    if start == target {
        return Err(Error::InvalidArgument(format!(
            "trace endpoints must differ, got '{i}' twice"
        )));
    }
    let mut found: Vec<Vec<TraceStep>> = Vec::new();
    let mut visited = vec![false; g.p()];
    visited[start] = true;
    let mut steps = Vec::new();
    walk(
        g,
        start,
        target,
        true,
        false,
        &mut visited,
        &mut steps,
        &mut found,
    );
    let mut traces: Vec<Trace> = found
        .into_iter()
        .map(|steps| {
            let steps = normalize(steps);
            let product = steps.iter().map(|s| step_product(pc, s)).product();
            let class = classify(&steps);
            Trace {
                steps,
                class,
                product,
            }
        })
        .collect();
    traces.sort_by_key(trace_key);
    Ok(traces)
}

fn trace_key(t: &Trace) -> Vec<(usize, usize, u8)> {
    t.steps
        .iter()
        .map(|s| {
            (
                s.from,
                s.to,
                match s.direction {
                    Direction::Forward => 0,
                    Direction::Backward => 1,
                    Direction::Covariance => 2,
                },
            )
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn walk(
    g: &crate::model::CausalGraph,
    cur: usize,
    target: usize,
    backward_allowed: bool,
    covary_used: bool,
    visited: &mut Vec<bool>,
    steps: &mut Vec<TraceStep>,
    found: &mut Vec<Vec<TraceStep>>,
) {
    if cur == target && !steps.is_empty() {
        found.push(steps.clone());
        return;
    }
    if backward_allowed {
        for parent in g.parents(cur) {
            if !visited[parent] {
                visited[parent] = true;
                steps.push(TraceStep {
                    from: cur,
                    to: parent,
                    direction: Direction::Backward,
                });
                walk(g, parent, target, true, covary_used, visited, steps, found);
                steps.pop();
                visited[parent] = false;
            }
        }
        if !covary_used {
            for &(a, b) in g.covary() {
                let other = if a == cur {
                    Some(b)
                } else if b == cur {
                    Some(a)
                } else {
                    None
                };
                if let Some(o) = other {
                    if !visited[o] {
                        visited[o] = true;
                        steps.push(TraceStep {
                            from: cur,
                            to: o,
                            direction: Direction::Covariance,
                        });
                        walk(g, o, target, false, true, visited, steps, found);
                        steps.pop();
                        visited[o] = false;
                    }
                }
            }
        }
    }
    for child in g.children(cur) {
        if !visited[child] {
            visited[child] = true;
            steps.push(TraceStep {
                from: cur,
                to: child,
                direction: Direction::Forward,
            });
            walk(g, child, target, false, covary_used, visited, steps, found);
            steps.pop();
            visited[child] = false;
        }
    }
}

/// A walk made entirely of backward steps is a causal path seen from the
/// effect end; rewrite it cause-to-effect so classification sees it forward.
fn normalize(steps: Vec<TraceStep>) -> Vec<TraceStep> {
    if steps.iter().all(|s| s.direction == Direction::Backward) {
        steps
            .into_iter()
            .rev()
            .map(|s| TraceStep {
                from: s.to,
                to: s.from,
                direction: Direction::Forward,
            })
            .collect()
    } else {
        steps
    }
}

/// Reproduced correlation for one pair: the sum of its trace products.
pub fn reproduced_correlation(pc: &PathCoefficients, i: &str, j: &str) -> Result<Decomposition> {
    let traces = enumerate_traces(pc, i, j)?;
    let reproduced = traces.iter().map(|t| t.product).sum();
    Ok(Decomposition {
        first: pc.graph.index_of(i)?,
        second: pc.graph.index_of(j)?,
        traces,
        reproduced,
    })
}

fn pair_list(p: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity(p * (p - 1) / 2);
    for i in 0..p {
        for j in i + 1..p {
            pairs.push((i, j));
        }
    }
    pairs
}

fn matrix_from_pairs(
    pc: &PathCoefficients,
    entries: Vec<((usize, usize), f64)>,
) -> Result<CorrelationMatrix> {
    let p = pc.graph.p();
    let mut r = DMatrix::identity(p, p);
    for ((i, j), v) in entries {
        r[(i, j)] = v;
        r[(j, i)] = v;
    }
    // reproduced matrices of poorly fitting models may be indefinite; keep
    // them as plain matrices rather than validated correlation matrices
    Ok(CorrelationMatrix {
        names: pc.graph.variables().to_vec(),
        r,
        n: 0,
        psd_warning: None,
    })
}

/// Model-implied correlation matrix by exhaustive trace enumeration.
pub fn reproduced_matrix(pc: &PathCoefficients) -> Result<CorrelationMatrix> {
    let pairs = pair_list(pc.graph.p());
    #[cfg(feature = "parallel")]
    let entries: Vec<((usize, usize), f64)> = pairs
        .into_par_iter()
        .map(|(i, j)| {
            let d = reproduced_correlation(pc, pc.graph.name(i), pc.graph.name(j))?;
            Ok(((i, j), d.reproduced))
        })
        .collect::<Result<_>>()?;
    #[cfg(not(feature = "parallel"))]
    let entries: Vec<((usize, usize), f64)> = pairs
        .into_iter()
        .map(|(i, j)| {
            let d = reproduced_correlation(pc, pc.graph.name(i), pc.graph.name(j))?;
            Ok(((i, j), d.reproduced))
        })
        .collect::<Result<_>>()?;
    matrix_from_pairs(pc, entries)
}

/// Sequential counterpart of [`reproduced_matrix`]; bench reference.
pub fn reproduced_matrix_serial(pc: &PathCoefficients) -> Result<CorrelationMatrix> {
    let entries: Vec<((usize, usize), f64)> = pair_list(pc.graph.p())
        .into_iter()
        .map(|(i, j)| {
            let d = reproduced_correlation(pc, pc.graph.name(i), pc.graph.name(j))?;
            Ok(((i, j), d.reproduced))
        })
        .collect::<Result<_>>()?;
    matrix_from_pairs(pc, entries)
}

/// Independent route to the implied correlations: the recursive path rule
/// `r_ij = sum over parents k of j of beta_jk * r_ik`, evaluated in
/// topological order with exogenous correlations seeded from covary arcs.
pub fn implied_oracle(pc: &PathCoefficients) -> Result<CorrelationMatrix> {
    let g = &pc.graph;
    let p = g.p();
    let order = g.topological_all();
    let mut r = DMatrix::identity(p, p);
    for (pos, &b) in order.iter().enumerate() {
        for &a in &order[..pos] {
            let value = if g.is_exogenous(b) {
                // both exogenous here: covary arc or independence
                pc.covary.get(&(a.min(b), a.max(b))).copied().unwrap_or(0.0)
            } else {
                g.parents(b)
                    .into_iter()
                    .map(|k| pc.edge_coef(k, b) * r[(a, k)])
                    .sum()
            };
            r[(a, b)] = value;
            r[(b, a)] = value;
        }
    }
    Ok(CorrelationMatrix {
        names: g.variables().to_vec(),
        r,
        n: 0,
        psd_warning: None,
    })
}
