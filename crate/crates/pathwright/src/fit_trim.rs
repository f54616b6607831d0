//! Model fit against observed correlations and backward trimming of
//! non-significant paths.

use std::collections::HashMap;
use std::path::Path;

use crate::corr::CorrelationMatrix;
use crate::error::{Error, Result};
use crate::estimator::{fit_model, FittedModel, PathCoefficients};
use crate::model::CausalGraph;
use crate::tracer::reproduced_matrix;

/// Cellwise comparison of reproduced and observed correlations against a
/// difference threshold (0.05 in the usual convention).
#[derive(Debug, Clone)]
pub struct FitReport {
    pub observed: CorrelationMatrix,
    pub reproduced: CorrelationMatrix,
    pub threshold: f64,
    pub flagged: Vec<FlaggedCell>,
    pub max_diff: f64,
    pub consistent: bool,
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct FlaggedCell {
    pub first: String,
    pub second: String,
    pub observed: f64,
    pub reproduced: f64,
    pub diff: f64,
}

#[derive(Debug, Clone)]
pub struct RemovedEdge {
    pub from: String,
    pub to: String,
    pub p: f64,
}

#[derive(Debug, Clone)]
pub struct TrimIteration {
    pub model: FittedModel,
    pub report: FitReport,
    pub removed: Vec<RemovedEdge>,
}

/// Log of alternating fit / trim passes; the final iteration removes nothing.
#[derive(Debug, Clone)]
pub struct TrimLog {
    pub iterations: Vec<TrimIteration>,
}

impl TrimLog {
    pub fn final_iteration(&self) -> &TrimIteration {
        self.iterations.last().expect("at least one iteration")
    }
}

fn fit_report_from(
    observed: &CorrelationMatrix,
    pc: &PathCoefficients,
    threshold: f64,
) -> Result<FitReport> {
    if threshold <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "fit threshold must be positive, got {threshold}"
        )));
    }
    let reproduced = reproduced_matrix(pc)?;
    let names = pc.graph.variables();
    let obs_idx: Vec<usize> = names
        .iter()
        .map(|n| observed.index_of(n))
        .collect::<Result<_>>()?;
    let mut flagged = Vec::new();
    let mut max_diff: f64 = 0.0;
    for i in 0..names.len() {
        for j in i + 1..names.len() {
            let o = observed.get(obs_idx[i], obs_idx[j]);
            let r = reproduced.get(i, j);
            let diff = (o - r).abs();
            max_diff = max_diff.max(diff);
            if diff > threshold {
                flagged.push(FlaggedCell {
                    first: names[i].clone(),
                    second: names[j].clone(),
                    observed: o,
                    reproduced: r,
                    diff,
                });
            }
        }
    }
    let consistent = flagged.is_empty();
    Ok(FitReport {
        observed: observed.clone(),
        reproduced,
        threshold,
        flagged,
        max_diff,
        consistent,
    })
}

/// Compares the model's reproduced correlations against the observed matrix
/// it was fitted from.
pub fn fit_report(m: &FittedModel, threshold: f64) -> Result<FitReport> {
    fit_report_from(&m.correlation, &m.path_coefficients(), threshold)
}

/// Reproduced matrix from externally supplied per-edge coefficients instead
/// of estimated ones; covary arcs still carry the empirical correlation when
/// an observed matrix provides one.
pub fn replay_decomposition(
    g: &CausalGraph,
    coefficients: &HashMap<(String, String), f64>,
    observed: Option<&CorrelationMatrix>,
) -> Result<CorrelationMatrix> {
    let pc = replay_coefficients(g, coefficients, observed)?;
    reproduced_matrix(&pc)
}

pub fn replay_coefficients(
    g: &CausalGraph,
    coefficients: &HashMap<(String, String), f64>,
    observed: Option<&CorrelationMatrix>,
) -> Result<PathCoefficients> {
    let mut edge = HashMap::new();
    for (from, to) in g.edge_names() {
        let value = coefficients
            .get(&(from.clone(), to.clone()))
            .copied()
            .ok_or_else(|| Error::MissingCoefficient(from.clone(), to.clone()))?;
        edge.insert((g.index_of(&from)?, g.index_of(&to)?), value);
    }
    let mut covary = HashMap::new();
    for &(a, b) in g.covary() {
        let value = match observed {
            Some(c) => c.get(c.index_of(g.name(a))?, c.index_of(g.name(b))?),
            None => 0.0,
        };
        covary.insert((a, b), value);
    }
    Ok(PathCoefficients {
        graph: g.clone(),
        edge,
        covary,
    })
}

/// Fit report for replayed coefficients against an observed matrix.
pub fn replay_fit_report(
    g: &CausalGraph,
    coefficients: &HashMap<(String, String), f64>,
    observed: &CorrelationMatrix,
    threshold: f64,
) -> Result<FitReport> {
    let pc = replay_coefficients(g, coefficients, Some(observed))?;
    fit_report_from(observed, &pc, threshold)
}

/// Loads a replay coefficient file of `A -> B value` lines (`#` comments).
pub fn load_replay_coefficients(path: impl AsRef<Path>) -> Result<HashMap<(String, String), f64>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_replay_coefficients(&text)
}

pub fn parse_replay_coefficients(text: &str) -> Result<HashMap<(String, String), f64>> {
    let mut out = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse {
            line: lineno + 1,
            message,
        };
        let toks: Vec<&str> = line.split_whitespace().collect();
        let (from, to, value) = match toks.as_slice() {
            [a, "->", b, v] => (a.to_string(), b.to_string(), v),
            [edge, v] if edge.contains("->") => {
                let mut parts = edge.splitn(2, "->");
                (
                    parts.next().unwrap().to_string(),
                    parts.next().unwrap().to_string(),
                    v,
                )
            }
            _ => return Err(err("expected 'A -> B value'".into())),
        };
        let value: f64 = value
            .parse()
            .map_err(|_| err(format!("bad coefficient '{value}'")))?;
        out.insert((from, to), value);
    }
    Ok(out)
}

/// Removes every directed edge whose coefficient has p >= alpha,
/// simultaneously. Covary arcs are empirical and never trimmed.
pub fn trim_step(m: &FittedModel) -> Result<(Vec<RemovedEdge>, CausalGraph)> {
    let mut removed = Vec::new();
    let mut kept: Vec<(String, String)> = Vec::new();
    for (from, to) in m.graph.edge_names() {
        let term = m
            .coefficient(&from, &to)
            .expect("every edge has a fitted coefficient");
        if term.p >= m.alpha {
            removed.push(RemovedEdge {
                from,
                to,
                p: term.p,
            });
        } else {
            kept.push((from, to));
        }
    }
    let covary: Vec<(String, String)> = m
        .graph
        .covary()
        .iter()
        .map(|&(a, b)| (m.graph.name(a).to_string(), m.graph.name(b).to_string()))
        .collect();
    let pruned = CausalGraph::new(m.graph.variables().to_vec(), &kept, &covary)?;
    Ok((removed, pruned))
}

/// Alternates fitting and trimming until a pass removes nothing. Terminates
/// because the edge count strictly decreases across removing passes.
pub fn fit_and_trim(
    c: &CorrelationMatrix,
    g: &CausalGraph,
    alpha: f64,
    threshold: f64,
) -> Result<TrimLog> {
    let mut graph = g.clone();
    let mut iterations = Vec::new();
    loop {
        let model = fit_model(c, &graph, alpha)?;
        let report = fit_report(&model, threshold)?;
        let (removed, pruned) = trim_step(&model)?;
        let done = removed.is_empty();
        iterations.push(TrimIteration {
            model,
            report,
            removed,
        });
        if done {
            break;
        }
        graph = pruned;
    }
    Ok(TrimLog { iterations })
}
