//! Report assembly and the three renderers: human-readable text, stable
//! JSON, and DOT diagrams.

use serde::{Deserialize, Serialize};

use crate::corr::CorrelationMatrix;
use crate::effects::EffectsTable;
use crate::error::Result;
use crate::estimator::{FittedModel, PathCoefficients};
use crate::fit_trim::{FitReport, FlaggedCell, TrimLog};
use crate::model::CausalGraph;
use crate::screening::ScreeningReport;
use crate::tracer::{enumerate_traces, TraceClass};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub names: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub values: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(c: &CorrelationMatrix, with_n: bool) -> Self {
        let p = c.p();
        MatrixJson {
            names: c.names.clone(),
            n: (with_n && c.n > 0).then_some(c.n),
            values: (0..p)
                .map(|i| (0..p).map(|j| c.get(i, j)).collect())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    pub predictor: String,
    pub beta: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub se: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    pub significant: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquationJson {
    pub outcome: String,
    pub terms: Vec<TermJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_squared: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual_variance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub df: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitJson {
    pub threshold: f64,
    pub max_diff: f64,
    pub consistent: bool,
    pub flagged: Vec<FlaggedCell>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RemovedEdgeJson {
    pub from: String,
    pub to: String,
    pub p: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrimIterationJson {
    pub removed: Vec<RemovedEdgeJson>,
    pub coefficients: Vec<EquationJson>,
    pub fit: FitJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EffectRowJson {
    pub determinant: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direct: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub indirect: Option<f64>,
    pub total: f64,
    pub significant: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OutcomeEffectsJson {
    pub outcome: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_squared: Option<f64>,
    pub rows: Vec<EffectRowJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecompositionStepJson {
    pub from: String,
    pub to: String,
    pub direction: crate::tracer::Direction,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TraceJson {
    pub steps: Vec<DecompositionStepJson>,
    pub class: String,
    pub product: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub first: String,
    pub second: String,
    pub traces: Vec<TraceJson>,
    pub reproduced: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model_file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data_file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corr_file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replay_file: Option<String>,
    pub alpha: f64,
    pub fit_threshold: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Provenance {
    pub fn new(alpha: f64, fit_threshold: f64) -> Self {
        Provenance {
            tool: "pathwright".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            model_file: None,
            data_file: None,
            corr_file: None,
            replay_file: None,
            alpha,
            fit_threshold,
            seed: None,
        }
    }
}

/// The complete analysis document. Field order is the JSON key order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalysisReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub screening: Option<ScreeningReport>,
    pub coefficients: Vec<EquationJson>,
    pub observed: MatrixJson,
    pub reproduced: MatrixJson,
    pub fit: FitJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trim_log: Option<Vec<TrimIterationJson>>,
    pub decompositions: Vec<DecompositionJson>,
    pub effects: Vec<OutcomeEffectsJson>,
    pub provenance: Provenance,
}

pub fn equations_json(m: &FittedModel) -> Vec<EquationJson> {
    m.fits
        .iter()
        .map(|f| EquationJson {
            outcome: f.outcome.clone(),
            terms: f
                .terms
                .iter()
                .map(|t| TermJson {
                    predictor: t.name.clone(),
                    beta: t.beta,
                    se: Some(t.se),
                    t: Some(t.t),
                    p: Some(t.p),
                    significant: t.p < m.alpha,
                })
                .collect(),
            r_squared: Some(f.r_squared),
            residual_variance: Some(f.residual_variance),
            df: Some(f.df),
        })
        .collect()
}

/// Coefficient section for replayed (externally supplied) values, which
/// carry no inferential statistics.
pub fn replay_equations_json(pc: &PathCoefficients) -> Vec<EquationJson> {
    let g = &pc.graph;
    g.topological_endogenous()
        .into_iter()
        .map(|v| EquationJson {
            outcome: g.name(v).to_string(),
            terms: g
                .parents(v)
                .into_iter()
                .map(|p| TermJson {
                    predictor: g.name(p).to_string(),
                    beta: pc.edge_coef(p, v),
                    se: None,
                    t: None,
                    p: None,
                    significant: false,
                })
                .collect(),
            r_squared: None,
            residual_variance: None,
            df: None,
        })
        .collect()
}

pub fn fit_json(r: &FitReport) -> FitJson {
    FitJson {
        threshold: r.threshold,
        max_diff: r.max_diff,
        consistent: r.consistent,
        flagged: r.flagged.clone(),
    }
}

pub fn trim_log_json(log: &TrimLog) -> Vec<TrimIterationJson> {
    log.iterations
        .iter()
        .map(|it| TrimIterationJson {
            removed: it
                .removed
                .iter()
                .map(|r| RemovedEdgeJson {
                    from: r.from.clone(),
                    to: r.to.clone(),
                    p: r.p,
                })
                .collect(),
            coefficients: equations_json(&it.model),
            fit: fit_json(&it.report),
        })
        .collect()
}

pub fn effects_json(t: &EffectsTable) -> Vec<OutcomeEffectsJson> {
    t.outcomes
        .iter()
        .map(|o| OutcomeEffectsJson {
            outcome: o.outcome.clone(),
            r_squared: Some(o.r_squared),
            rows: o
                .rows
                .iter()
                .map(|r| EffectRowJson {
                    determinant: r.determinant.clone(),
                    direct: r.direct,
                    indirect: r.indirect,
                    total: r.total,
                    significant: r.significant,
                })
                .collect(),
        })
        .collect()
}

/// Effects computed straight from a coefficient set (replay mode): trace
/// sums only, no R-squared or significance.
pub fn effects_json_from_coefficients(pc: &PathCoefficients) -> Result<Vec<OutcomeEffectsJson>> {
    let g = &pc.graph;
    let mut out = Vec::new();
    for outcome_idx in g.topological_endogenous() {
        let outcome = g.name(outcome_idx).to_string();
        let mut rows = Vec::new();
        for det_idx in g.ancestors(outcome_idx) {
            let determinant = g.name(det_idx).to_string();
            let traces = enumerate_traces(pc, &determinant, &outcome)?;
            let direct = traces
                .iter()
                .find(|t| t.class == TraceClass::Direct)
                .map(|t| t.product);
            let indirect = traces
                .iter()
                .any(|t| t.class == TraceClass::Indirect)
                .then(|| {
                    traces
                        .iter()
                        .filter(|t| t.class == TraceClass::Indirect)
                        .map(|t| t.product)
                        .sum()
                });
            rows.push(EffectRowJson {
                determinant,
                direct,
                indirect,
                total: direct.unwrap_or(0.0) + indirect.unwrap_or(0.0),
                significant: false,
            });
        }
        out.push(OutcomeEffectsJson {
            outcome,
            r_squared: None,
            rows,
        });
    }
    Ok(out)
}

/// Per-pair trace listings mirroring the decomposition tables.
pub fn decompositions_json(pc: &PathCoefficients) -> Result<Vec<DecompositionJson>> {
    let g = &pc.graph;
    let mut out = Vec::new();
    for i in 0..g.p() {
        for j in i + 1..g.p() {
            let traces = enumerate_traces(pc, g.name(i), g.name(j))?;
            let reproduced = traces.iter().map(|t| t.product).sum();
            out.push(DecompositionJson {
                first: g.name(i).to_string(),
                second: g.name(j).to_string(),
                traces: traces
                    .into_iter()
                    .map(|t| TraceJson {
                        steps: t
                            .steps
                            .iter()
                            .map(|s| DecompositionStepJson {
                                from: g.name(s.from).to_string(),
                                to: g.name(s.to).to_string(),
                                direction: s.direction,
                            })
                            .collect(),
                        class: t.class.to_string(),
                        product: t.product,
                    })
                    .collect(),
                reproduced,
            });
        }
    }
    Ok(out)
}

/// Single JSON document with stable key order; numbers round-trip exactly.
pub fn render_json(r: &AnalysisReport) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("report serializes");
    s.push('\n');
    s
}

fn fmt3(v: f64) -> String {
    format!("{v:.3}")
}

fn matrix_block(out: &mut String, title: &str, m: &MatrixJson, flags: Option<&[FlaggedCell]>) {
    out.push_str(title);
    out.push('\n');
    out.push_str(&"-".repeat(title.len()));
    out.push('\n');
    let width = m.names.iter().map(|n| n.len()).max().unwrap_or(4).max(8);
    out.push_str(&format!("{:width$}", ""));
    for n in &m.names {
        out.push_str(&format!(" {n:>width$}"));
    }
    out.push('\n');
    for (i, row_name) in m.names.iter().enumerate() {
        out.push_str(&format!("{row_name:<width$}"));
        for j in 0..=i {
            let mut cell = fmt3(m.values[i][j]);
            if let Some(flags) = flags {
                let hit = flags.iter().any(|f| {
                    (f.first == m.names[j] && f.second == *row_name)
                        || (f.first == *row_name && f.second == m.names[j])
                });
                if hit {
                    cell.push('*');
                }
            }
            out.push_str(&format!(" {cell:>width$}"));
        }
        out.push('\n');
    }
}

fn screening_block(out: &mut String, s: &ScreeningReport) {
    out.push_str("Screening\n---------\n");
    let flagged: Vec<&crate::screening::OutlierRow> =
        s.outliers.iter().filter(|o| o.flagged).collect();
    if flagged.is_empty() {
        out.push_str(&format!(
            "Outliers (Mahalanobis D2 > {}): none\n",
            fmt3(s.outlier_cutoff)
        ));
    } else {
        out.push_str(&format!(
            "Outliers (Mahalanobis D2 > {}):\n",
            fmt3(s.outlier_cutoff)
        ));
        for o in flagged {
            out.push_str(&format!("  row {:>4}  D2 = {}\n", o.row, fmt3(o.d2)));
        }
    }
    out.push_str("Normality (Lilliefors KS, alpha 0.05):\n");
    for n in &s.normality {
        out.push_str(&format!(
            "  {:<12} D = {}  critical = {}  {}\n",
            n.name,
            fmt3(n.d),
            fmt3(n.critical),
            if n.pass { "pass" } else { "FAIL" }
        ));
    }
    if !s.vif.is_empty() {
        out.push_str("VIF:\n");
        for v in &s.vif {
            out.push_str(&format!(
                "  {:<12} {}{}\n",
                v.name,
                fmt3(v.vif),
                if v.flagged { "  FLAG (>10)" } else { "" }
            ));
        }
    }
    out.push_str(&format!(
        "Heteroscedasticity: LM = {}  p = {}  {}\n",
        fmt3(s.heteroscedasticity.lm),
        fmt3(s.heteroscedasticity.p),
        if s.heteroscedasticity.flagged {
            "FLAG"
        } else {
            "ok"
        }
    ));
    out.push_str("Ranges:\n");
    out.push_str(&format!(
        "  {:<12} {:>10} {:>10} {:>10} {:>10} {:>10}\n",
        "variable", "mean", "sd", "min", "max", "range"
    ));
    for r in &s.ranges {
        out.push_str(&format!(
            "  {:<12} {:>10} {:>10} {:>10} {:>10} {:>10}\n",
            r.name,
            fmt3(r.mean),
            fmt3(r.sd),
            fmt3(r.min),
            fmt3(r.max),
            fmt3(r.range)
        ));
    }
    let gaps: Vec<&crate::screening::LinearityPair> =
        s.linearity.iter().filter(|l| l.gap_flag).collect();
    if gaps.is_empty() {
        out.push_str("Linearity (|Spearman| - |Pearson| > 0.1): no gaps\n");
    } else {
        out.push_str("Linearity gaps (advisory):\n");
        for l in gaps {
            out.push_str(&format!(
                "  {} ~ {}: Pearson {}  Spearman {}\n",
                l.first,
                l.second,
                fmt3(l.pearson),
                fmt3(l.spearman)
            ));
        }
    }
    out.push('\n');
}

/// Screening section alone, for the `screen` subcommand.
pub fn render_screening(s: &ScreeningReport) -> String {
    let mut out = String::new();
    screening_block(&mut out, s);
    out
}

/// Human-readable rendering: coefficient table, observed and reproduced
/// blocks with flag asterisks, trim log, and the causal-effects table.
/// Values print at 3 decimals.
pub fn render_text(r: &AnalysisReport) -> String {
    let mut out = String::new();
    if let Some(s) = &r.screening {
        screening_block(&mut out, s);
    }
    out.push_str(&format!(
        "Path Coefficients (alpha = {})\n------------------------------\n",
        fmt3(r.provenance.alpha)
    ));
    out.push_str(&format!(
        "{:<12} {:<12} {:>9} {:>9} {:>9} {:>9}\n",
        "outcome", "predictor", "beta", "se", "t", "p"
    ));
    for eq in &r.coefficients {
        for t in &eq.terms {
            let opt = |v: Option<f64>| v.map(fmt3).unwrap_or_else(|| "---".into());
            out.push_str(&format!(
                "{:<12} {:<12} {:>9} {:>9} {:>9} {:>9}{}\n",
                eq.outcome,
                t.predictor,
                format!("{}{}", fmt3(t.beta), if t.significant { "*" } else { "" }),
                opt(t.se),
                opt(t.t),
                opt(t.p),
                ""
            ));
        }
        if let Some(r2) = eq.r_squared {
            out.push_str(&format!(
                "{:<12} R^2 = {}  residual variance = {}\n",
                eq.outcome,
                fmt3(r2),
                fmt3(eq.residual_variance.unwrap_or(1.0 - r2))
            ));
        }
    }
    out.push('\n');
    matrix_block(&mut out, "Observed Correlation", &r.observed, None);
    out.push('\n');
    matrix_block(
        &mut out,
        "Reproduced Correlation",
        &r.reproduced,
        Some(&r.fit.flagged),
    );
    if !r.fit.flagged.is_empty() {
        out.push_str(&format!(
            "*Difference between reproduced and observed correlation is greater than {}.\n",
            fmt3(r.fit.threshold)
        ));
    }
    out.push_str(&format!(
        "Fit: max |observed - reproduced| = {} -> model {} with the empirical data\n\n",
        fmt3(r.fit.max_diff),
        if r.fit.consistent {
            "is consistent"
        } else {
            "is NOT consistent"
        }
    ));
    if let Some(log) = &r.trim_log {
        let any_removed = log.iter().any(|it| !it.removed.is_empty());
        if any_removed {
            out.push_str("Trim Log\n--------\n");
            for (i, it) in log.iter().enumerate() {
                if it.removed.is_empty() {
                    out.push_str(&format!("iteration {}: no removals (final)\n", i + 1));
                } else {
                    let list: Vec<String> = it
                        .removed
                        .iter()
                        .map(|e| format!("{} -> {} (p = {})", e.from, e.to, fmt3(e.p)))
                        .collect();
                    out.push_str(&format!(
                        "iteration {}: removed {}\n",
                        i + 1,
                        list.join(", ")
                    ));
                }
            }
            out.push('\n');
        }
    }
    out.push_str("Causal Effects\n--------------\n");
    out.push_str(&format!(
        "{:<24} {:<16} {:>9} {:>9} {:>9}\n",
        "Outcome", "Determinant", "Direct", "Indirect", "Total"
    ));
    for block in &r.effects {
        let label = match block.r_squared {
            Some(r2) => format!("{} (R^2 = {})", block.outcome, fmt3(r2)),
            None => block.outcome.clone(),
        };
        for (i, row) in block.rows.iter().enumerate() {
            let opt = |v: Option<f64>| v.map(fmt3).unwrap_or_else(|| "---".into());
            out.push_str(&format!(
                "{:<24} {:<16} {:>9} {:>9} {:>9}\n",
                if i == 0 { label.as_str() } else { "" },
                format!(
                    "{}{}",
                    row.determinant,
                    if row.significant { "*" } else { "" }
                ),
                opt(row.direct),
                opt(row.indirect),
                fmt3(row.total)
            ));
        }
    }
    out
}

/// DOT digraph; edges labeled with coefficients (and `*` when significant)
/// when a fitted model is supplied. Covary arcs render as undirected dashed
/// edges.
pub fn render_diagram(g: &CausalGraph, m: Option<&FittedModel>) -> String {
    let mut out = String::from("digraph paths {\n  rankdir=LR;\n  node [shape=box];\n");
    for name in g.variables() {
        out.push_str(&format!("  \"{name}\";\n"));
    }
    for (from, to) in g.edge_names() {
        match m.and_then(|m| m.coefficient(&from, &to)) {
            Some(term) => {
                let star = if m.map(|m| term.p < m.alpha).unwrap_or(false) {
                    "*"
                } else {
                    ""
                };
                out.push_str(&format!(
                    "  \"{from}\" -> \"{to}\" [label=\"{}{star}\"];\n",
                    fmt3(term.beta)
                ));
            }
            None => out.push_str(&format!("  \"{from}\" -> \"{to}\";\n")),
        }
    }
    for &(a, b) in g.covary() {
        out.push_str(&format!(
            "  \"{}\" -> \"{}\" [dir=none, style=dashed];\n",
            g.name(a),
            g.name(b)
        ));
    }
    out.push_str("}\n");
    out
}
