//! Direct / indirect / total causal effect summaries per (outcome,
//! determinant) pair.

use crate::error::{Error, Result};
use crate::estimator::FittedModel;
use crate::tracer::{enumerate_traces, TraceClass};

#[derive(Debug, Clone)]
pub struct EffectRow {
    pub outcome: String,
    pub determinant: String,
    pub direct: Option<f64>,
    pub indirect: Option<f64>,
    pub total: f64,
    /// Mirrors the asterisk convention: set when the determinant's direct
    /// edge into the outcome is significant at the model alpha.
    pub significant: bool,
}

#[derive(Debug, Clone)]
pub struct OutcomeEffects {
    pub outcome: String,
    pub r_squared: f64,
    pub rows: Vec<EffectRow>,
}

#[derive(Debug, Clone)]
pub struct EffectsTable {
    pub outcomes: Vec<OutcomeEffects>,
}

/// Builds the causal-effects summary: one block per endogenous outcome in
/// topological order, one row per directed ancestor in declaration order.
/// Spurious trace products are excluded throughout.
pub fn effects_table(m: &FittedModel) -> Result<EffectsTable> {
    let g = &m.graph;
    let pc = m.path_coefficients();
    let mut outcomes = Vec::new();
    for outcome_idx in g.topological_endogenous() {
        let outcome = g.name(outcome_idx).to_string();
        let fit = m
            .fit_for(&outcome)
            .expect("every endogenous variable has a fit");
        let mut rows = Vec::new();
        for det_idx in g.ancestors(outcome_idx) {
            let determinant = g.name(det_idx).to_string();
            let direct = m.coefficient(&determinant, &outcome).map(|t| t.beta);
            let indirect_sum: f64 = enumerate_traces(&pc, &determinant, &outcome)?
                .iter()
                .filter(|t| t.class == TraceClass::Indirect)
                .map(|t| t.product)
                .sum();
            let has_indirect = enumerate_traces(&pc, &determinant, &outcome)?
                .iter()
                .any(|t| t.class == TraceClass::Indirect);
            let indirect = has_indirect.then_some(indirect_sum);
            let total = direct.unwrap_or(0.0) + indirect.unwrap_or(0.0);
            let significant = m
                .coefficient(&determinant, &outcome)
                .map(|t| t.p < m.alpha)
                .unwrap_or(false);
            rows.push(EffectRow {
                outcome: outcome.clone(),
                determinant,
                direct,
                indirect,
                total,
                significant,
            });
        }
        outcomes.push(OutcomeEffects {
            outcome,
            r_squared: fit.r_squared,
            rows,
        });
    }
    Ok(EffectsTable { outcomes })
}

/// R-squared of the outcome's equation and its unexplained share.
pub fn variance_explained(m: &FittedModel, outcome: &str) -> Result<(f64, f64)> {
    let fit = m.fit_for(outcome).ok_or_else(|| {
        m.graph
            .index_of(outcome)
            .err()
            .unwrap_or_else(|| Error::InvalidArgument(format!("'{outcome}' is not endogenous")))
    })?;
    Ok((fit.r_squared, 1.0 - fit.r_squared))
}
