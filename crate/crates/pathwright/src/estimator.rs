//! Standardized OLS estimation of each structural equation from the
//! correlation matrix.

use std::collections::HashMap;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::corr::CorrelationMatrix;
use crate::error::{Error, Result};
use crate::linalg::invert_with_tol;
use crate::model::{CausalGraph, StructuralEquation};
use crate::stats::p_value_from_t;

const PIVOT_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct PredictorFit {
    pub name: String,
    pub beta: f64,
    pub se: f64,
    pub t: f64,
    pub p: f64,
}

/// One fitted structural equation: standardized coefficients, per-term
/// inference, and the explained variance of the outcome.
#[derive(Debug, Clone)]
pub struct EquationFit {
    pub outcome: String,
    pub terms: Vec<PredictorFit>,
    pub r_squared: f64,
    /// 1 - R^2, the standardized variance of the equation's residual term.
    pub residual_variance: f64,
    pub df: usize,
}

/// A causal graph with one fitted equation per endogenous variable.
#[derive(Debug, Clone)]
pub struct FittedModel {
    pub graph: CausalGraph,
    pub fits: Vec<EquationFit>,
    pub correlation: CorrelationMatrix,
    pub alpha: f64,
}

/// Edge-indexed coefficient view shared by the trace machinery; replayed
/// (externally supplied) coefficients use the same representation.
#[derive(Debug, Clone)]
pub struct PathCoefficients {
    pub graph: CausalGraph,
    pub edge: HashMap<(usize, usize), f64>,
    pub covary: HashMap<(usize, usize), f64>,
}

impl PathCoefficients {
    pub fn edge_coef(&self, from: usize, to: usize) -> f64 {
        self.edge[&(from, to)]
    }

    pub fn covary_coef(&self, a: usize, b: usize) -> f64 {
        self.covary[&(a.min(b), a.max(b))]
    }
}

/// Fits `outcome ~ predictors` by solving the normal equations
/// `R_xx beta = r_xy` on the standardized scale.
pub fn fit_equation(c: &CorrelationMatrix, eq: &StructuralEquation) -> Result<EquationFit> {
    let y = c.index_of(&eq.outcome)?;
    let xs: Vec<usize> = eq
        .predictors
        .iter()
        .map(|p| c.index_of(p))
        .collect::<Result<_>>()?;
    let k = xs.len();
    if k == 0 {
        return Err(Error::InvalidArgument(format!(
            "equation for '{}' has no predictors",
            eq.outcome
        )));
    }
    if c.n <= k + 1 {
        return Err(Error::InsufficientN {
            n: c.n,
            required: k + 1,
        });
    }
    let rxx = nalgebra::DMatrix::from_fn(k, k, |a, b| c.get(xs[a], xs[b]));
    let rxy = nalgebra::DVector::from_fn(k, |a, _| c.get(xs[a], y));
    let inv = invert_with_tol(&rxx, PIVOT_TOL)
        .ok_or_else(|| Error::SingularPredictors(eq.outcome.clone()))?;
    let beta = &inv * &rxy;
    let r_squared = beta.dot(&rxy);
    let df = c.n - k - 1;
    let resid = (1.0 - r_squared).max(0.0);
    let terms = (0..k)
        .map(|j| {
            let se = (resid * inv[(j, j)] / df as f64).sqrt();
            let t = if se > 0.0 {
                beta[j] / se
            } else {
                f64::INFINITY
            };
            Ok(PredictorFit {
                name: eq.predictors[j].clone(),
                beta: beta[j],
                se,
                t,
                p: p_value_from_t(t, df)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EquationFit {
        outcome: eq.outcome.clone(),
        terms,
        r_squared,
        residual_variance: resid,
        df,
    })
}

/// Fits every structural equation of the graph. Equations share only
/// read-only inputs, so they are fitted in parallel when enabled.
pub fn fit_model(c: &CorrelationMatrix, g: &CausalGraph, alpha: f64) -> Result<FittedModel> {
    for name in g.variables() {
        c.index_of(name)?;
    }
    let eqs = g.equations();
    #[cfg(feature = "parallel")]
    let fits: Vec<EquationFit> = eqs
        .par_iter()
        .map(|eq| fit_equation(c, eq))
        .collect::<Result<_>>()?;
    #[cfg(not(feature = "parallel"))]
    let fits: Vec<EquationFit> = eqs
        .iter()
        .map(|eq| fit_equation(c, eq))
        .collect::<Result<_>>()?;
    Ok(FittedModel {
        graph: g.clone(),
        fits,
        correlation: c.clone(),
        alpha,
    })
}

/// Sequential counterpart of [`fit_model`], kept as the bench reference.
pub fn fit_model_serial(c: &CorrelationMatrix, g: &CausalGraph, alpha: f64) -> Result<FittedModel> {
    for name in g.variables() {
        c.index_of(name)?;
    }
    let fits: Vec<EquationFit> = g
        .equations()
        .iter()
        .map(|eq| fit_equation(c, eq))
        .collect::<Result<_>>()?;
    Ok(FittedModel {
        graph: g.clone(),
        fits,
        correlation: c.clone(),
        alpha,
    })
}

impl FittedModel {
    pub fn fit_for(&self, outcome: &str) -> Option<&EquationFit> {
        self.fits.iter().find(|f| f.outcome == outcome)
    }

    /// Coefficient on the directed edge `from -> to`, if that edge exists.
    pub fn coefficient(&self, from: &str, to: &str) -> Option<&PredictorFit> {
        self.fit_for(to)?.terms.iter().find(|t| t.name == from)
    }

    /// Edge-indexed coefficients plus empirical correlations on covary arcs.
    pub fn path_coefficients(&self) -> PathCoefficients {
        let mut edge = HashMap::new();
        for fit in &self.fits {
            let to = self
                .graph
                .index_of(&fit.outcome)
                .expect("fit outcome in graph");
            for term in &fit.terms {
                let from = self.graph.index_of(&term.name).expect("term in graph");
                edge.insert((from, to), term.beta);
            }
        }
        let mut covary = HashMap::new();
        for &(a, b) in self.graph.covary() {
            let (ia, ib) = (
                self.correlation.index_of(self.graph.name(a)).unwrap(),
                self.correlation.index_of(self.graph.name(b)).unwrap(),
            );
            covary.insert((a, b), self.correlation.get(ia, ib));
        }
        PathCoefficients {
            graph: self.graph.clone(),
            edge,
            covary,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corr::demo_matrix;
    use crate::model::{demo_chain_text, demo_full_text, parse_model_text};
    use approx::assert_abs_diff_eq;

    fn eq(outcome: &str, predictors: &[&str]) -> StructuralEquation {
        StructuralEquation {
            outcome: outcome.into(),
            predictors: predictors.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn single_predictor_beta_is_the_correlation() {
        let c = demo_matrix();
        let f = fit_equation(&c, &eq("X2", &["X1"])).unwrap();
        assert_abs_diff_eq!(f.terms[0].beta, 0.804, epsilon = 1e-12);
        assert_abs_diff_eq!(f.r_squared, 0.804 * 0.804, epsilon = 1e-12);
    }

    #[test]
    fn full_outcome_equation_matches_normal_equations_oracle() {
        // frozen from an independent normal-equations solve of the
        // published matrix
        let c = demo_matrix();
        let f = fit_equation(&c, &eq("Y", &["X1", "X2", "X3"])).unwrap();
        assert_abs_diff_eq!(f.terms[0].beta, 0.043862, epsilon = 1e-5);
        assert_abs_diff_eq!(f.terms[1].beta, -0.078278, epsilon = 1e-5);
        assert_abs_diff_eq!(f.terms[2].beta, -0.520413, epsilon = 1e-5);
        assert_abs_diff_eq!(f.r_squared, 0.244828, epsilon = 1e-5);
        assert_abs_diff_eq!(f.terms[2].t, -2.98860, epsilon = 1e-4);
        assert_abs_diff_eq!(f.terms[2].p, 0.004773, epsilon = 1e-5);
        assert_abs_diff_eq!(f.terms[0].p, 0.850601, epsilon = 1e-5);
        assert_eq!(f.df, 40);
    }

    #[test]
    fn humidity_equation_matches_oracle() {
        let c = demo_matrix();
        let f = fit_equation(&c, &eq("X3", &["X1", "X2"])).unwrap();
        assert_abs_diff_eq!(f.terms[0].beta, 0.067458, epsilon = 1e-5);
        assert_abs_diff_eq!(f.terms[1].beta, -0.667236, epsilon = 1e-5);
        assert_abs_diff_eq!(f.r_squared, 0.377378, epsilon = 1e-5);
        assert_abs_diff_eq!(f.terms[0].p, 0.746454, epsilon = 1e-5);
        assert_abs_diff_eq!(f.terms[1].p, 0.002512, epsilon = 1e-5);
    }

    #[test]
    fn r_squared_identity_holds() {
        let c = demo_matrix();
        let f = fit_equation(&c, &eq("Y", &["X1", "X2", "X3"])).unwrap();
        let y = c.index_of("Y").unwrap();
        let recomputed: f64 = f
            .terms
            .iter()
            .map(|t| t.beta * c.get(c.index_of(&t.name).unwrap(), y))
            .sum();
        assert_abs_diff_eq!(f.r_squared, recomputed, epsilon = 1e-10);
        assert_abs_diff_eq!(f.residual_variance, 1.0 - f.r_squared, epsilon = 1e-12);
    }

    #[test]
    fn permuting_predictors_permutes_betas() {
        let c = demo_matrix();
        let a = fit_equation(&c, &eq("Y", &["X1", "X2", "X3"])).unwrap();
        let b = fit_equation(&c, &eq("Y", &["X3", "X1", "X2"])).unwrap();
        for term in &a.terms {
            let other = b.terms.iter().find(|t| t.name == term.name).unwrap();
            assert_abs_diff_eq!(term.beta, other.beta, epsilon = 1e-12);
        }
    }

    #[test]
    fn singular_predictors_rejected() {
        let names = ["A", "B", "Y"].map(str::to_string).to_vec();
        let r =
            nalgebra::DMatrix::from_row_slice(3, 3, &[1.0, 1.0, 0.5, 1.0, 1.0, 0.5, 0.5, 0.5, 1.0]);
        let c = CorrelationMatrix::new(names, r, 30).unwrap();
        let err = fit_equation(&c, &eq("Y", &["A", "B"])).unwrap_err();
        assert!(matches!(err, Error::SingularPredictors(_)));
    }

    #[test]
    fn insufficient_n_rejected() {
        let mut c = demo_matrix();
        c.n = 4;
        assert!(matches!(
            fit_equation(&c, &eq("Y", &["X1", "X2", "X3"])).unwrap_err(),
            Error::InsufficientN { .. }
        ));
    }

    #[test]
    fn fit_model_covers_full_graph() {
        let c = demo_matrix();
        let g = parse_model_text(demo_full_text()).unwrap();
        let m = fit_model(&c, &g, 0.05).unwrap();
        assert_eq!(m.fits.len(), 3);
        assert_abs_diff_eq!(
            m.coefficient("X1", "X2").unwrap().beta,
            0.804,
            epsilon = 1e-12
        );
        let serial = fit_model_serial(&c, &g, 0.05).unwrap();
        for (a, b) in m.fits.iter().zip(serial.fits.iter()) {
            assert_eq!(a.outcome, b.outcome);
            for (ta, tb) in a.terms.iter().zip(b.terms.iter()) {
                assert_eq!(ta.beta, tb.beta);
            }
        }
    }

    #[test]
    fn chain_model_betas_equal_correlations() {
        let c = demo_matrix();
        let g = parse_model_text(demo_chain_text()).unwrap();
        let m = fit_model(&c, &g, 0.05).unwrap();
        assert_abs_diff_eq!(
            m.coefficient("X1", "X2").unwrap().beta,
            0.804,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            m.coefficient("X2", "X3").unwrap().beta,
            -0.613,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            m.coefficient("X3", "Y").unwrap().beta,
            -0.493,
            epsilon = 1e-12
        );
    }

    #[test]
    fn unknown_variable_rejected() {
        let c = demo_matrix();
        let g = parse_model_text("var X1 Z\npath X1 -> Z\n").unwrap();
        assert!(matches!(
            fit_model(&c, &g, 0.05).unwrap_err(),
            Error::UnknownVariable(_)
        ));
    }
}
