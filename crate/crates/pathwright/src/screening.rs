//! Pre-analysis diagnostics: multivariate outliers, univariate normality,
//! multicollinearity, homoscedasticity, and range reporting.

use nalgebra::{DMatrix, DVector};
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::corr::CorrelationMatrix;
use crate::dataset::{standardize, summary_stats, Dataset, SummaryStats};
use crate::error::{Error, Result};
use crate::linalg::invert_with_tol;
use crate::model::CausalGraph;
use crate::stats::{chi2_cdf, chi2_quantile_wh, normal_cdf};

const PIVOT_TOL: f64 = 1e-10;
/// Conventional strict multivariate-outlier cutoff.
const OUTLIER_QUANTILE: f64 = 0.999;
const VIF_FLAG: f64 = 10.0;

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct OutlierRow {
    pub row: usize,
    pub d2: f64,
    pub flagged: bool,
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct NormalityResult {
    pub name: String,
    pub d: f64,
    pub critical: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct VifResult {
    pub name: String,
    pub vif: f64,
    pub flagged: bool,
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct HeteroscedasticityResult {
    pub lm: f64,
    pub p: f64,
    pub flagged: bool,
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct LinearityPair {
    pub first: String,
    pub second: String,
    pub pearson: f64,
    pub spearman: f64,
    pub gap_flag: bool,
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct ScreeningReport {
    pub outliers: Vec<OutlierRow>,
    pub outlier_cutoff: f64,
    pub normality: Vec<NormalityResult>,
    pub vif: Vec<VifResult>,
    pub heteroscedasticity: HeteroscedasticityResult,
    pub ranges: Vec<SummaryStats>,
    pub linearity: Vec<LinearityPair>,
}

/// Squared Mahalanobis distance of every row from the column means, using
/// the n-1 denominator covariance. Rows beyond the chi-square(p) upper
/// 0.999 quantile are flagged.
pub fn mahalanobis_d2(d: &Dataset) -> Result<Vec<OutlierRow>> {
    let (n, p) = (d.n, d.p());
    if n <= p {
        return Err(Error::InsufficientN { n, required: p });
    }
    let means = DVector::from_fn(p, |j, _| d.values.column(j).sum() / n as f64);
    let mut cov = DMatrix::zeros(p, p);
    for i in 0..n {
        let diff = d.values.row(i).transpose() - &means;
        cov += &diff * diff.transpose();
    }
    cov /= (n - 1) as f64;
    let inv = invert_with_tol(&cov, PIVOT_TOL).ok_or(Error::CollinearColumns)?;
    let cutoff = chi2_quantile_wh(OUTLIER_QUANTILE, p);
    let row_d2 = |i: usize| {
        let diff = d.values.row(i).transpose() - &means;
        let d2 = (diff.transpose() * &inv * &diff)[(0, 0)];
        OutlierRow {
            row: i,
            d2,
            flagged: d2 > cutoff,
        }
    };
    #[cfg(feature = "parallel")]
    let out = (0..n).into_par_iter().map(row_d2).collect();
    #[cfg(not(feature = "parallel"))]
    let out = (0..n).map(row_d2).collect();
    Ok(out)
}

/// Sequential counterpart of [`mahalanobis_d2`]; bench reference.
pub fn mahalanobis_d2_serial(d: &Dataset) -> Result<Vec<OutlierRow>> {
    let (n, p) = (d.n, d.p());
    if n <= p {
        return Err(Error::InsufficientN { n, required: p });
    }
    let means = DVector::from_fn(p, |j, _| d.values.column(j).sum() / n as f64);
    let mut cov = DMatrix::zeros(p, p);
    for i in 0..n {
        let diff = d.values.row(i).transpose() - &means;
        cov += &diff * diff.transpose();
    }
    cov /= (n - 1) as f64;
    let inv = invert_with_tol(&cov, PIVOT_TOL).ok_or(Error::CollinearColumns)?;
    let cutoff = chi2_quantile_wh(OUTLIER_QUANTILE, p);
    Ok((0..n)
        .map(|i| {
            let diff = d.values.row(i).transpose() - &means;
            let d2 = (diff.transpose() * &inv * &diff)[(0, 0)];
            OutlierRow {
                row: i,
                d2,
                flagged: d2 > cutoff,
            }
        })
        .collect())
}

/// Lilliefors critical value at alpha = 0.05; the test estimates mean and sd
/// from the sample, so the plain KS table would be too lenient.
fn lilliefors_critical(n: usize) -> f64 {
    let rn = (n as f64).sqrt();
    0.895 / (rn - 0.01 + 0.85 / rn)
}

/// One-sample KS statistic against a normal with moments estimated from the
/// column, compared to the Lilliefors-corrected critical value.
pub fn normality_ks(column: &[f64]) -> Result<NormalityResult> {
    let n = column.len();
    if n < 4 {
        return Err(Error::TooFewObservations(n, 4));
    }
    let mean = column.iter().sum::<f64>() / n as f64;
    let ss: f64 = column.iter().map(|v| (v - mean).powi(2)).sum();
    if ss <= 0.0 {
        return Err(Error::ConstantVariable("column".into()));
    }
    let sd = (ss / (n - 1) as f64).sqrt();
    let mut sorted: Vec<f64> = column.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut d_stat: f64 = 0.0;
    for (i, x) in sorted.iter().enumerate() {
        let f = normal_cdf((x - mean) / sd);
        let upper = (i + 1) as f64 / n as f64 - f;
        let lower = f - i as f64 / n as f64;
        d_stat = d_stat.max(upper.max(lower));
    }
    let critical = lilliefors_critical(n);
    Ok(NormalityResult {
        name: String::new(),
        d: d_stat,
        critical,
        pass: d_stat <= critical,
    })
}

/// VIF_j = 1 / (1 - R^2 of predictor j on the remaining predictors),
/// computed from the predictor correlation submatrix.
pub fn vif_scores(c: &CorrelationMatrix, predictors: &[String]) -> Result<Vec<VifResult>> {
    if predictors.len() < 2 {
        return Err(Error::InvalidArgument(
            "VIF needs at least 2 predictors".into(),
        ));
    }
    let idx: Vec<usize> = predictors
        .iter()
        .map(|p| c.index_of(p))
        .collect::<Result<_>>()?;
    let k = idx.len();
    let sub = DMatrix::from_fn(k, k, |a, b| c.get(idx[a], idx[b]));
    let inv = invert_with_tol(&sub, PIVOT_TOL).ok_or(Error::SingularSubmatrix)?;
    Ok((0..k)
        .map(|j| {
            let vif = inv[(j, j)];
            VifResult {
                name: predictors[j].clone(),
                vif,
                flagged: vif > VIF_FLAG,
            }
        })
        .collect())
}

/// Breusch-Pagan style check: regress squared standardized residuals on the
/// fitted values, LM = n * R^2 against chi-square(1). Flagged at p < 0.05.
pub fn heteroscedasticity_check(
    residuals: &[f64],
    fitted: &[f64],
) -> Result<HeteroscedasticityResult> {
    let n = residuals.len();
    if n != fitted.len() || n < 5 {
        return Err(Error::InvalidArgument(format!(
            "need equal-length vectors of at least 5, got {} and {}",
            residuals.len(),
            fitted.len()
        )));
    }
    let mean_f = fitted.iter().sum::<f64>() / n as f64;
    let ss_f: f64 = fitted.iter().map(|v| (v - mean_f).powi(2)).sum();
    if ss_f <= 0.0 {
        return Err(Error::ConstantVariable("fitted values".into()));
    }
    let mean_r = residuals.iter().sum::<f64>() / n as f64;
    let var_r = residuals.iter().map(|v| (v - mean_r).powi(2)).sum::<f64>() / n as f64;
    if var_r <= 0.0 {
        // all-zero (or constant) residuals: nothing to test
        return Ok(HeteroscedasticityResult {
            lm: 0.0,
            p: 1.0,
            flagged: false,
        });
    }
    let sq: Vec<f64> = residuals
        .iter()
        .map(|r| (r - mean_r).powi(2) / var_r)
        .collect();
    let mean_sq = sq.iter().sum::<f64>() / n as f64;
    let mut cov = 0.0;
    let mut ss_sq = 0.0;
    for i in 0..n {
        cov += (sq[i] - mean_sq) * (fitted[i] - mean_f);
        ss_sq += (sq[i] - mean_sq).powi(2);
    }
    let r2 = if ss_sq > 0.0 {
        (cov * cov) / (ss_sq * ss_f)
    } else {
        0.0
    };
    let lm = n as f64 * r2;
    let p = 1.0 - chi2_cdf(lm, 1);
    Ok(HeteroscedasticityResult {
        lm,
        p,
        flagged: p < 0.05,
    })
}

fn ranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut out = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[idx[j + 1]] == values[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            out[k] = avg;
        }
        i = j + 1;
    }
    out
}

fn pearson_of(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let mut cov = 0.0;
    let mut sa = 0.0;
    let mut sb = 0.0;
    for (x, y) in a.iter().zip(b.iter()) {
        cov += (x - ma) * (y - mb);
        sa += (x - ma).powi(2);
        sb += (y - mb).powi(2);
    }
    cov / (sa.sqrt() * sb.sqrt())
}

/// Aggregates every check for the variables a model references. The
/// residual-based homoscedasticity check uses the final outcome equation
/// (the last endogenous variable in topological order). The
/// Pearson-vs-Spearman gap stands in for visual scatter-plot inspection;
/// gap flags are advisory.
pub fn screen_report(d: &Dataset, model: &CausalGraph) -> Result<ScreeningReport> {
    for name in model.variables() {
        d.index_of(name)?;
    }
    let outliers = mahalanobis_d2(d)?;
    let cutoff = chi2_quantile_wh(OUTLIER_QUANTILE, d.p());
    let normality = (0..d.p())
        .map(|j| {
            let mut r = normality_ks(&d.column(j))?;
            r.name = d.names[j].clone();
            Ok(r)
        })
        .collect::<Result<Vec<_>>>()?;
    let corr = crate::dataset::pearson_matrix(d)?;
    let endo = model.topological_endogenous();
    let vif = match endo.last() {
        Some(&outcome) if model.parents(outcome).len() >= 2 => {
            let preds: Vec<String> = model
                .parents(outcome)
                .into_iter()
                .map(|v| model.name(v).to_string())
                .collect();
            vif_scores(&corr, &preds)?
        }
        _ => Vec::new(),
    };
    let het = {
        let outcome = *endo.last().ok_or_else(|| {
            Error::InvalidArgument("model has no endogenous variable to screen".into())
        })?;
        let std = standardize(d)?;
        let eqs = model.equations();
        let eq = eqs
            .iter()
            .find(|e| e.outcome == model.name(outcome))
            .expect("outcome has an equation");
        let fit = crate::estimator::fit_equation(&corr, eq)?;
        let yi = std.index_of(&eq.outcome)?;
        let mut fitted = vec![0.0; d.n];
        for term in &fit.terms {
            let xi = std.index_of(&term.name)?;
            for (i, f) in fitted.iter_mut().enumerate() {
                *f += term.beta * std.values[(i, xi)];
            }
        }
        let residuals: Vec<f64> = (0..d.n).map(|i| std.values[(i, yi)] - fitted[i]).collect();
        heteroscedasticity_check(&residuals, &fitted)?
    };
    let ranges = summary_stats(d);
    let mut linearity = Vec::new();
    for i in 0..d.p() {
        for j in i + 1..d.p() {
            let (a, b) = (d.column(i), d.column(j));
            let pearson = corr.get(i, j);
            let spearman = pearson_of(&ranks(&a), &ranks(&b));
            linearity.push(LinearityPair {
                first: d.names[i].clone(),
                second: d.names[j].clone(),
                pearson,
                spearman,
                gap_flag: spearman.abs() - pearson.abs() > 0.1,
            });
        }
    }
    Ok(ScreeningReport {
        outliers,
        outlier_cutoff: cutoff,
        normality,
        vif,
        heteroscedasticity: het,
        ranges,
        linearity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corr::demo_matrix;
    use crate::model::parse_model_text;
    use crate::synth::generate_synthetic;
    use approx::assert_abs_diff_eq;
    use nalgebra::DMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn dataset(names: &[&str], rows: &[Vec<f64>]) -> Dataset {
        let values = DMatrix::from_fn(rows.len(), names.len(), |i, j| rows[i][j]);
        Dataset::new(names.iter().map(|s| s.to_string()).collect(), values, 0).unwrap()
    }

    #[test]
    fn d2_matches_bruteforce_quadratic_form() {
        let col = [1.0, 4.0, 2.0, 8.0, 5.0, 3.0];
        let other = [2.0, 1.0, 5.0, 3.0, 9.0, 4.0];
        let rows: Vec<Vec<f64>> = col
            .iter()
            .zip(other.iter())
            .map(|(&a, &b)| vec![a, b])
            .collect();
        let d = dataset(&["x", "y"], &rows);
        let out = mahalanobis_d2(&d).unwrap();
        // brute-force quadratic form oracle
        let n = 6.0;
        let mx = col.iter().sum::<f64>() / n;
        let my = other.iter().sum::<f64>() / n;
        let sxx = col.iter().map(|v| (v - mx).powi(2)).sum::<f64>() / (n - 1.0);
        let syy = other.iter().map(|v| (v - my).powi(2)).sum::<f64>() / (n - 1.0);
        let sxy = col
            .iter()
            .zip(other.iter())
            .map(|(a, b)| (a - mx) * (b - my))
            .sum::<f64>()
            / (n - 1.0);
        let det = sxx * syy - sxy * sxy;
        for (i, o) in out.iter().enumerate() {
            let (dx, dy) = (col[i] - mx, other[i] - my);
            let oracle = (syy * dx * dx - 2.0 * sxy * dx * dy + sxx * dy * dy) / det;
            assert_abs_diff_eq!(o.d2, oracle, epsilon = 1e-10);
        }
    }

    #[test]
    fn d2_sum_identity() {
        let target = demo_matrix();
        for seed in 0..5 {
            let d = generate_synthetic(&target, 60, seed, false).unwrap();
            let out = mahalanobis_d2(&d).unwrap();
            let total: f64 = out.iter().map(|o| o.d2).sum();
            assert_abs_diff_eq!(total, 59.0 * 4.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn injected_outlier_is_the_only_flag() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut rows: Vec<Vec<f64>> = (0..20)
            .map(|_| {
                let a: f64 = StandardNormal.sample(&mut rng);
                let b: f64 = StandardNormal.sample(&mut rng);
                vec![0.3 * a, 0.3 * b]
            })
            .collect();
        rows.push(vec![10.0, 10.0]);
        let d = dataset(&["x", "y"], &rows);
        let out = mahalanobis_d2(&d).unwrap();
        let flagged: Vec<usize> = out.iter().filter(|o| o.flagged).map(|o| o.row).collect();
        assert_eq!(flagged, vec![20]);
        let max = out.iter().max_by(|a, b| a.d2.total_cmp(&b.d2)).unwrap();
        assert_eq!(max.row, 20);
        let serial = mahalanobis_d2_serial(&d).unwrap();
        for (a, b) in out.iter().zip(serial.iter()) {
            assert_eq!(a.d2, b.d2);
        }
    }

    #[test]
    fn collinear_columns_rejected() {
        let rows: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64, 2.0 * i as f64]).collect();
        let d = dataset(&["x", "y"], &rows);
        assert!(matches!(
            mahalanobis_d2(&d).unwrap_err(),
            Error::CollinearColumns
        ));
    }

    #[test]
    fn ks_passes_on_exact_normal_quantiles() {
        let n = 50;
        let col: Vec<f64> = (1..=n)
            .map(|i| crate::stats::normal_quantile((i as f64 - 0.5) / n as f64))
            .collect();
        let r = normality_ks(&col).unwrap();
        assert!(r.d < 0.06);
        assert!(r.pass);
    }

    #[test]
    fn ks_fails_on_uniform_grid() {
        // the uniform-vs-fitted-normal gap tops out near 0.059, so the
        // Lilliefors critical value only drops below it past n ~ 230
        let n = 400;
        let col: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        let r = normality_ks(&col).unwrap();
        assert!(!r.pass, "D = {} vs critical {}", r.d, r.critical);
    }

    #[test]
    fn ks_invariant_under_affine_transform() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let col: Vec<f64> = (0..80).map(|_| StandardNormal.sample(&mut rng)).collect();
        let a = normality_ks(&col).unwrap();
        let shifted: Vec<f64> = col.iter().map(|v| 3.0 * v + 17.0).collect();
        let b = normality_ks(&shifted).unwrap();
        assert_abs_diff_eq!(a.d, b.d, epsilon = 1e-12);
    }

    #[test]
    fn ks_rejects_tiny_samples() {
        assert!(matches!(
            normality_ks(&[1.0, 2.0, 3.0]).unwrap_err(),
            Error::TooFewObservations(3, 4)
        ));
    }

    #[test]
    fn vif_identity_for_orthogonal_predictors() {
        let names = ["A", "B", "C"].map(str::to_string).to_vec();
        let c = CorrelationMatrix::new(names.clone(), DMatrix::identity(3, 3), 30).unwrap();
        for v in vif_scores(&c, &names).unwrap() {
            assert_abs_diff_eq!(v.vif, 1.0, epsilon = 1e-12);
            assert!(!v.flagged);
        }
    }

    #[test]
    fn vif_matches_published_predictor_value() {
        // R^2 of X2 on {X1, X3} is 0.71777 on the published matrix
        let c = demo_matrix();
        let names = ["X1", "X2", "X3"].map(str::to_string).to_vec();
        let scores = vif_scores(&c, &names).unwrap();
        let x2 = scores.iter().find(|v| v.name == "X2").unwrap();
        assert_abs_diff_eq!(x2.vif, 3.543, epsilon = 0.01);
        assert_abs_diff_eq!(1.0 - 1.0 / x2.vif, 0.7178, epsilon = 1e-3);
    }

    #[test]
    fn vif_invariant_under_sign_flip() {
        let c = demo_matrix();
        let mut flipped = c.r.clone();
        for j in 0..4 {
            if j != 1 {
                flipped[(1, j)] = -flipped[(1, j)];
                flipped[(j, 1)] = -flipped[(j, 1)];
            }
        }
        let c2 = CorrelationMatrix::new(c.names.clone(), flipped, c.n).unwrap();
        let names = ["X1", "X2", "X3"].map(str::to_string).to_vec();
        let a = vif_scores(&c, &names).unwrap();
        let b = vif_scores(&c2, &names).unwrap();
        for (x, y) in a.iter().zip(b.iter()) {
            assert_abs_diff_eq!(x.vif, y.vif, epsilon = 1e-10);
        }
    }

    #[test]
    fn perfectly_collinear_predictors_rejected() {
        let names = ["A", "B", "Y"].map(str::to_string).to_vec();
        let r = DMatrix::from_row_slice(3, 3, &[1.0, 1.0, 0.3, 1.0, 1.0, 0.3, 0.3, 0.3, 1.0]);
        let c = CorrelationMatrix::new(names, r, 30).unwrap();
        assert!(matches!(
            vif_scores(&c, &["A".into(), "B".into()]).unwrap_err(),
            Error::SingularSubmatrix
        ));
    }

    #[test]
    fn homoscedastic_residuals_rarely_flagged() {
        let mut hits = 0;
        for rep in 0..100 {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + rep);
            let fitted: Vec<f64> = (0..60).map(|_| rng.gen_range(1.0..5.0)).collect();
            let residuals: Vec<f64> = (0..60).map(|_| StandardNormal.sample(&mut rng)).collect();
            if heteroscedasticity_check(&residuals, &fitted)
                .unwrap()
                .flagged
            {
                hits += 1;
            }
        }
        assert!(
            hits <= 10,
            "flagged {hits} of 100 homoscedastic replications"
        );
    }

    #[test]
    fn proportional_variance_usually_flagged() {
        let mut hits = 0;
        for rep in 0..100 {
            let mut rng = ChaCha8Rng::seed_from_u64(2000 + rep);
            let fitted: Vec<f64> = (0..60).map(|_| rng.gen_range(0.5..5.0)).collect();
            let residuals: Vec<f64> = fitted
                .iter()
                .map(|f| {
                    f * {
                        let e: f64 = StandardNormal.sample(&mut rng);
                        e
                    }
                })
                .collect();
            if heteroscedasticity_check(&residuals, &fitted)
                .unwrap()
                .flagged
            {
                hits += 1;
            }
        }
        assert!(
            hits >= 90,
            "flagged only {hits} of 100 heteroscedastic replications"
        );
    }

    #[test]
    fn zero_residuals_not_flagged() {
        let fitted: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let r = heteroscedasticity_check(&[0.0; 10], &fitted).unwrap();
        assert_eq!(r.lm, 0.0);
        assert!(!r.flagged);
    }

    #[test]
    fn lm_invariant_under_residual_rescaling() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let fitted: Vec<f64> = (0..40).map(|_| rng.gen_range(0.0..4.0)).collect();
        let residuals: Vec<f64> = fitted
            .iter()
            .map(|f| {
                f * {
                    let e: f64 = StandardNormal.sample(&mut rng);
                    e
                }
            })
            .collect();
        let a = heteroscedasticity_check(&residuals, &fitted).unwrap();
        let scaled: Vec<f64> = residuals.iter().map(|r| 100.0 * r).collect();
        let b = heteroscedasticity_check(&scaled, &fitted).unwrap();
        assert_abs_diff_eq!(a.lm, b.lm, epsilon = 1e-9);
    }

    #[test]
    fn clean_synthetic_data_passes_everything() {
        let target = demo_matrix();
        let d = generate_synthetic(&target, 200, 77, false).unwrap();
        let model = parse_model_text(crate::model::demo_full_text()).unwrap();
        let report = screen_report(&d, &model).unwrap();
        assert!(report.outliers.iter().all(|o| !o.flagged));
        assert!(report.normality.iter().all(|n| n.pass));
        assert!(report.vif.iter().all(|v| !v.flagged));
        assert!(!report.heteroscedasticity.flagged);
        assert_eq!(report.ranges.len(), 4);
        assert_eq!(report.linearity.len(), 6);
    }

    #[test]
    fn injected_outlier_leaves_other_sections_alone() {
        let target = demo_matrix();
        let base = generate_synthetic(&target, 120, 13, false).unwrap();
        let mut values = base.values.clone();
        values = values.insert_row(0, 0.0);
        for j in 0..4 {
            values[(0, j)] = 25.0;
        }
        let d = Dataset::new(base.names.clone(), values, 0).unwrap();
        let model = parse_model_text(crate::model::demo_full_text()).unwrap();
        let report = screen_report(&d, &model).unwrap();
        assert!(report.outliers.iter().any(|o| o.flagged));
        assert_eq!(report.vif.len(), 3);
    }

    #[test]
    fn unknown_model_variable_rejected() {
        let target = demo_matrix();
        let d = generate_synthetic(&target, 50, 1, false).unwrap();
        let model = parse_model_text("var X1 Q\npath X1 -> Q\n").unwrap();
        assert!(matches!(
            screen_report(&d, &model).unwrap_err(),
            Error::UnknownVariable(_)
        ));
    }
}
