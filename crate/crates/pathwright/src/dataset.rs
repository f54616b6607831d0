//! Raw dataset ingestion, Pearson correlation, and standardization.

use std::collections::HashSet;
use std::path::Path;

use nalgebra::DMatrix;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::corr::CorrelationMatrix;
use crate::error::{Error, Result};

/// Complete-case data matrix with named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub names: Vec<String>,
    /// n x p, row per observation.
    pub values: DMatrix<f64>,
    pub n: usize,
    pub dropped_rows: usize,
}

impl Dataset {
    pub fn new(names: Vec<String>, values: DMatrix<f64>, dropped_rows: usize) -> Result<Self> {
        let n = values.nrows();
        if n < 3 {
            return Err(Error::TooFewRows(n));
        }
        if names.len() != values.ncols() || names.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "{} names for {} columns (need p >= 2)",
                names.len(),
                values.ncols()
            )));
        }
        let mut seen = HashSet::new();
        for name in &names {
            if name.is_empty() || name.chars().any(char::is_whitespace) {
                return Err(Error::InvalidName(name.clone()));
            }
            if !seen.insert(name.clone()) {
                return Err(Error::DuplicateName(name.clone()));
            }
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(
                "dataset contains non-finite values".into(),
            ));
        }
        Ok(Self {
            names,
            values,
            n,
            dropped_rows,
        })
    }

    pub fn p(&self) -> usize {
        self.names.len()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.values.column(j).iter().cloned().collect()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }
}

/// Per-variable descriptive statistics (n-1 denominator for sd).
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct SummaryStats {
    pub name: String,
    pub mean: f64,
    pub sd: f64,
    pub min: f64,
    pub max: f64,
    pub range: f64,
}

pub fn summary_stats(d: &Dataset) -> Vec<SummaryStats> {
    (0..d.p())
        .map(|j| {
            let col = d.values.column(j);
            let n = d.n as f64;
            let mean = col.sum() / n;
            let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
            let min = col.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = col.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            SummaryStats {
                name: d.names[j].clone(),
                mean,
                sd: var.sqrt(),
                min,
                max,
                range: max - min,
            }
        })
        .collect()
}

/// Loads a numeric CSV with a header row. Rows containing a missing token or
/// a non-numeric cell are listwise-deleted and counted.
pub fn load_dataset(path: impl AsRef<Path>, missing_tokens: &[String]) -> Result<Dataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_dataset(&text, missing_tokens)
}

pub fn parse_dataset(text: &str, missing_tokens: &[String]) -> Result<Dataset> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "empty file".into(),
    })?;
    let names: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
    let p = names.len();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut dropped = 0usize;
    for (lineno, line) in lines {
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != p {
            return Err(Error::NonRectangular(lineno + 1, cells.len(), p));
        }
        let mut row = Vec::with_capacity(p);
        let mut complete = true;
        for cell in &cells {
            if missing_tokens.iter().any(|t| t == cell) {
                complete = false;
                break;
            }
            match cell.parse::<f64>() {
                Ok(v) if v.is_finite() => row.push(v),
                _ => {
                    complete = false;
                    break;
                }
            }
        }
        if complete {
            rows.push(row);
        } else {
            dropped += 1;
        }
    }
    if rows.len() < 3 {
        return Err(Error::TooFewRows(rows.len()));
    }
    let values = DMatrix::from_fn(rows.len(), p, |i, j| rows[i][j]);
    Dataset::new(names, values, dropped)
}

pub fn default_missing_tokens() -> Vec<String> {
    vec![String::new(), "NA".to_string()]
}

fn column_moments(d: &Dataset, j: usize) -> Result<(f64, f64)> {
    let col = d.values.column(j);
    let n = d.n as f64;
    let mean = col.sum() / n;
    let ss = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>();
    if ss <= 0.0 {
        return Err(Error::ConstantVariable(d.names[j].clone()));
    }
    Ok((mean, (ss / (n - 1.0)).sqrt()))
}

fn pearson_pair(d: &Dataset, i: usize, j: usize) -> f64 {
    let (a, b) = (d.values.column(i), d.values.column(j));
    let n = d.n as f64;
    let (ma, mb) = (a.sum() / n, b.sum() / n);
    let mut cov = 0.0;
    let mut sa = 0.0;
    let mut sb = 0.0;
    for k in 0..d.n {
        let (da, db) = (a[k] - ma, b[k] - mb);
        cov += da * db;
        sa += da * da;
        sb += db * db;
    }
    cov / (sa.sqrt() * sb.sqrt())
}

/// Sequential Pearson matrix; reference path for the benches.
pub fn pearson_matrix_serial(d: &Dataset) -> Result<CorrelationMatrix> {
    for j in 0..d.p() {
        column_moments(d, j)?;
    }
    let p = d.p();
    let pairs: Vec<((usize, usize), f64)> = upper_pairs(p)
        .into_iter()
        .map(|(i, j)| ((i, j), pearson_pair(d, i, j)))
        .collect();
    assemble(d, &pairs)
}

/// Sample Pearson correlation matrix of a dataset.
pub fn pearson_matrix(d: &Dataset) -> Result<CorrelationMatrix> {
    for j in 0..d.p() {
        column_moments(d, j)?;
    }
    let p = d.p();
    #[cfg(feature = "parallel")]
    let pairs: Vec<((usize, usize), f64)> = upper_pairs(p)
        .into_par_iter()
        .map(|(i, j)| ((i, j), pearson_pair(d, i, j)))
        .collect();
    #[cfg(not(feature = "parallel"))]
    let pairs: Vec<((usize, usize), f64)> = upper_pairs(p)
        .into_iter()
        .map(|(i, j)| ((i, j), pearson_pair(d, i, j)))
        .collect();
    assemble(d, &pairs)
}

fn upper_pairs(p: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(p * (p - 1) / 2);
    for i in 0..p {
        for j in i + 1..p {
            out.push((i, j));
        }
    }
    out
}

fn assemble(d: &Dataset, pairs: &[((usize, usize), f64)]) -> Result<CorrelationMatrix> {
    let p = d.p();
    let mut r = DMatrix::identity(p, p);
    for &((i, j), v) in pairs {
        // clamp fp overshoot on perfectly collinear columns
        let v = v.clamp(-1.0, 1.0);
        r[(i, j)] = v;
        r[(j, i)] = v;
    }
    CorrelationMatrix::new(d.names.clone(), r, d.n)
}

/// Centers and scales every column to mean 0, sd 1 (n-1 denominator).
pub fn standardize(d: &Dataset) -> Result<Dataset> {
    let mut values = d.values.clone();
    for j in 0..d.p() {
        let (mean, sd) = column_moments(d, j)?;
        for i in 0..d.n {
            values[(i, j)] = (values[(i, j)] - mean) / sd;
        }
    }
    Dataset::new(d.names.clone(), values, d.dropped_rows)
}

/// Cohen-style strength bands on |r|, half-open from below.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strength {
    Negligible,
    Small,
    Medium,
    Large,
}

impl std::fmt::Display for Strength {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Strength::Negligible => "negligible",
            Strength::Small => "small",
            Strength::Medium => "medium",
            Strength::Large => "large",
        };
        f.write_str(s)
    }
}

pub fn strength_label(r: f64) -> Strength {
    let a = r.abs();
    debug_assert!(a <= 1.0 + 1e-12);
    if a < 0.1 {
        Strength::Negligible
    } else if a < 0.3 {
        Strength::Small
    } else if a < 0.5 {
        Strength::Medium
    } else {
        Strength::Large
    }
}
