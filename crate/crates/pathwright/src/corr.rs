//! Correlation matrices and the line-based summary file format.

use std::collections::HashSet;
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Symmetric Pearson correlation matrix with the sample size it summarizes.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    pub names: Vec<String>,
    pub r: DMatrix<f64>,
    pub n: usize,
    /// Smallest eigenvalue when it falls in the warn band [-1e-4, -1e-8).
    /// Published 3-decimal matrices are often slightly indefinite.
    pub psd_warning: Option<f64>,
}

impl CorrelationMatrix {
    /// Validates symmetry (1e-6 on input, then symmetrized), unit diagonal,
    /// entry bounds, and near-positive-semi-definiteness.
    pub fn new(names: Vec<String>, r: DMatrix<f64>, n: usize) -> Result<Self> {
        let p = names.len();
        if r.nrows() != p || r.ncols() != p {
            return Err(Error::InvalidArgument(format!(
                "matrix is {}x{} but {p} names were given",
                r.nrows(),
                r.ncols()
            )));
        }
        let mut seen = HashSet::new();
        for name in &names {
            if !seen.insert(name.clone()) {
                return Err(Error::DuplicateName(name.clone()));
            }
        }
        for i in 0..p {
            if (r[(i, i)] - 1.0).abs() > 1e-12 {
                return Err(Error::BadDiagonal(i, r[(i, i)]));
            }
            for j in 0..p {
                if r[(i, j)].abs() > 1.0 + 1e-12 {
                    return Err(Error::EntryOutOfRange(i, j, r[(i, j)]));
                }
                if j > i && (r[(i, j)] - r[(j, i)]).abs() > 1e-6 {
                    return Err(Error::Asymmetric(i, j, r[(i, j)], r[(j, i)]));
                }
            }
        }
        let mut r = r;
        for i in 0..p {
            r[(i, i)] = 1.0;
            for j in 0..i {
                let avg = 0.5 * (r[(i, j)] + r[(j, i)]);
                r[(i, j)] = avg;
                r[(j, i)] = avg;
            }
        }
        let min_eig = r
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -1e-4 {
            return Err(Error::NotPositiveSemiDefinite(min_eig));
        }
        let psd_warning = (min_eig < -1e-8).then_some(min_eig);
        Ok(Self {
            names,
            r,
            n,
            psd_warning,
        })
    }

    pub fn p(&self) -> usize {
        self.names.len()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.r[(i, j)]
    }

    /// Submatrix over the given variable names, in the given order.
    pub fn submatrix(&self, names: &[String]) -> Result<CorrelationMatrix> {
        let idx: Vec<usize> = names
            .iter()
            .map(|n| self.index_of(n))
            .collect::<Result<_>>()?;
        let k = idx.len();
        let sub = DMatrix::from_fn(k, k, |a, b| self.r[(idx[a], idx[b])]);
        CorrelationMatrix::new(names.to_vec(), sub, self.n)
    }
}

/// Loads the line-based correlation format:
///
/// ```text
/// n 44
/// vars X1 X2 X3 Y
/// matrix
/// 1 .804 -.469 .225
/// ...
/// ```
///
/// `#` starts a comment line.
pub fn load_correlation(path: impl AsRef<Path>) -> Result<CorrelationMatrix> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_correlation(&text)
}

pub fn parse_correlation(text: &str) -> Result<CorrelationMatrix> {
    let mut n: Option<usize> = None;
    let mut names: Vec<String> = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut in_matrix = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse {
            line: lineno + 1,
            message,
        };
        if in_matrix {
            let row: Vec<f64> = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<f64>()
                        .map_err(|_| err(format!("bad matrix entry '{tok}'")))
                })
                .collect::<Result<_>>()?;
            if row.len() != names.len() {
                return Err(err(format!(
                    "matrix row has {} entries, expected {}",
                    row.len(),
                    names.len()
                )));
            }
            rows.push(row);
            continue;
        }
        let mut toks = line.split_whitespace();
        match toks.next().unwrap() {
            "n" => {
                let v = toks
                    .next()
                    .ok_or_else(|| err("expected 'n <count>'".into()))?;
                n = Some(
                    v.parse()
                        .map_err(|_| err(format!("bad sample size '{v}'")))?,
                );
            }
            "vars" => {
                names = toks.map(str::to_string).collect();
                if names.is_empty() {
                    return Err(err("'vars' line names no variables".into()));
                }
            }
            "matrix" => {
                if names.is_empty() {
                    return Err(err("'matrix' before 'vars'".into()));
                }
                in_matrix = true;
            }
            other => return Err(err(format!("unknown directive '{other}'"))),
        }
    }
    let n = n.ok_or(Error::MissingSampleSize)?;
    if rows.len() != names.len() {
        return Err(Error::Parse {
            line: 0,
            message: format!("expected {} matrix rows, found {}", names.len(), rows.len()),
        });
    }
    let p = names.len();
    let r = DMatrix::from_fn(p, p, |i, j| rows[i][j]);
    CorrelationMatrix::new(names, r, n)
}

/// The published 4-variable matrix used by the fixture files and tests.
pub fn demo_matrix() -> CorrelationMatrix {
    let names = ["X1", "X2", "X3", "Y"].map(str::to_string).to_vec();
    #[rustfmt::skip]
    let r = DMatrix::from_row_slice(4, 4, &[
        1.0,    0.804, -0.469,  0.225,
        0.804,  1.0,   -0.613,  0.276,
        -0.469, -0.613, 1.0,   -0.493,
        0.225,  0.276, -0.493,  1.0,
    ]);
    CorrelationMatrix::new(names, r, 44).expect("demo matrix is valid")
}
