//! Seeded synthetic datasets with a prescribed correlation structure.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::corr::CorrelationMatrix;
use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Symmetric PSD square root with small negative eigenvalues clamped to zero.
fn psd_sqrt(r: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let eig = r.clone().symmetric_eigen();
    let min = eig
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    if min < -1e-8 {
        return Err(Error::NotPositiveSemiDefinite(min));
    }
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| l.max(0.0).sqrt()));
    Ok(&eig.eigenvectors * d * eig.eigenvectors.transpose())
}

/// Generates an n x p dataset whose correlation structure follows `target`.
///
/// In `exact` mode the sample correlation matrix equals the target to within
/// floating point: the seeded normal draws are centered, orthonormalized so
/// the sample covariance is the identity, then recolored through the PSD
/// square root of the target. Otherwise rows are i.i.d. multivariate normal
/// with the target as population correlation. Deterministic per seed.
pub fn generate_synthetic(
    target: &CorrelationMatrix,
    n: usize,
    seed: u64,
    exact: bool,
) -> Result<Dataset> {
    let p = target.p();
    if exact && n <= p {
        return Err(Error::InsufficientN { n, required: p });
    }
    if n < 3 {
        return Err(Error::TooFewRows(n));
    }
    let sqrt = psd_sqrt(&target.r)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut z = DMatrix::from_fn(n, p, |_, _| StandardNormal.sample(&mut rng));
    if exact {
        center_columns(&mut z);
        orthonormalize(&mut z)?;
    }
    let values = z * sqrt;
    Dataset::new(target.names.clone(), values, 0)
}

fn center_columns(m: &mut DMatrix<f64>) {
    let n = m.nrows() as f64;
    for j in 0..m.ncols() {
        let mean = m.column(j).sum() / n;
        for i in 0..m.nrows() {
            m[(i, j)] -= mean;
        }
    }
}

/// Modified Gram-Schmidt (two passes) scaling columns so the n-1 denominator
/// sample covariance is exactly the identity.
fn orthonormalize(m: &mut DMatrix<f64>) -> Result<()> {
    let scale = ((m.nrows() - 1) as f64).sqrt();
    for j in 0..m.ncols() {
        for _ in 0..2 {
            for k in 0..j {
                let proj = m.column(j).dot(&m.column(k)) / (scale * scale);
                let prev = m.column(k).into_owned();
                for i in 0..m.nrows() {
                    m[(i, j)] -= proj * prev[i];
                }
            }
        }
        let norm = m.column(j).norm();
        if norm < 1e-10 {
            return Err(Error::CollinearColumns);
        }
        let f = scale / norm;
        for i in 0..m.nrows() {
            m[(i, j)] *= f;
        }
    }
    Ok(())
}
