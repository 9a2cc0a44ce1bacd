//! Thin wrappers over the dense decompositions the toolkit needs.

use nalgebra::linalg::SVD;
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

const SVD_MAX_ITERS: usize = 10_000;

/// Squared singular values of `m`, sorted descending. The output has
/// `min(rows, cols)` entries.
pub fn squared_singular_values(m: &CMatrix) -> Result<Vec<f64>> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Err(Error::Numeric("decomposition of an empty matrix".into()));
    }
    let svd = SVD::try_new(m.clone(), false, false, f64::EPSILON, SVD_MAX_ITERS)
        .ok_or_else(|| Error::Numeric("singular value decomposition did not converge".into()))?;
    let mut values: Vec<f64> = svd.singular_values.iter().map(|s| s * s).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("non-finite singular value".into()));
    }
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
