use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{DenoiseError, Result};

/// Tikhonov weight for the least-squares solves.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RidgeParams {
    pub epsilon: f64,
}

impl Default for RidgeParams {
    fn default() -> Self {
        Self { epsilon: 1e-6 }
    }
}

/// Minimizer of `|A - W B|_F^2 + eps |W|_F^2`, i.e. `A B^T (B B^T + eps I)^-1`.
pub fn ridge_solve_left(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    p: RidgeParams,
) -> Result<DMatrix<f64>> {
    if a.ncols() != b.ncols() {
        return Err(DenoiseError::ShapeMismatch(format!(
            "ridge solve: A has {} columns, B has {}",
            a.ncols(),
            b.ncols()
        )));
    }
    if !(p.epsilon >= 0.0) {
        return Err(DenoiseError::InvalidConfig(format!(
            "ridge epsilon must be nonnegative, got {}",
            p.epsilon
        )));
    }
    let k = b.nrows();
    let mut gram = b * b.transpose();
    for i in 0..k {
        gram[(i, i)] += p.epsilon;
    }
    // W G = A B^T with G symmetric, so G W^T = (A B^T)^T = B A^T.
    let rhs = b * a.transpose();
    let wt = match gram.clone().cholesky() {
        Some(chol) => chol.solve(&rhs),
        None => gram
            .lu()
            .solve(&rhs)
            .ok_or_else(|| DenoiseError::Singular("B B^T + eps I is not invertible".into()))?,
    };
    if wt.iter().any(|v| !v.is_finite()) {
        return Err(DenoiseError::Singular(
            "ridge solve produced non-finite entries".into(),
        ));
    }
    Ok(wt.transpose())
}

/// Largest singular value by power iteration on `M^T M`.
pub fn spectral_norm(m: &DMatrix<f64>, max_iters: usize, tol: f64) -> f64 {
    let n = m.ncols();
    if n == 0 || m.nrows() == 0 {
        return 0.0;
    }
    // deterministic start with no exact orthogonality to typical singular vectors
    let mut v = DVector::from_fn(n, |i, _| 1.0 + 0.01 * (i as f64 + 1.0).sqrt());
    v /= v.norm();
    let mut sigma_sq = 0.0;
    for _ in 0..max_iters {
        let mut w = m.tr_mul(&(m * &v));
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        w /= norm;
        let converged = (norm - sigma_sq).abs() <= tol * norm;
        sigma_sq = norm;
        v = w;
        if converged {
            break;
        }
    }
    sigma_sq.sqrt()
}
