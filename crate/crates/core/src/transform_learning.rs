//! Sparsifying transform learning denoiser, used as the comparison baseline.
//!
//! Alternates exact top-`tau` sparse coding, the closed-form transform update
//! and a least-squares image update.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{DenoiseError, Result};
use crate::image::Image;
use crate::numerics::{cg_solve, dct_matrix, hard_threshold_top_tau, kron, CgOutcome};
use crate::patches::{PatchConfig, PatchGrid, PatchMatrix};
use crate::trace::{RunTrace, TraceRecorder};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransformConfig {
    pub patch: PatchConfig,
    /// Nonzeros kept per code column; `None` means `ceil(0.1 * patch_dim)`.
    pub tau: Option<usize>,
    /// Transform regularizer weight as a multiple of the mean squared patch
    /// norm of the noisy input; ignored when `tl_lambda` is set.
    pub lambda_scale: f64,
    pub tl_lambda: Option<f64>,
    /// Weight of the patch sparsification term in the image update.
    pub coupling: f64,
    /// Relative weight of `|T|_F^2` against `-log|det T|`.
    pub eps_reg: f64,
    pub max_outer_iters: usize,
    pub rel_tol: f64,
    pub cg_tol: f64,
    pub cg_maxit: usize,
}

impl Default for TransformConfig {
    fn default() -> Self {
        Self {
            patch: PatchConfig::default(),
            tau: None,
            lambda_scale: 0.2,
            tl_lambda: None,
            coupling: 0.5,
            eps_reg: 1.0,
            max_outer_iters: 40,
            rel_tol: 1e-4,
            cg_tol: 1e-6,
            cg_maxit: 200,
        }
    }
}

impl TransformConfig {
    pub fn tau_for(&self, dim: usize) -> usize {
        self.tau
            .unwrap_or_else(|| (dim as f64 * 0.1).ceil() as usize)
            .min(dim)
    }

    pub fn validate(&self) -> Result<()> {
        self.patch.validate()?;
        for (name, v) in [
            ("coupling", self.coupling),
            ("lambda_scale", self.lambda_scale),
            ("rel_tol", self.rel_tol),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(DenoiseError::InvalidConfig(format!(
                    "{name} must be nonnegative, got {v}"
                )));
            }
        }
        if !(self.eps_reg > 0.0) {
            return Err(DenoiseError::InvalidConfig(
                "eps_reg must be positive".into(),
            ));
        }
        if let Some(l) = self.tl_lambda {
            if !(l > 0.0) {
                return Err(DenoiseError::InvalidConfig(
                    "tl_lambda must be positive".into(),
                ));
            }
        }
        if !(self.cg_tol > 0.0) {
            return Err(DenoiseError::InvalidConfig(
                "cg_tol must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct TransformState {
    /// Square analysis transform `T`.
    pub transform: DMatrix<f64>,
    pub codes: DMatrix<f64>,
    pub estimate: Image,
    pub tl_lambda: f64,
    pub tau: usize,
    pub coupling: f64,
    pub eps_reg: f64,
}

/// Column-wise best `tau`-sparse approximation of `T X`.
pub fn tl_sparse_code(
    transform: &DMatrix<f64>,
    patches: &PatchMatrix,
    tau: usize,
) -> Result<DMatrix<f64>> {
    if transform.ncols() != patches.dim() {
        return Err(DenoiseError::ShapeMismatch(format!(
            "transform has {} columns, patches have dimension {}",
            transform.ncols(),
            patches.dim()
        )));
    }
    let mut coeffs = transform * &patches.data;
    for mut col in coeffs.column_iter_mut() {
        let kept = hard_threshold_top_tau(col.as_slice(), tau);
        col.copy_from_slice(&kept);
    }
    Ok(coeffs)
}

/// `|T X - Z|_F^2 + lambda (eps |T|_F^2 - log|det T|)`.
///
/// With `eps = 1` this is the transform learning objective with unit weight
/// on the Frobenius term.
pub fn tl_objective(
    transform: &DMatrix<f64>,
    x: &DMatrix<f64>,
    z: &DMatrix<f64>,
    lambda: f64,
    eps: f64,
) -> f64 {
    let fit = (transform * x - z).norm_squared();
    fit + lambda * (eps * transform.norm_squared() - log_abs_det(transform))
}

/// `log|det M|` from the LU factors; `-inf` for singular matrices.
pub fn log_abs_det(m: &DMatrix<f64>) -> f64 {
    let u = m.clone().lu().u();
    u.diagonal().iter().map(|d| d.abs().ln()).sum()
}

/// Closed-form minimizer of [`tl_objective`] over square `T`:
///
/// `X X^T + lambda eps I = L L^T`, `L^-1 X Z^T = U S V^T`,
/// `T = 0.5 V (S + (S^2 + 2 lambda I)^(1/2)) U^T L^-1`.
pub fn tl_update_transform(
    x: &DMatrix<f64>,
    z: &DMatrix<f64>,
    lambda: f64,
    eps: f64,
) -> Result<DMatrix<f64>> {
    let n = x.nrows();
    if z.shape() != (n, x.ncols()) {
        return Err(DenoiseError::ShapeMismatch(format!(
            "codes {:?} do not match patches {:?} for a square transform",
            z.shape(),
            x.shape()
        )));
    }
    if !(lambda > 0.0) {
        return Err(DenoiseError::InvalidConfig(format!(
            "transform lambda must be positive, got {lambda}"
        )));
    }
    let mut gram = x * x.transpose();
    for i in 0..n {
        gram[(i, i)] += lambda * eps;
    }
    let chol = gram.cholesky().ok_or_else(|| {
        DenoiseError::Singular("X X^T + lambda eps I is not positive definite".into())
    })?;
    let l = chol.l();
    let cross = x * z.transpose();
    let whitened = l
        .solve_lower_triangular(&cross)
        .ok_or_else(|| DenoiseError::Singular("Cholesky factor is singular".into()))?;
    let svd = whitened.svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V^T");
    let gains = svd
        .singular_values
        .map(|s| 0.5 * (s + (s * s + 2.0 * lambda).sqrt()));
    // U^T L^-1 = (L^-T U)^T
    let l_inv_t_u = l
        .transpose()
        .solve_upper_triangular(&u)
        .ok_or_else(|| DenoiseError::Singular("Cholesky factor is singular".into()))?;
    let mut scaled = v_t.transpose();
    for (j, g) in gains.iter().enumerate() {
        scaled.column_mut(j).scale_mut(*g);
    }
    let t = scaled * l_inv_t_u.transpose();
    if t.iter().any(|v| !v.is_finite()) {
        return Err(DenoiseError::NonFinite("transform update".into()));
    }
    Ok(t)
}

/// Image update `(I + k sum P_i^T T^T T P_i) x = x_noisy + k sum P_i^T T^T z_i`.
pub fn tl_update_image(
    state: &TransformState,
    noisy: &Image,
    cfg: &TransformConfig,
) -> Result<CgOutcome> {
    noisy.check_same_dims(&state.estimate)?;
    let grid = PatchGrid::for_image(&cfg.patch, noisy)?;
    tl_solve_image(state, &grid, noisy, cfg)
}

fn tl_solve_image(
    state: &TransformState,
    grid: &PatchGrid,
    noisy: &Image,
    cfg: &TransformConfig,
) -> Result<CgOutcome> {
    let coupling = state.coupling;
    let gram = state.transform.tr_mul(&state.transform) * coupling;
    let apply = |x: &Image| -> Image {
        let patches = grid.extract(x).expect("grid dims");
        let mut out = grid
            .aggregate_matrix(&(&gram * &patches.data))
            .expect("grid dims");
        out.axpy(1.0, x);
        out
    };
    let mut rhs = grid.aggregate_matrix(&(state.transform.tr_mul(&state.codes) * coupling))?;
    rhs.axpy(1.0, noisy);
    let outcome = cg_solve(apply, &rhs, Some(&state.estimate), cfg.cg_tol, cfg.cg_maxit);
    if !outcome.solution.is_finite() {
        return Err(DenoiseError::NonFinite("transform image update".into()));
    }
    Ok(outcome)
}

/// `|x - x_hat|^2 + k (|T X - Z|^2 + lambda (eps |T|^2 - log|det T|))`
pub fn tl_cost(state: &TransformState, grid: &PatchGrid, noisy: &Image) -> Result<f64> {
    let patches = grid.extract(&state.estimate)?;
    let data = noisy.zip_map(&state.estimate, |a, b| a - b)?.norm_sq();
    let model = tl_objective(
        &state.transform,
        &patches.data,
        &state.codes,
        state.tl_lambda,
        state.eps_reg,
    );
    Ok(data + state.coupling * model)
}

pub fn tl_init_state(noisy: &Image, cfg: &TransformConfig) -> Result<TransformState> {
    cfg.validate()?;
    let grid = PatchGrid::for_image(&cfg.patch, noisy)?;
    let patches = grid.extract(noisy)?;
    let dim = cfg.patch.patch_dim();
    let dct = dct_matrix(cfg.patch.patch_size);
    let transform = kron(&dct, &dct);
    let tl_lambda = match cfg.tl_lambda {
        Some(l) => l,
        None => {
            let mean_energy = patches.data.norm_squared() / patches.count() as f64;
            (cfg.lambda_scale * mean_energy).max(f64::MIN_POSITIVE)
        }
    };
    let tau = cfg.tau_for(dim);
    let codes = tl_sparse_code(&transform, &patches, tau)?;
    Ok(TransformState {
        transform,
        codes,
        estimate: noisy.clone(),
        tl_lambda,
        tau,
        coupling: cfg.coupling,
        eps_reg: cfg.eps_reg,
    })
}

pub fn tl_denoise(noisy: &Image, cfg: &TransformConfig) -> Result<(Image, RunTrace)> {
    tl_denoise_with_reference(noisy, cfg, None)
}

pub fn tl_denoise_with_reference(
    noisy: &Image,
    cfg: &TransformConfig,
    reference: Option<&Image>,
) -> Result<(Image, RunTrace)> {
    if let Some(r) = reference {
        r.check_same_dims(noisy)?;
    }
    let grid = PatchGrid::for_image(&cfg.patch, noisy)?;
    let mut state = tl_init_state(noisy, cfg)?;
    let mut recorder = TraceRecorder::new(reference, cfg.rel_tol);

    for _ in 0..cfg.max_outer_iters {
        let patches = grid.extract(&state.estimate)?;
        state.codes = tl_sparse_code(&state.transform, &patches, state.tau)?;
        state.transform =
            tl_update_transform(&patches.data, &state.codes, state.tl_lambda, state.eps_reg)?;

        let outcome = tl_solve_image(&state, &grid, noisy, cfg)?;
        if !outcome.converged {
            log::warn!(
                "transform image update: CG stopped at relative residual {:.3e}",
                outcome.relative_residual
            );
            recorder.cg_warning();
        }
        state.estimate = outcome.solution;

        let cost = tl_cost(&state, &grid, noisy)?;
        if !cost.is_finite() {
            return Err(DenoiseError::NonFinite("transform objective".into()));
        }
        if recorder.record(cost, &state.estimate) {
            break;
        }
    }
    Ok((state.estimate.clipped(), recorder.finish()))
}
