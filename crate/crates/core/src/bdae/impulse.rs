//! Impulse-noise variant: the Euclidean data term is replaced by
//! `|x - x_hat|_1`, split through a proxy `y = x - x_hat` with its own
//! relaxation variable `c`.

use crate::config::SolverConfig;
use crate::error::{DenoiseError, Result};
use crate::image::Image;
use crate::numerics::{soft_threshold_scalar, CgOutcome};
use crate::patches::PatchGrid;
use crate::trace::{RunTrace, TraceRecorder};

use super::gaussian::model_terms;
use super::{
    init_state, solve_image_block, update_bregman, update_codes_ista, update_decoder,
    update_encoder, AutoencoderState,
};

#[derive(Clone, Debug)]
pub struct ImpulseState {
    pub base: AutoencoderState,
    /// Proxy for the residual `x - x_hat`.
    pub y: Image,
    /// Relaxation variable of the residual split.
    pub c: Image,
    /// Weight of `|y - x + x_hat - c|^2`.
    pub epsilon_fidelity: f64,
}

impl ImpulseState {
    pub fn new(base: AutoencoderState, epsilon_fidelity: f64) -> Result<Self> {
        if !(epsilon_fidelity > 0.0) || !epsilon_fidelity.is_finite() {
            return Err(DenoiseError::InvalidConfig(format!(
                "fidelity weight must be positive, got {epsilon_fidelity}"
            )));
        }
        let (h, w) = base.estimate.dims();
        Ok(Self {
            base,
            y: Image::zeros(h, w),
            c: Image::zeros(h, w),
            epsilon_fidelity,
        })
    }

    fn residual_target(&self, noisy: &Image) -> Result<Image> {
        // x - x_hat + c
        let mut r = noisy.zip_map(&self.base.estimate, |a, b| a - b)?;
        r.axpy(1.0, &self.c);
        Ok(r)
    }
}

/// `y = soft(x - x_hat + c, 1 / (2 eps))`, the exact minimizer of
/// `|y|_1 + eps |y - x + x_hat - c|^2`.
pub fn update_y(state: &ImpulseState, noisy: &Image) -> Result<Image> {
    let threshold = 0.5 / state.epsilon_fidelity;
    Ok(state
        .residual_target(noisy)?
        .map(|v| soft_threshold_scalar(v, threshold)))
}

/// Image block with data term `eps |x_hat - (x - y + c)|^2`.
pub fn update_image_impulse(
    state: &ImpulseState,
    noisy: &Image,
    cfg: &SolverConfig,
) -> Result<CgOutcome> {
    noisy.check_same_dims(&state.base.estimate)?;
    let grid = PatchGrid::for_image(&cfg.patch, noisy)?;
    let target = image_target(state, noisy)?;
    solve_image_block(&state.base, &grid, state.epsilon_fidelity, &target, cfg)
}

fn image_target(state: &ImpulseState, noisy: &Image) -> Result<Image> {
    let mut t = noisy.zip_map(&state.y, |a, b| a - b)?;
    t.axpy(1.0, &state.c);
    Ok(t)
}

/// `c <- c + (x - x_hat) - y`
pub fn update_c(state: &ImpulseState, noisy: &Image) -> Result<Image> {
    let mut c = state.c.clone();
    let violation = noisy
        .zip_map(&state.base.estimate, |a, b| a - b)?
        .zip_map(&state.y, |a, b| a - b)?;
    c.axpy(1.0, &violation);
    Ok(c)
}

/// `|y|_1 + eps |y - x + x_hat - c|^2` plus the autoencoder terms.
pub fn objective_impulse(state: &ImpulseState, noisy: &Image, cfg: &SolverConfig) -> Result<f64> {
    let grid = PatchGrid::for_image(&cfg.patch, &state.base.estimate)?;
    let target = state.residual_target(noisy)?;
    let l1: f64 = state.y.pixels().iter().map(|v| v.abs()).sum();
    let penalty = state.y.zip_map(&target, |a, b| a - b)?.norm_sq();
    Ok(l1 + state.epsilon_fidelity * penalty + model_terms(&state.base, &grid, cfg)?)
}

pub fn denoise_impulse(noisy: &Image, cfg: &SolverConfig, eps: f64) -> Result<(Image, RunTrace)> {
    denoise_impulse_with_reference(noisy, cfg, eps, None)
}

/// Same outer loop as the Gaussian solver with the image update replaced by
/// the `y` / `x_hat` / `c` sequence.
pub fn denoise_impulse_with_reference(
    noisy: &Image,
    cfg: &SolverConfig,
    eps: f64,
    reference: Option<&Image>,
) -> Result<(Image, RunTrace)> {
    if let Some(r) = reference {
        r.check_same_dims(noisy)?;
    }
    if !noisy.is_finite() {
        return Err(DenoiseError::NonFinite("noisy input".into()));
    }
    let grid = PatchGrid::for_image(&cfg.patch, noisy)?;
    let mut state = ImpulseState::new(init_state(noisy, cfg)?, eps)?;
    let mut recorder = TraceRecorder::new(reference, cfg.rel_tol);

    for _ in 0..cfg.max_outer_iters {
        let patches = grid.extract(&state.base.estimate)?;
        state.base.decoder = update_decoder(&state.base, &patches, cfg)?;
        state.base.encoder = update_encoder(&state.base, &patches, cfg)?;

        state.y = update_y(&state, noisy)?;
        let target = image_target(&state, noisy)?;
        let outcome = solve_image_block(&state.base, &grid, state.epsilon_fidelity, &target, cfg)?;
        if !outcome.converged {
            log::warn!(
                "image update: CG stopped at relative residual {:.3e} after {} iterations",
                outcome.relative_residual,
                outcome.iterations
            );
            recorder.cg_warning();
        }
        state.base.estimate = outcome.solution;

        let patches = grid.extract(&state.base.estimate)?;
        state.base.codes = update_codes_ista(&state.base, &patches, cfg)?;
        state.base.bregman = update_bregman(&state.base, &patches, cfg)?;
        state.c = update_c(&state, noisy)?;
        state.base.check_finite("outer iteration")?;
        if !(state.y.is_finite() && state.c.is_finite()) {
            return Err(DenoiseError::NonFinite("impulse split variables".into()));
        }

        let cost = objective_impulse(&state, noisy, cfg)?;
        if !cost.is_finite() {
            return Err(DenoiseError::NonFinite("objective".into()));
        }
        if recorder.record(cost, &state.base.estimate) {
            break;
        }
    }

    Ok((state.base.estimate.clipped(), recorder.finish()))
}
