use crate::config::SolverConfig;
use crate::error::{DenoiseError, Result};
use crate::image::Image;
use crate::numerics::CgOutcome;
use crate::patches::PatchGrid;
use crate::trace::{RunTrace, TraceRecorder};

use super::{
    init_state, solve_image_block, update_bregman, update_codes_ista, update_decoder,
    update_encoder, AutoencoderState,
};

/// Image block under the Euclidean data term.
///
/// Returns the CG outcome; its `solution` is the new estimate.
pub fn update_image_gaussian(
    state: &AutoencoderState,
    noisy: &Image,
    cfg: &SolverConfig,
) -> Result<CgOutcome> {
    noisy.check_same_dims(&state.estimate)?;
    let grid = PatchGrid::for_image(&cfg.patch, noisy)?;
    solve_image_block(state, &grid, 1.0, noisy, cfg)
}

/// Full split objective
/// `|x - x_hat|^2 + lambda sum (|P_i x_hat - W' z_i|^2 + mu |z_i|_1)
///   + gamma sum |z_i - phi(W P_i x_hat) - b_i|^2`.
pub fn objective_gaussian(
    state: &AutoencoderState,
    noisy: &Image,
    cfg: &SolverConfig,
) -> Result<f64> {
    let grid = PatchGrid::for_image(&cfg.patch, &state.estimate)?;
    let data = noisy.zip_map(&state.estimate, |a, b| a - b)?.norm_sq();
    Ok(data + model_terms(state, &grid, cfg)?)
}

/// Everything in the split objective except the data term.
pub(crate) fn model_terms(
    state: &AutoencoderState,
    grid: &PatchGrid,
    cfg: &SolverConfig,
) -> Result<f64> {
    let patches = grid.extract(&state.estimate)?;
    state.check_shapes(&patches)?;
    let fit = (&patches.data - &state.decoder * &state.codes).norm_squared();
    let l1 = state.codes.lp_norm(1);
    let split = (&state.codes - state.encode(&patches, cfg) - &state.bregman).norm_squared();
    Ok(cfg.lambda * (fit + cfg.mu * l1) + cfg.gamma * split)
}

pub fn denoise_gaussian(noisy: &Image, cfg: &SolverConfig) -> Result<(Image, RunTrace)> {
    denoise_gaussian_with_reference(noisy, cfg, None)
}

/// Runs decoder, encoder, image, code and Bregman updates until the relative
/// cost change falls below `rel_tol` or `max_outer_iters` is reached.
///
/// With a clean `reference` the trace carries a PSNR per iteration. The
/// returned image is clipped to `[0, 1]`.
pub fn denoise_gaussian_with_reference(
    noisy: &Image,
    cfg: &SolverConfig,
    reference: Option<&Image>,
) -> Result<(Image, RunTrace)> {
    if let Some(r) = reference {
        r.check_same_dims(noisy)?;
    }
    if !noisy.is_finite() {
        return Err(DenoiseError::NonFinite("noisy input".into()));
    }
    let grid = PatchGrid::for_image(&cfg.patch, noisy)?;
    let mut state = init_state(noisy, cfg)?;
    let mut recorder = TraceRecorder::new(reference, cfg.rel_tol);

    for _ in 0..cfg.max_outer_iters {
        let patches = grid.extract(&state.estimate)?;
        state.decoder = update_decoder(&state, &patches, cfg)?;
        state.encoder = update_encoder(&state, &patches, cfg)?;

        let outcome = solve_image_block(&state, &grid, 1.0, noisy, cfg)?;
        if !outcome.converged {
            log::warn!(
                "image update: CG stopped at relative residual {:.3e} after {} iterations",
                outcome.relative_residual,
                outcome.iterations
            );
            recorder.cg_warning();
        }
        state.estimate = outcome.solution;

        let patches = grid.extract(&state.estimate)?;
        state.codes = update_codes_ista(&state, &patches, cfg)?;
        state.bregman = update_bregman(&state, &patches, cfg)?;
        state.check_finite("outer iteration")?;

        let cost = objective_gaussian(&state, noisy, cfg)?;
        if !cost.is_finite() {
            return Err(DenoiseError::NonFinite("objective".into()));
        }
        if recorder.record(cost, &state.estimate) {
            break;
        }
    }

    Ok((state.estimate.clipped(), recorder.finish()))
}
