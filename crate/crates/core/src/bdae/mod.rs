//! Blind denoising autoencoder.
//!
//! An encoder `W`, decoder `W'` and per-patch codes `z_i` are learned from the
//! noisy image itself. The codes are a proxy for `phi(W P_i x)` tied to it by a
//! quadratic penalty with Bregman variables `b_i`; each outer iteration runs
//! block-exact updates for the decoder, the encoder, the image and the codes,
//! followed by the Bregman step.

mod gaussian;
mod impulse;

pub use gaussian::{
    denoise_gaussian, denoise_gaussian_with_reference, objective_gaussian, update_image_gaussian,
};
pub use impulse::{
    denoise_impulse, denoise_impulse_with_reference, objective_impulse, update_c,
    update_image_impulse, update_y, ImpulseState,
};

use nalgebra::{DMatrix, Dyn, QR};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::config::{BregmanUpdate, SolverConfig};
use crate::error::{DenoiseError, Result};
use crate::image::Image;
use crate::numerics::{
    build_init_transforms, cg_solve, ridge_solve_left, soft_threshold_scalar, spectral_norm,
    CgOutcome,
};
use crate::patches::{PatchGrid, PatchMatrix};

const POWER_ITERS: usize = 50;
const POWER_TOL: f64 = 1e-8;
const RANDOM_INIT_SEED: u64 = 0x5eed_0fa11;

/// Variables of the split objective.
#[derive(Clone, Debug)]
pub struct AutoencoderState {
    /// `W`, `hidden x patch_dim`.
    pub encoder: DMatrix<f64>,
    /// `W'`, `patch_dim x hidden`.
    pub decoder: DMatrix<f64>,
    /// `Z`, `hidden x count`, column `i` is `z_i`.
    pub codes: DMatrix<f64>,
    /// `B`, `hidden x count`, column `i` is `b_i`.
    pub bregman: DMatrix<f64>,
    pub estimate: Image,
}

impl AutoencoderState {
    pub fn is_finite(&self) -> bool {
        self.encoder.iter().all(|v| v.is_finite())
            && self.decoder.iter().all(|v| v.is_finite())
            && self.codes.iter().all(|v| v.is_finite())
            && self.bregman.iter().all(|v| v.is_finite())
            && self.estimate.is_finite()
    }

    fn check_finite(&self, stage: &str) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(DenoiseError::NonFinite(format!(
                "autoencoder state after {stage}"
            )))
        }
    }

    /// `phi(W X)` for the given patches.
    pub fn encode(&self, patches: &PatchMatrix, cfg: &SolverConfig) -> DMatrix<f64> {
        cfg.activation
            .apply_matrix(&(&self.encoder * &patches.data))
    }

    /// `phi^-1(Z - B)` with the activation's clamping.
    pub fn inverted_targets(&self, cfg: &SolverConfig) -> DMatrix<f64> {
        cfg.activation.invert_matrix(&(&self.codes - &self.bregman))
    }

    fn check_shapes(&self, patches: &PatchMatrix) -> Result<()> {
        let hidden = self.encoder.nrows();
        let dim = self.encoder.ncols();
        let ok = self.decoder.shape() == (dim, hidden)
            && self.codes.shape() == (hidden, patches.count())
            && self.bregman.shape() == (hidden, patches.count())
            && patches.dim() == dim;
        if ok {
            Ok(())
        } else {
            Err(DenoiseError::ShapeMismatch(format!(
                "encoder {:?}, decoder {:?}, codes {:?}, bregman {:?}, patches {}x{}",
                self.encoder.shape(),
                self.decoder.shape(),
                self.codes.shape(),
                self.bregman.shape(),
                patches.dim(),
                patches.count()
            )))
        }
    }
}

fn random_orthonormal_init(hidden: usize, dim: usize) -> (DMatrix<f64>, DMatrix<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_INIT_SEED);
    let tall = hidden.max(dim);
    let short = hidden.min(dim);
    let g = DMatrix::from_fn(tall, short, |_, _| StandardNormal.sample(&mut rng));
    let q = QR::<f64, Dyn, Dyn>::new(g).q();
    // q has orthonormal columns; transpose when the encoder is wide
    let encoder = if hidden >= dim { q } else { q.transpose() };
    let decoder = encoder.transpose();
    (encoder, decoder)
}

/// Starting point: DCT+Haar encoder, its half-transposed decoder, codes from
/// the encoder applied to the noisy patches and zero Bregman variables.
///
/// Widths other than twice the patch dimension fall back to a seeded random
/// orthonormal encoder.
pub fn init_state(noisy: &Image, cfg: &SolverConfig) -> Result<AutoencoderState> {
    cfg.validate()?;
    let grid = PatchGrid::for_image(&cfg.patch, noisy)?;
    let patches = grid.extract(noisy)?;
    let dim = cfg.patch.patch_dim();
    let hidden = cfg.hidden_units();
    let (encoder, decoder) = if hidden == 2 * dim {
        let init = build_init_transforms(cfg.patch.patch_size);
        (init.encoder, init.decoder)
    } else {
        log::warn!("hidden width {hidden} != 2 x {dim}; using a random orthonormal encoder");
        random_orthonormal_init(hidden, dim)
    };
    let codes = cfg.activation.apply_matrix(&(&encoder * &patches.data));
    let bregman = DMatrix::zeros(hidden, patches.count());
    Ok(AutoencoderState {
        encoder,
        decoder,
        codes,
        bregman,
        estimate: noisy.clone(),
    })
}

/// `sum_i |P_i x - W' z_i|^2`
pub fn decoder_objective(state: &AutoencoderState, patches: &PatchMatrix) -> f64 {
    (&patches.data - &state.decoder * &state.codes).norm_squared()
}

/// `sum_i |phi^-1(z_i - b_i) - W P_i x|^2`
pub fn encoder_objective(
    state: &AutoencoderState,
    patches: &PatchMatrix,
    cfg: &SolverConfig,
) -> f64 {
    (state.inverted_targets(cfg) - &state.encoder * &patches.data).norm_squared()
}

/// Decoder block: least squares fit of the patches from the current codes.
pub fn update_decoder(
    state: &AutoencoderState,
    patches: &PatchMatrix,
    cfg: &SolverConfig,
) -> Result<DMatrix<f64>> {
    state.check_shapes(patches)?;
    ridge_solve_left(&patches.data, &state.codes, cfg.ridge)
}

/// Encoder block: least squares map from patches to the inverted code targets.
pub fn update_encoder(
    state: &AutoencoderState,
    patches: &PatchMatrix,
    cfg: &SolverConfig,
) -> Result<DMatrix<f64>> {
    state.check_shapes(patches)?;
    ridge_solve_left(&state.inverted_targets(cfg), &patches.data, cfg.ridge)
}

/// Per-column code objective
/// `lambda |p - W' z|^2 + lambda mu |z|_1 + gamma |z - phi(W p) - b|^2`,
/// summed over columns.
pub fn code_objective(state: &AutoencoderState, patches: &PatchMatrix, cfg: &SolverConfig) -> f64 {
    code_objective_columns(state, &state.codes, patches, cfg)
        .iter()
        .sum()
}

pub fn code_objective_columns(
    state: &AutoencoderState,
    codes: &DMatrix<f64>,
    patches: &PatchMatrix,
    cfg: &SolverConfig,
) -> Vec<f64> {
    let fit = &patches.data - &state.decoder * codes;
    let split = codes - state.encode(patches, cfg) - &state.bregman;
    (0..codes.ncols())
        .map(|j| {
            cfg.lambda * fit.column(j).norm_squared()
                + cfg.lambda * cfg.mu * codes.column(j).lp_norm(1)
                + cfg.gamma * split.column(j).norm_squared()
        })
        .collect()
}

/// Step size constant of the code subproblem, `2 (lambda |W'|_2^2 + gamma)`.
pub fn code_lipschitz(state: &AutoencoderState, cfg: &SolverConfig) -> f64 {
    let sigma = spectral_norm(&state.decoder, POWER_ITERS, POWER_TOL);
    2.0 * (cfg.lambda * sigma * sigma + cfg.gamma)
}

/// Code block: `ista_iters` proximal gradient steps per column, warm-started
/// from the current codes.
pub fn update_codes_ista(
    state: &AutoencoderState,
    patches: &PatchMatrix,
    cfg: &SolverConfig,
) -> Result<DMatrix<f64>> {
    update_codes_ista_steps(state, patches, cfg, cfg.ista_iters)
}

pub fn update_codes_ista_steps(
    state: &AutoencoderState,
    patches: &PatchMatrix,
    cfg: &SolverConfig,
    steps: usize,
) -> Result<DMatrix<f64>> {
    state.check_shapes(patches)?;
    let lip = code_lipschitz(state, cfg);
    if !(lip > 0.0) {
        // both quadratic weights vanish: the block objective is identically zero
        return Ok(state.codes.clone());
    }
    let gram = state.decoder.tr_mul(&state.decoder);
    let correlation = state.decoder.tr_mul(&patches.data);
    let target = state.encode(patches, cfg) + &state.bregman;
    let step = 1.0 / lip;
    let threshold = cfg.lambda * cfg.mu * step;
    let two_lambda = 2.0 * cfg.lambda;
    let two_gamma = 2.0 * cfg.gamma;

    let mut z = state.codes.clone();
    for _ in 0..steps {
        let mut grad = &gram * &z;
        grad -= &correlation;
        grad *= two_lambda;
        grad.zip_zip_apply(&z, &target, |g, zi, ti| *g += two_gamma * (zi - ti));
        z.zip_apply(&grad, |zi, g| {
            *zi = soft_threshold_scalar(*zi - step * g, threshold)
        });
    }
    Ok(z)
}

/// Bregman step for the split `z_i = phi(W P_i x)`.
pub fn update_bregman(
    state: &AutoencoderState,
    patches: &PatchMatrix,
    cfg: &SolverConfig,
) -> Result<DMatrix<f64>> {
    state.check_shapes(patches)?;
    let encoded = state.encode(patches, cfg);
    Ok(match cfg.bregman_update {
        BregmanUpdate::Standard => &state.bregman + encoded - &state.codes,
        BregmanUpdate::Literal => &state.codes - encoded - &state.bregman,
    })
}

/// Solves the image block for a data term `fidelity |target - x|^2`:
///
/// `(f I + lambda sum P_i^T P_i + gamma sum P_i^T W^T W P_i) x
///   = f target + lambda sum P_i^T W' z_i + gamma sum P_i^T W^T phi^-1(z_i - b_i)`
///
/// The operator is applied matrix-free through extract/aggregate, warm-started
/// from the current estimate.
pub(crate) fn solve_image_block(
    state: &AutoencoderState,
    grid: &PatchGrid,
    fidelity: f64,
    target: &Image,
    cfg: &SolverConfig,
) -> Result<CgOutcome> {
    let overlap = grid.overlap_counts();
    let gram = state.encoder.tr_mul(&state.encoder) * cfg.gamma;
    let lambda = cfg.lambda;
    let apply = |x: &Image| -> Image {
        let mut out = x
            .zip_map(&overlap, |v, n| (fidelity + lambda * n) * v)
            .expect("grid dims");
        if cfg.gamma != 0.0 {
            let patches = grid.extract(x).expect("grid dims");
            let coupled = grid
                .aggregate_matrix(&(&gram * &patches.data))
                .expect("grid dims");
            out.axpy(1.0, &coupled);
        }
        out
    };

    let mut rhs_patches = &state.decoder * &state.codes * lambda;
    if cfg.gamma != 0.0 {
        rhs_patches += state.encoder.tr_mul(&state.inverted_targets(cfg)) * cfg.gamma;
    }
    let mut rhs = grid.aggregate_matrix(&rhs_patches)?;
    rhs.axpy(fidelity, target);

    let outcome = cg_solve(apply, &rhs, Some(&state.estimate), cfg.cg_tol, cfg.cg_maxit);
    if !outcome.solution.is_finite() {
        return Err(DenoiseError::NonFinite("image update".into()));
    }
    Ok(outcome)
}

/// Objective of the image block with the other variables fixed, for a data
/// term `fidelity |target - x|^2`.
pub fn image_block_objective(
    state: &AutoencoderState,
    grid: &PatchGrid,
    estimate: &Image,
    fidelity: f64,
    target: &Image,
    cfg: &SolverConfig,
) -> Result<f64> {
    let patches = grid.extract(estimate)?;
    let data = fidelity * target.zip_map(estimate, |a, b| a - b)?.norm_sq();
    let fit = (&patches.data - &state.decoder * &state.codes).norm_squared();
    let split = (state.inverted_targets(cfg) - &state.encoder * &patches.data).norm_squared();
    Ok(data + cfg.lambda * fit + cfg.gamma * split)
}
