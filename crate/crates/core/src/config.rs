//! Solver hyperparameters.

use serde::{Deserialize, Serialize};

use crate::error::{DenoiseError, Result};
use crate::numerics::{Activation, RidgeParams};
use crate::patches::PatchConfig;

/// How the Bregman variables follow the code/proxy mismatch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BregmanUpdate {
    /// `b <- b + phi(W p) - z`, drives the splitting residual to zero.
    Standard,
    /// `b <- z - phi(W p) - b`, kept for comparison only.
    Literal,
}

/// Hyperparameters of the blind autoencoder denoiser.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Weight of the patch reconstruction term.
    pub lambda: f64,
    /// Sparsity weight on the codes.
    pub mu: f64,
    /// Weight of the split penalty tying codes to the encoder output.
    pub gamma: f64,
    /// Representation width; `None` means twice the patch dimension.
    pub hidden: Option<usize>,
    pub max_outer_iters: usize,
    pub rel_tol: f64,
    pub ista_iters: usize,
    pub ridge: RidgeParams,
    pub patch: PatchConfig,
    pub activation: Activation,
    pub cg_tol: f64,
    pub cg_maxit: usize,
    pub bregman_update: BregmanUpdate,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            lambda: 0.5,
            mu: 0.1,
            gamma: 0.5,
            hidden: None,
            max_outer_iters: 40,
            rel_tol: 1e-4,
            ista_iters: 10,
            ridge: RidgeParams::default(),
            patch: PatchConfig::default(),
            activation: Activation::default(),
            cg_tol: 1e-6,
            cg_maxit: 200,
            bregman_update: BregmanUpdate::Standard,
        }
    }
}

/// Default weight of the residual split in the impulse solver.
pub const DEFAULT_IMPULSE_EPSILON: f64 = 1.0;

impl SolverConfig {
    /// Defaults for dense salt-and-pepper corruption. Outliers carry far more
    /// energy per coefficient than moderate Gaussian noise, so the code
    /// sparsity weight is raised; everything else matches [`Default`].
    pub fn impulse() -> Self {
        Self {
            mu: 5.0,
            ..Self::default()
        }
    }

    pub fn hidden_units(&self) -> usize {
        self.hidden.unwrap_or(2 * self.patch.patch_dim())
    }

    pub fn validate(&self) -> Result<()> {
        self.patch.validate()?;
        let nonneg = [
            ("lambda", self.lambda),
            ("mu", self.mu),
            ("gamma", self.gamma),
            ("rel_tol", self.rel_tol),
            ("ridge.epsilon", self.ridge.epsilon),
        ];
        for (name, v) in nonneg {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(DenoiseError::InvalidConfig(format!(
                    "{name} must be a finite nonnegative number, got {v}"
                )));
            }
        }
        if !(self.cg_tol > 0.0) {
            return Err(DenoiseError::InvalidConfig(
                "cg_tol must be positive".into(),
            ));
        }
        if !(self.activation.clamp_margin > 0.0 && self.activation.clamp_margin < 1.0) {
            return Err(DenoiseError::InvalidConfig(
                "activation clamp margin must lie in (0, 1)".into(),
            ));
        }
        if self.hidden_units() == 0 {
            return Err(DenoiseError::InvalidConfig(
                "hidden width must be positive".into(),
            ));
        }
        if self.hidden_units() < self.patch.patch_dim() {
            log::warn!(
                "hidden width {} is below the patch dimension {}",
                self.hidden_units(),
                self.patch.patch_dim()
            );
        }
        Ok(())
    }
}
