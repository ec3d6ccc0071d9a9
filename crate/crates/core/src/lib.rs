//! Blind image denoising with a patch autoencoder learned from the noisy
//! image itself.
//!
//! The Gaussian solver ([`denoise_gaussian`]) and its impulse-noise variant
//! ([`denoise_impulse`]) alternate closed-form decoder/encoder fits, a
//! matrix-free image solve, ISTA code updates and Bregman steps. A sparsifying
//! transform learning denoiser ([`tl_denoise`]) is included as a baseline.
//!
//! Intensities are normalized to `[0, 1]`; noise levels follow the 8-bit
//! convention (`sigma = 25` means a standard deviation of `25 / 255`).

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bdae;
pub mod config;
pub mod error;
pub mod image;
pub mod io;
pub mod metrics;
pub mod noise;
pub mod numerics;
pub mod patches;
pub mod phantom;
pub mod report;
pub mod trace;
pub mod transform_learning;

pub use bdae::{
    denoise_gaussian, denoise_gaussian_with_reference, denoise_impulse,
    denoise_impulse_with_reference, init_state, AutoencoderState, ImpulseState,
};
pub use config::{BregmanUpdate, SolverConfig, DEFAULT_IMPULSE_EPSILON};
pub use error::{DenoiseError, Result};
pub use image::Image;
pub use io::{read_image, write_image};
pub use metrics::{difference_image, psnr};
pub use noise::{NoiseKind, NoiseSpec};
pub use numerics::{Activation, ActivationKind, RidgeParams};
pub use patches::{
    aggregate_patches, extract_patches, overlap_counts, PatchConfig, PatchGrid, PatchMatrix,
};
pub use report::DenoiseReport;
pub use trace::RunTrace;
pub use transform_learning::{tl_denoise, tl_denoise_with_reference, TransformConfig};
