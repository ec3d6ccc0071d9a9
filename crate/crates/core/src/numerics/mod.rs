//! Numerical kernels shared by the denoisers.

mod activation;
mod cg;
mod linalg;
mod prox;
mod transforms;

pub use activation::{Activation, ActivationKind};
pub use cg::{cg_solve, CgOutcome};
pub use linalg::{ridge_solve_left, spectral_norm, RidgeParams};
pub use prox::{hard_threshold_top_tau, soft_threshold, soft_threshold_scalar};
pub use transforms::{build_init_transforms, dct_matrix, haar_matrix, kron, InitTransforms};
