use thiserror::Error;

/// Errors raised by the denoising library.
#[derive(Debug, Error)]
pub enum DenoiseError {
    #[error("image {height}x{width} is smaller than the {patch_size}x{patch_size} patch")]
    ImageTooSmall {
        height: usize,
        width: usize,
        patch_size: usize,
    },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("non-finite value encountered in {0}")]
    NonFinite(String),

    #[error("singular system: {0}")]
    Singular(String),

    #[error("conjugate gradient stalled at relative residual {residual:.3e} after {iterations} iterations")]
    NotConverged { residual: f64, iterations: usize },

    #[error("image format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, DenoiseError>;
