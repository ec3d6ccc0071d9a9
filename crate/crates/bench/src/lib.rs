//! Fixtures shared by the benchmarks.

use bdae_core::phantom::shepp_logan;
use bdae_core::{Image, NoiseSpec};

/// Shepp-Logan phantom of side `size` with seeded Gaussian noise.
pub fn noisy_phantom(size: usize, sigma: f64) -> Image {
    NoiseSpec::gaussian(sigma, 1)
        .apply(&shepp_logan(size))
        .expect("valid noise spec")
}
