//! Orthonormal DCT-II and Haar analysis matrices and the autoencoder
//! initialization built from them.

use std::f64::consts::{PI, SQRT_2};

use nalgebra::DMatrix;

/// Orthonormal type-II DCT matrix; row `k` is the `k`-th basis vector.
pub fn dct_matrix(n: usize) -> DMatrix<f64> {
    let scale0 = (1.0 / n as f64).sqrt();
    let scale = (2.0 / n as f64).sqrt();
    DMatrix::from_fn(n, n, |k, i| {
        let s = if k == 0 { scale0 } else { scale };
        s * (PI * (2 * i + 1) as f64 * k as f64 / (2 * n) as f64).cos()
    })
}

/// Orthonormal Haar matrix for `n` a power of two, coarse rows first.
///
/// Returns `None` for other sizes.
pub fn haar_matrix(n: usize) -> Option<DMatrix<f64>> {
    if n == 0 || !n.is_power_of_two() {
        return None;
    }
    let mut h = DMatrix::from_element(1, 1, 1.0);
    let mut size = 1;
    while size < n {
        let next = size * 2;
        let mut m = DMatrix::zeros(next, next);
        for r in 0..size {
            for c in 0..size {
                let v = h[(r, c)] / SQRT_2;
                m[(r, 2 * c)] = v;
                m[(r, 2 * c + 1)] = v;
            }
        }
        for r in 0..size {
            m[(size + r, 2 * r)] = 1.0 / SQRT_2;
            m[(size + r, 2 * r + 1)] = -1.0 / SQRT_2;
        }
        h = m;
        size = next;
    }
    Some(h)
}

pub fn kron(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    DMatrix::from_fn(ar * br, ac * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

/// Encoder/decoder starting point for the autoencoder.
#[derive(Clone, Debug)]
pub struct InitTransforms {
    /// `2d^2 x d^2`, the 2-D DCT stacked on the 2-D Haar transform.
    pub encoder: DMatrix<f64>,
    /// `d^2 x 2d^2`, half the transposed encoder; `decoder * encoder = I`.
    pub decoder: DMatrix<f64>,
}

/// Separable 2-D DCT and Haar bases for `patch_size x patch_size` patches
/// vectorized row by row.
///
/// A non power-of-two size has no Haar basis; the DCT block is then used
/// twice and a warning is logged.
pub fn build_init_transforms(patch_size: usize) -> InitTransforms {
    let d = patch_size;
    let dim = d * d;
    let dct = dct_matrix(d);
    let c2 = kron(&dct, &dct);
    let h2 = match haar_matrix(d) {
        Some(h) => kron(&h, &h),
        None => {
            log::warn!(
                "patch size {d} is not a power of two; using the DCT twice for initialization"
            );
            c2.clone()
        }
    };
    let mut encoder = DMatrix::zeros(2 * dim, dim);
    encoder.rows_mut(0, dim).copy_from(&c2);
    encoder.rows_mut(dim, dim).copy_from(&h2);
    let decoder = encoder.transpose() * 0.5;
    InitTransforms { encoder, decoder }
}
