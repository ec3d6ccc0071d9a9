#![allow(dead_code)]

use bdae_core::bdae::AutoencoderState;
use bdae_core::{Activation, Image, PatchConfig, PatchGrid, SolverConfig};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, scale: f64) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| scale * rng.random_range(-1.0..1.0))
}

pub fn random_image(rng: &mut ChaCha8Rng, h: usize, w: usize) -> Image {
    Image::from_fn(h, w, |_, _| rng.random_range(0.0..1.0))
}

/// Small config: 4x4 patches, hidden width 32.
pub fn small_config(stride: usize, activation: Activation) -> SolverConfig {
    SolverConfig {
        patch: PatchConfig::new(4, stride).unwrap(),
        activation,
        cg_tol: 1e-12,
        cg_maxit: 2000,
        ..SolverConfig::default()
    }
}

/// Random state on an `h x w` image. Codes and Bregman variables are kept
/// inside (-0.4, 0.4) so tanh targets stay invertible.
pub fn random_state(
    rng: &mut ChaCha8Rng,
    h: usize,
    w: usize,
    cfg: &SolverConfig,
) -> (AutoencoderState, PatchGrid) {
    let grid = PatchGrid::new(&cfg.patch, h, w).unwrap();
    let dim = cfg.patch.patch_dim();
    let hidden = cfg.hidden_units();
    let n = grid.count();
    let state = AutoencoderState {
        encoder: random_matrix(rng, hidden, dim, 0.5),
        decoder: random_matrix(rng, dim, hidden, 0.5),
        codes: random_matrix(rng, hidden, n, 0.3),
        bregman: random_matrix(rng, hidden, n, 0.1),
        estimate: random_image(rng, h, w),
    };
    (state, grid)
}

/// Column-major vectorization of a matrix.
pub fn vec_of(m: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_column_slice(m.as_slice())
}

/// Materialized patch operator: column `k` is `vec(extract(e_k))`.
pub fn patch_operator(grid: &PatchGrid) -> DMatrix<f64> {
    let (h, w) = grid.dims();
    let n = h * w;
    let rows = grid.patch_dim() * grid.count();
    let mut p = DMatrix::zeros(rows, n);
    for k in 0..n {
        let mut e = Image::zeros(h, w);
        e.pixels_mut()[k] = 1.0;
        let col = grid.extract(&e).unwrap();
        p.column_mut(k).copy_from(&vec_of(&col.data));
    }
    p
}

/// Block-diagonal `I_count (x) m`.
pub fn block_diag(m: &DMatrix<f64>, count: usize) -> DMatrix<f64> {
    let d = m.nrows();
    let mut out = DMatrix::zeros(d * count, d * count);
    for i in 0..count {
        out.view_mut((i * d, i * d), (d, d)).copy_from(m);
    }
    out
}

pub fn image_vec(img: &Image) -> DVector<f64> {
    DVector::from_column_slice(img.pixels())
}

pub fn image_from_vec(v: &DVector<f64>, h: usize, w: usize) -> Image {
    Image::new(h, w, v.as_slice().to_vec()).unwrap()
}

pub fn rel_err(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

/// Dense solve of the autoencoder image block
/// `(f I + lambda P^T P + gamma P^T (I (x) W^T W) P) x = f t + lambda P^T vec(W'Z) + gamma P^T vec(W^T phi^-1(Z - B))`.
pub fn dense_image_block(
    state: &AutoencoderState,
    grid: &PatchGrid,
    fidelity: f64,
    target: &Image,
    cfg: &SolverConfig,
) -> (DMatrix<f64>, DVector<f64>) {
    let p = patch_operator(grid);
    let n = p.ncols();
    let wtw = state.encoder.transpose() * &state.encoder;
    let mut a = DMatrix::identity(n, n) * fidelity;
    a += p.transpose() * &p * cfg.lambda;
    a += p.transpose() * block_diag(&wtw, grid.count()) * &p * cfg.gamma;
    let inverted = state
        .codes
        .zip_map(&state.bregman, |z, b| cfg.activation.invert_scalar(z - b));
    let mut rhs = image_vec(target) * fidelity;
    rhs += p.transpose() * vec_of(&(&state.decoder * &state.codes)) * cfg.lambda;
    rhs += p.transpose() * vec_of(&(state.encoder.transpose() * inverted)) * cfg.gamma;
    (a, rhs)
}

pub fn dense_solve(a: DMatrix<f64>, rhs: &DVector<f64>) -> DVector<f64> {
    a.cholesky().expect("SPD system").solve(rhs)
}
