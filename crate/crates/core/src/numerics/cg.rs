use crate::image::Image;

/// Result of a conjugate gradient run.
#[derive(Clone, Debug)]
pub struct CgOutcome {
    pub solution: Image,
    pub iterations: usize,
    /// `|A x - b| / |b|` at exit.
    pub relative_residual: f64,
    pub converged: bool,
}

/// Conjugate gradient for a symmetric positive definite operator on images.
///
/// Stops once `|apply(x) - rhs| <= tol * |rhs|` or after `maxit` iterations.
/// `x0` warm-starts the iteration (zero image when `None`). Non-convergence is
/// reported through [`CgOutcome::converged`] and the last iterate is returned.
pub fn cg_solve<F>(apply: F, rhs: &Image, x0: Option<&Image>, tol: f64, maxit: usize) -> CgOutcome
where
    F: Fn(&Image) -> Image,
{
    let (h, w) = rhs.dims();
    let rhs_norm = rhs.norm();
    if rhs_norm == 0.0 {
        return CgOutcome {
            solution: Image::zeros(h, w),
            iterations: 0,
            relative_residual: 0.0,
            converged: true,
        };
    }

    let mut x = match x0 {
        Some(x0) => x0.clone(),
        None => Image::zeros(h, w),
    };
    let mut r = rhs.clone();
    if x0.is_some() {
        r.axpy(-1.0, &apply(&x));
    }
    let mut rs_old = r.norm_sq();
    let threshold = tol * rhs_norm;
    if rs_old.sqrt() <= threshold {
        return CgOutcome {
            solution: x,
            iterations: 0,
            relative_residual: rs_old.sqrt() / rhs_norm,
            converged: true,
        };
    }

    let mut p = r.clone();
    let mut iterations = 0;
    while iterations < maxit {
        iterations += 1;
        let ap = apply(&p);
        let pap = p.dot(&ap);
        if !(pap > 0.0) {
            // operator is not positive definite along p (or p vanished)
            break;
        }
        let alpha = rs_old / pap;
        x.axpy(alpha, &p);
        r.axpy(-alpha, &ap);
        let rs_new = r.norm_sq();
        if rs_new.sqrt() <= threshold {
            rs_old = rs_new;
            break;
        }
        let beta = rs_new / rs_old;
        for (pi, ri) in p.pixels_mut().iter_mut().zip(r.pixels()) {
            *pi = ri + beta * *pi;
        }
        rs_old = rs_new;
    }

    // recursive residual can drift; report the true one
    let mut true_r = rhs.clone();
    true_r.axpy(-1.0, &apply(&x));
    let relative_residual = true_r.norm() / rhs_norm;
    CgOutcome {
        converged: relative_residual <= tol * (1.0 + 1e-6) || rs_old.sqrt() <= threshold,
        solution: x,
        iterations,
        relative_residual,
    }
}
