#[inline]
pub fn soft_threshold_scalar(v: f64, t: f64) -> f64 {
    if v > t {
        v - t
    } else if v < -t {
        v + t
    } else {
        0.0
    }
}

/// Proximal map of `t * |.|_1`, element-wise `sign(v) * max(|v| - t, 0)`.
pub fn soft_threshold(v: &[f64], t: f64) -> Vec<f64> {
    debug_assert!(t >= 0.0);
    v.iter().map(|&x| soft_threshold_scalar(x, t)).collect()
}

/// Keep the `tau` largest-magnitude entries and zero the rest.
///
/// Ties go to the lower index.
pub fn hard_threshold_top_tau(v: &[f64], tau: usize) -> Vec<f64> {
    let n = v.len();
    if tau >= n {
        return v.to_vec();
    }
    let mut out = vec![0.0; n];
    if tau == 0 {
        return out;
    }
    let mut order: Vec<usize> = (0..n).collect();
    // stable sort keeps lower indices first among equal magnitudes
    order.sort_by(|&a, &b| v[b].abs().total_cmp(&v[a].abs()));
    for &i in &order[..tau] {
        out[i] = v[i];
    }
    out
}
