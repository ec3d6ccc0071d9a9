//! Modified Shepp-Logan head phantom, a standard piecewise-constant test image.

use crate::image::Image;

// (intensity, semi-axis a, semi-axis b, center x, center y, rotation degrees)
const ELLIPSES: [(f64, f64, f64, f64, f64, f64); 10] = [
    (1.0, 0.69, 0.92, 0.0, 0.0, 0.0),
    (-0.8, 0.6624, 0.874, 0.0, -0.0184, 0.0),
    (-0.2, 0.11, 0.31, 0.22, 0.0, -18.0),
    (-0.2, 0.16, 0.41, -0.22, 0.0, 18.0),
    (0.1, 0.21, 0.25, 0.0, 0.35, 0.0),
    (0.1, 0.046, 0.046, 0.0, 0.1, 0.0),
    (0.1, 0.046, 0.046, 0.0, -0.1, 0.0),
    (0.1, 0.046, 0.023, -0.08, -0.605, 0.0),
    (0.1, 0.023, 0.023, 0.0, -0.606, 0.0),
    (0.1, 0.023, 0.046, 0.06, -0.605, 0.0),
];

/// `size x size` phantom with intensities in `[0, 1]`.
pub fn shepp_logan(size: usize) -> Image {
    let coord = |i: usize| {
        if size == 1 {
            0.0
        } else {
            -1.0 + 2.0 * i as f64 / (size - 1) as f64
        }
    };
    Image::from_fn(size, size, |r, c| {
        let x = coord(c);
        let y = -coord(r);
        let v: f64 = ELLIPSES
            .iter()
            .filter(|&&(_, a, b, x0, y0, deg)| {
                let (s, co) = deg.to_radians().sin_cos();
                let dx = x - x0;
                let dy = y - y0;
                let u = dx * co + dy * s;
                let w = dy * co - dx * s;
                (u / a).powi(2) + (w / b).powi(2) <= 1.0
            })
            .map(|e| e.0)
            .sum();
        v.clamp(0.0, 1.0)
    })
}
