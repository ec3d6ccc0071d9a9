//! Image quality metrics on the normalized scale (peak = 1).

use crate::error::Result;
use crate::image::Image;

pub fn mse(reference: &Image, test: &Image) -> Result<f64> {
    let diff = reference.zip_map(test, |a, b| a - b)?;
    Ok(diff.norm_sq() / diff.len() as f64)
}

/// `20 log10(1 / rmse)` in dB; `f64::INFINITY` for identical images.
pub fn psnr(reference: &Image, test: &Image) -> Result<f64> {
    let m = mse(reference, test)?;
    if m == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(-10.0 * m.log10())
}

/// `clip(gain * |reference - denoised|, 0, 1)`, for visual inspection.
pub fn difference_image(reference: &Image, denoised: &Image, gain: f64) -> Result<Image> {
    reference.zip_map(denoised, |a, b| (gain * (a - b).abs()).clamp(0.0, 1.0))
}

/// Formats a PSNR value, printing `inf` for identical images.
pub fn format_psnr(value: f64) -> String {
    if value.is_infinite() {
        "inf".to_string()
    } else {
        format!("{value:.2}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> Image {
        Image::from_fn(16, 12, |r, c| ((r * 12 + c) % 17) as f64 / 20.0)
    }

    #[test]
    fn identical_is_infinite() {
        let a = base();
        assert_eq!(psnr(&a, &a).unwrap(), f64::INFINITY);
        assert_eq!(format_psnr(f64::INFINITY), "inf");
    }

    #[test]
    fn constant_offsets() {
        let a = base();
        let b = a.map(|v| v + 0.1);
        assert!((psnr(&a, &b).unwrap() - 20.0).abs() < 1e-9);
        let b = a.map(|v| v + 0.01);
        assert!((psnr(&a, &b).unwrap() - 40.0).abs() < 1e-9);
    }

    #[test]
    fn symmetric() {
        let a = base();
        let b = a.map(|v| v * 0.9 + 0.03);
        assert_eq!(psnr(&a, &b).unwrap(), psnr(&b, &a).unwrap());
    }

    #[test]
    fn dimension_mismatch() {
        assert!(psnr(&base(), &Image::zeros(3, 3)).is_err());
        assert!(difference_image(&base(), &Image::zeros(3, 3), 10.0).is_err());
    }

    #[test]
    fn difference_examples() {
        let a = base();
        assert!(difference_image(&a, &a, 10.0)
            .unwrap()
            .pixels()
            .iter()
            .all(|&v| v == 0.0));
        let d = difference_image(&a, &a.map(|v| v - 0.05), 10.0).unwrap();
        assert!(d.pixels().iter().all(|&v| (v - 0.5).abs() < 1e-9));
        let d = difference_image(&a, &a.map(|v| v + 0.2), 10.0).unwrap();
        assert!(d.pixels().iter().all(|&v| v == 1.0));
    }
}
