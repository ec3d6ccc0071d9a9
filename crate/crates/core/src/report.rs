//! Serializable run summary.

use serde::{Serialize, Serializer};

use crate::trace::RunTrace;

fn psnr_value<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(x) if x.is_infinite() => s.serialize_str("inf"),
        Some(x) => s.serialize_f64(*x),
        None => s.serialize_none(),
    }
}

/// Summary of one denoising run; PSNR fields are `null` without a clean
/// reference and the string `"inf"` for a perfect match.
#[derive(Clone, Debug, Serialize)]
pub struct DenoiseReport {
    pub method: String,
    pub noise: String,
    #[serde(serialize_with = "psnr_value")]
    pub psnr_noisy: Option<f64>,
    #[serde(serialize_with = "psnr_value")]
    pub psnr_denoised: Option<f64>,
    pub cost_trajectory: Vec<f64>,
    pub iterations_run: usize,
    pub wall_time: f64,
    pub config_echo: serde_json::Value,
}

impl DenoiseReport {
    pub fn from_trace(
        method: impl Into<String>,
        noise: impl Into<String>,
        trace: &RunTrace,
        psnr_noisy: Option<f64>,
        psnr_denoised: Option<f64>,
        config_echo: serde_json::Value,
    ) -> Self {
        Self {
            method: method.into(),
            noise: noise.into(),
            psnr_noisy,
            psnr_denoised,
            cost_trajectory: trace.cost_trajectory.clone(),
            iterations_run: trace.iterations_run,
            wall_time: trace.wall_time_s,
            config_echo,
        }
    }
}
