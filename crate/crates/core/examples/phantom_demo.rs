//! Denoises a noisy Shepp-Logan phantom with every solver and prints PSNR.
//!
//! `cargo run --release -p bdae-core --example phantom_demo -- [size] [sigma] [fraction]`

use bdae_core::phantom::shepp_logan;
use bdae_core::{
    denoise_gaussian_with_reference, denoise_impulse_with_reference, psnr,
    tl_denoise_with_reference, NoiseSpec, SolverConfig, TransformConfig, DEFAULT_IMPULSE_EPSILON,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().collect();
    let size: usize = args.get(1).map(|s| s.parse()).transpose()?.unwrap_or(64);
    let sigma: f64 = args.get(2).map(|s| s.parse()).transpose()?.unwrap_or(25.0);
    let fraction: f64 = args.get(3).map(|s| s.parse()).transpose()?.unwrap_or(0.5);
    let clean = shepp_logan(size);

    let noisy = NoiseSpec::gaussian(sigma, 1).apply(&clean)?;
    println!(
        "gaussian sigma={sigma}: noisy {:.2} dB",
        psnr(&clean, &noisy.clipped())?
    );
    let cfg = SolverConfig::default();
    let (out, trace) = denoise_gaussian_with_reference(&noisy, &cfg, Some(&clean))?;
    println!(
        "  bdae      {:.2} dB  ({} iterations, {:.1}s)",
        psnr(&clean, &out)?,
        trace.iterations_run,
        trace.wall_time_s
    );
    let (out, trace) =
        tl_denoise_with_reference(&noisy, &TransformConfig::default(), Some(&clean))?;
    println!(
        "  transform {:.2} dB  ({} iterations, {:.1}s)",
        psnr(&clean, &out)?,
        trace.iterations_run,
        trace.wall_time_s
    );

    let noisy = NoiseSpec::salt_pepper(fraction, 1).apply(&clean)?;
    println!(
        "salt and pepper {fraction}: noisy {:.2} dB",
        psnr(&clean, &noisy)?
    );
    let cfg = SolverConfig::impulse();
    let (out, trace) =
        denoise_impulse_with_reference(&noisy, &cfg, DEFAULT_IMPULSE_EPSILON, Some(&clean))?;
    println!(
        "  bdae l1   {:.2} dB  ({} iterations, {:.1}s)",
        psnr(&clean, &out)?,
        trace.iterations_run,
        trace.wall_time_s
    );
    let (out, _) = denoise_gaussian_with_reference(&noisy, &cfg, Some(&clean))?;
    println!("  bdae l2   {:.2} dB", psnr(&clean, &out)?);
    Ok(())
}
