use std::path::{Path, PathBuf};

use bdae_core::metrics::format_psnr;
use bdae_core::{psnr, read_image, Image, NoiseSpec};
use clap::Args;
use serde::Serialize;

use crate::exit;
use crate::options::{run_method, Method, NoiseModel, SolverArgs};

pub const CSV_HEADER: &str =
    "image,method,noise_kind,noise_level,seed,psnr_noisy,psnr_denoised,iterations,wall_time_s";

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    /// Directory of binary PGM images (clean references).
    #[arg(long)]
    pub images: PathBuf,
    /// Gaussian levels on the 0-255 scale, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub sigmas: Vec<f64>,
    /// Salt-and-pepper fractions, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub fractions: Vec<f64>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "bdae,tl")]
    pub methods: Vec<Method>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// Fill the wall_time_s column. Off by default so reruns are
    /// byte-identical.
    #[arg(long)]
    pub timing: bool,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Serialize)]
struct Row {
    image: String,
    method: &'static str,
    noise_kind: &'static str,
    noise_level: f64,
    seed: u64,
    psnr_noisy: String,
    psnr_denoised: String,
    iterations: usize,
    wall_time_s: String,
}

fn pgm_files(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.is_file()
                && p.extension()
                    .and_then(|e| e.to_str())
                    .is_some_and(|e| e.eq_ignore_ascii_case("pgm"))
        })
        .collect();
    files.sort();
    Ok(files)
}

fn noise_specs(args: &BenchmarkArgs) -> Result<Vec<(NoiseModel, NoiseSpec)>, String> {
    let mut specs = Vec::new();
    for &s in &args.sigmas {
        if !(s >= 0.0 && s.is_finite()) {
            return Err(format!("sigma must be a nonnegative number, got {s}"));
        }
        specs.push((NoiseModel::Gaussian, NoiseSpec::gaussian(s, args.seed)));
    }
    for &f in &args.fractions {
        if !(0.0..=1.0).contains(&f) {
            return Err(format!("fraction must lie in [0, 1], got {f}"));
        }
        specs.push((NoiseModel::Impulse, NoiseSpec::salt_pepper(f, args.seed)));
    }
    if specs.is_empty() {
        return Err("give at least one of --sigmas or --fractions".into());
    }
    Ok(specs)
}

pub(crate) fn run(args: &BenchmarkArgs) -> i32 {
    let specs = match noise_specs(args) {
        Ok(s) => s,
        Err(msg) => {
            eprintln!("error: {msg}");
            return exit::BAD_FLAGS;
        }
    };
    for model in [NoiseModel::Gaussian, NoiseModel::Impulse] {
        if let Err(e) = args.solver.validate(model) {
            eprintln!("error: {e}");
            return exit::BAD_FLAGS;
        }
    }
    let files = match pgm_files(&args.images) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: cannot list {}: {e}", args.images.display());
            return exit::IMAGE_IO;
        }
    };
    let images: Vec<(String, Image)> = files
        .iter()
        .filter_map(|path| match read_image(path) {
            Ok(img) => {
                let name = path
                    .file_name()
                    .map(|n| n.to_string_lossy().into_owned())
                    .unwrap_or_default();
                Some((name, img))
            }
            Err(e) => {
                log::warn!("skipping {}: {e}", path.display());
                None
            }
        })
        .collect();
    if images.is_empty() {
        eprintln!("error: no readable PGM images in {}", args.images.display());
        return exit::IMAGE_IO;
    }

    let mut rows = Vec::new();
    for (name, clean) in &images {
        for (model, spec) in &specs {
            let noisy = match spec.apply(clean) {
                Ok(n) => n,
                Err(e) => {
                    eprintln!("error: {e}");
                    return exit::SOLVER;
                }
            };
            let psnr_noisy = psnr(clean, &noisy.clipped())
                .map(format_psnr)
                .unwrap_or_default();
            for &method in &args.methods {
                let outcome = match run_method(method, *model, &noisy, &args.solver, None) {
                    Ok(o) => o,
                    Err(e) => {
                        eprintln!(
                            "error: {} on {name} ({}): {e}",
                            method.name(),
                            spec.describe()
                        );
                        return exit::SOLVER;
                    }
                };
                let psnr_denoised = psnr(clean, &outcome.image)
                    .map(format_psnr)
                    .unwrap_or_default();
                log::info!(
                    "{name} {} {}: {psnr_denoised} dB",
                    method.name(),
                    spec.describe()
                );
                rows.push(Row {
                    image: name.clone(),
                    method: method.name(),
                    noise_kind: spec.kind_name(),
                    noise_level: spec.level(),
                    seed: spec.seed,
                    psnr_noisy: psnr_noisy.clone(),
                    psnr_denoised,
                    iterations: outcome.trace.iterations_run,
                    wall_time_s: if args.timing {
                        format!("{:.3}", outcome.trace.wall_time_s)
                    } else {
                        String::new()
                    },
                });
            }
        }
    }

    if let Err(e) = write_csv(&args.out, &rows) {
        eprintln!("error: cannot write {}: {e}", args.out.display());
        return exit::IMAGE_IO;
    }
    exit::OK
}

fn write_csv(path: &Path, rows: &[Row]) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
