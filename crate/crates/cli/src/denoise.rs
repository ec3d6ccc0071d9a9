use std::path::PathBuf;

use bdae_core::metrics::format_psnr;
use bdae_core::{difference_image, psnr, read_image, write_image, DenoiseReport, Image, NoiseSpec};
use clap::Args;

use crate::exit;
use crate::options::{run_method, Method, NoiseModel, SolverArgs};

#[derive(Debug, Args)]
pub struct DenoiseArgs {
    /// Input image (binary PGM).
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    /// Noise model: picks the data term, and the kind of noise to inject
    /// when --sigma or --fraction is given.
    #[arg(long, value_enum)]
    pub noise: NoiseModel,
    /// Gaussian standard deviation on the 0-255 scale to add to the input.
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Salt-and-pepper fraction in [0, 1] to apply to the input.
    #[arg(long)]
    pub fraction: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "bdae")]
    pub method: Method,
    /// Clean reference for PSNR; defaults to the input when noise is injected.
    #[arg(long)]
    pub clean: Option<PathBuf>,
    /// JSON report path.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Writes the reference/output difference, contrast enhanced 10x.
    #[arg(long)]
    pub diff: Option<PathBuf>,
    #[command(flatten)]
    pub solver: SolverArgs,
}

fn injected_noise(args: &DenoiseArgs) -> Result<Option<NoiseSpec>, String> {
    match (args.noise, args.sigma, args.fraction) {
        (_, Some(_), Some(_)) => Err("--sigma and --fraction are mutually exclusive".into()),
        (NoiseModel::Gaussian, None, Some(_)) => Err("--fraction needs --noise impulse".into()),
        (NoiseModel::Impulse, Some(_), None) => Err("--sigma needs --noise gaussian".into()),
        (NoiseModel::Gaussian, Some(s), None) => {
            if s >= 0.0 && s.is_finite() {
                Ok(Some(NoiseSpec::gaussian(s, args.seed)))
            } else {
                Err(format!("--sigma must be a nonnegative number, got {s}"))
            }
        }
        (NoiseModel::Impulse, None, Some(f)) => {
            if (0.0..=1.0).contains(&f) {
                Ok(Some(NoiseSpec::salt_pepper(f, args.seed)))
            } else {
                Err(format!("--fraction must lie in [0, 1], got {f}"))
            }
        }
        (_, None, None) => Ok(None),
    }
}

fn read(path: &PathBuf) -> Result<Image, i32> {
    read_image(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        exit::IMAGE_IO
    })
}

pub(crate) fn run(args: &DenoiseArgs) -> i32 {
    let spec = match injected_noise(args) {
        Ok(s) => s,
        Err(msg) => {
            eprintln!("error: {msg}");
            return exit::BAD_FLAGS;
        }
    };
    if let Err(e) = args.solver.validate(args.noise) {
        eprintln!("error: {e}");
        return exit::BAD_FLAGS;
    }

    let input = match read(&args.input) {
        Ok(img) => img,
        Err(code) => return code,
    };
    let clean = match &args.clean {
        Some(path) => match read(path) {
            Ok(img) => Some(img),
            Err(code) => return code,
        },
        None => None,
    };
    if let Some(c) = &clean {
        if c.dims() != input.dims() {
            eprintln!(
                "error: clean reference is {}x{}, input is {}x{}",
                c.height(),
                c.width(),
                input.height(),
                input.width()
            );
            return exit::BAD_FLAGS;
        }
    }

    let noisy = match &spec {
        Some(s) => match s.apply(&input) {
            Ok(img) => img,
            Err(e) => {
                eprintln!("error: {e}");
                return exit::BAD_FLAGS;
            }
        },
        None => input.clone(),
    };
    let reference = clean.or_else(|| spec.map(|_| input.clone()));
    let noise_desc = match (&spec, args.noise) {
        (Some(s), _) => s.describe(),
        (None, NoiseModel::Gaussian) => "gaussian (input already noisy)".to_string(),
        (None, NoiseModel::Impulse) => "salt_pepper (input already noisy)".to_string(),
    };

    let outcome = match run_method(
        args.method,
        args.noise,
        &noisy,
        &args.solver,
        reference.as_ref(),
    ) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: solver failed: {e}");
            return exit::SOLVER;
        }
    };

    if let Err(e) = write_image(&outcome.image, &args.output) {
        eprintln!("error: cannot write {}: {e}", args.output.display());
        return exit::IMAGE_IO;
    }

    let (psnr_noisy, psnr_denoised) = match &reference {
        Some(r) => (psnr(r, &noisy.clipped()).ok(), psnr(r, &outcome.image).ok()),
        None => (None, None),
    };
    if let (Some(n), Some(d)) = (psnr_noisy, psnr_denoised) {
        println!(
            "{}: psnr noisy {} dB, denoised {} dB ({} iterations)",
            args.method.name(),
            format_psnr(n),
            format_psnr(d),
            outcome.trace.iterations_run
        );
    }

    if let Some(path) = &args.diff {
        let Some(r) = &reference else {
            eprintln!("error: --diff needs a reference (--clean or injected noise)");
            return exit::BAD_FLAGS;
        };
        let written = difference_image(r, &outcome.image, 10.0).and_then(|d| write_image(&d, path));
        if let Err(e) = written {
            eprintln!("error: cannot write {}: {e}", path.display());
            return exit::IMAGE_IO;
        }
    }

    if let Some(path) = &args.report {
        let report = DenoiseReport::from_trace(
            args.method.name(),
            noise_desc,
            &outcome.trace,
            psnr_noisy,
            psnr_denoised,
            outcome.config_echo,
        );
        let written = serde_json::to_string_pretty(&report)
            .map_err(|e| e.to_string())
            .and_then(|s| std::fs::write(path, s + "\n").map_err(|e| e.to_string()));
        if let Err(e) = written {
            eprintln!("error: cannot write report {}: {e}", path.display());
            return exit::IMAGE_IO;
        }
    }
    exit::OK
}
