//! Command-line harness for the bdae denoisers.
//!
//! `bdae denoise` runs one image through a solver and writes the result plus
//! an optional JSON report; `bdae benchmark` sweeps a directory of PGM images
//! over noise levels and methods and writes a CSV table.

mod benchmark;
mod denoise;
mod options;

use std::ffi::OsString;

use clap::{Parser, Subcommand};

pub use benchmark::{BenchmarkArgs, CSV_HEADER};
pub use denoise::DenoiseArgs;
pub use options::{Method, NoiseModel, SolverArgs};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const BAD_FLAGS: i32 = 1;
    pub const IMAGE_IO: i32 = 2;
    pub const SOLVER: i32 = 3;
}

#[derive(Debug, Parser)]
#[command(
    name = "bdae",
    version,
    about = "Blind patch-autoencoder image denoising"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Denoise one image.
    #[command(allow_negative_numbers = true)]
    Denoise(DenoiseArgs),
    /// Run every (image, noise level, method) combination and write a CSV table.
    #[command(allow_negative_numbers = true)]
    Benchmark(BenchmarkArgs),
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() {
                exit::BAD_FLAGS
            } else {
                exit::OK
            };
        }
    };
    match cli.command {
        Command::Denoise(args) => denoise::run(&args),
        Command::Benchmark(args) => benchmark::run(&args),
    }
}
