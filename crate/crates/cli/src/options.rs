use bdae_core::{
    ActivationKind, BregmanUpdate, DenoiseError, Image, PatchConfig, RunTrace, SolverConfig,
    TransformConfig, DEFAULT_IMPULSE_EPSILON,
};
use clap::{Args, ValueEnum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum NoiseModel {
    Gaussian,
    Impulse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Bdae,
    Tl,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Bdae => "bdae",
            Method::Tl => "tl",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ActivationArg {
    Identity,
    Tanh,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BregmanArg {
    Standard,
    Literal,
}

/// Solver overrides. Anything left unset keeps the library default; for
/// impulse noise the autoencoder starts from `SolverConfig::impulse()`.
#[derive(Clone, Debug, Default, Args)]
pub struct SolverArgs {
    #[arg(long, help_heading = "Solver")]
    pub lambda: Option<f64>,
    #[arg(long, help_heading = "Solver")]
    pub mu: Option<f64>,
    #[arg(long, help_heading = "Solver")]
    pub gamma: Option<f64>,
    /// Representation width (default: twice the patch dimension).
    #[arg(long, help_heading = "Solver")]
    pub hidden: Option<usize>,
    #[arg(long, help_heading = "Solver")]
    pub max_outer_iters: Option<usize>,
    #[arg(long, help_heading = "Solver")]
    pub rel_tol: Option<f64>,
    #[arg(long, help_heading = "Solver")]
    pub ista_iters: Option<usize>,
    #[arg(long, help_heading = "Solver")]
    pub ridge_epsilon: Option<f64>,
    #[arg(long, help_heading = "Solver")]
    pub patch_size: Option<usize>,
    #[arg(long, help_heading = "Solver")]
    pub stride: Option<usize>,
    #[arg(long, value_enum, help_heading = "Solver")]
    pub activation: Option<ActivationArg>,
    #[arg(long, help_heading = "Solver")]
    pub clamp_margin: Option<f64>,
    #[arg(long, help_heading = "Solver")]
    pub cg_tol: Option<f64>,
    #[arg(long, help_heading = "Solver")]
    pub cg_maxit: Option<usize>,
    #[arg(long, value_enum, help_heading = "Solver")]
    pub bregman_update: Option<BregmanArg>,
    /// Weight of the residual split in the impulse solver.
    #[arg(long, help_heading = "Solver")]
    pub epsilon: Option<f64>,
    /// Nonzeros per patch code for the transform baseline.
    #[arg(long, help_heading = "Transform baseline")]
    pub tl_tau: Option<usize>,
    #[arg(long, help_heading = "Transform baseline")]
    pub tl_lambda_scale: Option<f64>,
    /// Absolute regularizer weight; overrides --tl-lambda-scale.
    #[arg(long, help_heading = "Transform baseline")]
    pub tl_lambda: Option<f64>,
    #[arg(long, help_heading = "Transform baseline")]
    pub tl_coupling: Option<f64>,
    #[arg(long, help_heading = "Transform baseline")]
    pub tl_eps_reg: Option<f64>,
}

fn set<T: Copy>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

impl SolverArgs {
    fn patch(&self) -> PatchConfig {
        let mut patch = PatchConfig::default();
        set(&mut patch.patch_size, self.patch_size);
        set(&mut patch.stride, self.stride);
        patch
    }

    pub fn solver_config(&self, model: NoiseModel) -> SolverConfig {
        let mut cfg = match model {
            NoiseModel::Gaussian => SolverConfig::default(),
            NoiseModel::Impulse => SolverConfig::impulse(),
        };
        set(&mut cfg.lambda, self.lambda);
        set(&mut cfg.mu, self.mu);
        set(&mut cfg.gamma, self.gamma);
        if self.hidden.is_some() {
            cfg.hidden = self.hidden;
        }
        set(&mut cfg.max_outer_iters, self.max_outer_iters);
        set(&mut cfg.rel_tol, self.rel_tol);
        set(&mut cfg.ista_iters, self.ista_iters);
        set(&mut cfg.ridge.epsilon, self.ridge_epsilon);
        cfg.patch = self.patch();
        if let Some(kind) = self.activation {
            cfg.activation.kind = match kind {
                ActivationArg::Identity => ActivationKind::Identity,
                ActivationArg::Tanh => ActivationKind::Tanh,
            };
        }
        set(&mut cfg.activation.clamp_margin, self.clamp_margin);
        set(&mut cfg.cg_tol, self.cg_tol);
        set(&mut cfg.cg_maxit, self.cg_maxit);
        if let Some(b) = self.bregman_update {
            cfg.bregman_update = match b {
                BregmanArg::Standard => BregmanUpdate::Standard,
                BregmanArg::Literal => BregmanUpdate::Literal,
            };
        }
        cfg
    }

    pub fn impulse_epsilon(&self) -> f64 {
        self.epsilon.unwrap_or(DEFAULT_IMPULSE_EPSILON)
    }

    pub fn transform_config(&self) -> TransformConfig {
        let mut cfg = TransformConfig {
            patch: self.patch(),
            ..TransformConfig::default()
        };
        if self.tl_tau.is_some() {
            cfg.tau = self.tl_tau;
        }
        set(&mut cfg.lambda_scale, self.tl_lambda_scale);
        if self.tl_lambda.is_some() {
            cfg.tl_lambda = self.tl_lambda;
        }
        set(&mut cfg.coupling, self.tl_coupling);
        set(&mut cfg.eps_reg, self.tl_eps_reg);
        set(&mut cfg.max_outer_iters, self.max_outer_iters);
        set(&mut cfg.rel_tol, self.rel_tol);
        set(&mut cfg.cg_tol, self.cg_tol);
        set(&mut cfg.cg_maxit, self.cg_maxit);
        cfg
    }

    /// Checks every effective setting up front so bad values surface as
    /// flag errors rather than solver failures.
    pub fn validate(&self, model: NoiseModel) -> Result<(), DenoiseError> {
        self.solver_config(model).validate()?;
        self.transform_config().validate()?;
        let eps = self.impulse_epsilon();
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(DenoiseError::InvalidConfig(format!(
                "epsilon must be positive, got {eps}"
            )));
        }
        Ok(())
    }
}

pub(crate) struct MethodRun {
    pub image: Image,
    pub trace: RunTrace,
    pub config_echo: serde_json::Value,
}

/// Runs `method` with the fidelity matching `model`. The transform baseline
/// only has a Euclidean data term and ignores `model`.
pub(crate) fn run_method(
    method: Method,
    model: NoiseModel,
    noisy: &Image,
    opts: &SolverArgs,
    reference: Option<&Image>,
) -> Result<MethodRun, DenoiseError> {
    match method {
        Method::Bdae => {
            let cfg = opts.solver_config(model);
            let mut echo = to_json(&cfg)?;
            let (image, trace) = match model {
                NoiseModel::Gaussian => {
                    bdae_core::denoise_gaussian_with_reference(noisy, &cfg, reference)?
                }
                NoiseModel::Impulse => {
                    let eps = opts.impulse_epsilon();
                    if let Some(map) = echo.as_object_mut() {
                        map.insert("impulse_epsilon".into(), eps.into());
                    }
                    bdae_core::denoise_impulse_with_reference(noisy, &cfg, eps, reference)?
                }
            };
            Ok(MethodRun {
                image,
                trace,
                config_echo: echo,
            })
        }
        Method::Tl => {
            let cfg = opts.transform_config();
            let (image, trace) = bdae_core::tl_denoise_with_reference(noisy, &cfg, reference)?;
            Ok(MethodRun {
                image,
                trace,
                config_echo: to_json(&cfg)?,
            })
        }
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Result<serde_json::Value, DenoiseError> {
    serde_json::to_value(v).map_err(|e| DenoiseError::Format(e.to_string()))
}
