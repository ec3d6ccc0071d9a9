use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActivationKind {
    Tanh,
    Identity,
}

/// Element-wise invertible activation.
///
/// The tanh inverse clamps its input into `[-1 + margin, 1 - margin]` so that
/// `atanh` stays finite.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Activation {
    pub kind: ActivationKind,
    pub clamp_margin: f64,
}

impl Default for Activation {
    fn default() -> Self {
        Self::identity()
    }
}

impl Activation {
    pub fn identity() -> Self {
        Self {
            kind: ActivationKind::Identity,
            clamp_margin: 1e-7,
        }
    }

    pub fn tanh() -> Self {
        Self {
            kind: ActivationKind::Tanh,
            ..Self::identity()
        }
    }

    #[inline]
    pub fn apply_scalar(&self, v: f64) -> f64 {
        match self.kind {
            ActivationKind::Tanh => v.tanh(),
            ActivationKind::Identity => v,
        }
    }

    #[inline]
    pub fn invert_scalar(&self, v: f64) -> f64 {
        match self.kind {
            ActivationKind::Tanh => {
                let bound = 1.0 - self.clamp_margin;
                v.clamp(-bound, bound).atanh()
            }
            ActivationKind::Identity => v,
        }
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        v.iter().map(|&x| self.apply_scalar(x)).collect()
    }

    pub fn invert(&self, v: &[f64]) -> Vec<f64> {
        v.iter().map(|&x| self.invert_scalar(x)).collect()
    }

    pub fn apply_matrix(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        match self.kind {
            ActivationKind::Identity => m.clone(),
            ActivationKind::Tanh => m.map(f64::tanh),
        }
    }

    pub fn invert_matrix(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        match self.kind {
            ActivationKind::Identity => m.clone(),
            ActivationKind::Tanh => m.map(|x| self.invert_scalar(x)),
        }
    }
}
