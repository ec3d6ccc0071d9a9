//! Patch extraction operator and its adjoint.
//!
//! Patches are square windows lying fully inside the image. Top-left corners
//! run over `0, stride, 2*stride, ...` along each axis; when the last step does
//! not land flush with the border an extra window at `len - patch_size` is
//! appended so the final row and column are always covered. Columns of a
//! [`PatchMatrix`] follow raster order of the top-left corners, and each
//! column holds its patch vectorized row by row.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{DenoiseError, Result};
use crate::image::Image;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatchConfig {
    pub patch_size: usize,
    pub stride: usize,
}

impl Default for PatchConfig {
    fn default() -> Self {
        Self {
            patch_size: 8,
            stride: 1,
        }
    }
}

impl PatchConfig {
    pub fn new(patch_size: usize, stride: usize) -> Result<Self> {
        let cfg = Self { patch_size, stride };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Number of entries in a vectorized patch.
    pub fn patch_dim(&self) -> usize {
        self.patch_size * self.patch_size
    }

    pub fn validate(&self) -> Result<()> {
        if self.patch_size == 0 {
            return Err(DenoiseError::InvalidConfig(
                "patch_size must be positive".into(),
            ));
        }
        if self.stride == 0 || self.stride > self.patch_size {
            return Err(DenoiseError::InvalidConfig(format!(
                "stride must lie in 1..={}, got {}",
                self.patch_size, self.stride
            )));
        }
        Ok(())
    }
}

/// Column-stacked vectorized patches, `patch_dim x count`.
#[derive(Clone, Debug, PartialEq)]
pub struct PatchMatrix {
    pub data: DMatrix<f64>,
}

impl PatchMatrix {
    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn count(&self) -> usize {
        self.data.ncols()
    }

    /// Frobenius inner product.
    pub fn dot(&self, other: &PatchMatrix) -> f64 {
        self.data.dot(&other.data)
    }
}

fn axis_offsets(len: usize, patch: usize, stride: usize) -> Vec<usize> {
    let last = len - patch;
    let mut offsets: Vec<usize> = (0..=last).step_by(stride).collect();
    if offsets.last() != Some(&last) {
        offsets.push(last);
    }
    offsets
}

/// Precomputed patch placement for one image size.
///
/// Reusing a grid avoids recomputing offsets inside iterative solvers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatchGrid {
    height: usize,
    width: usize,
    patch_size: usize,
    row_offsets: Vec<usize>,
    col_offsets: Vec<usize>,
}

impl PatchGrid {
    pub fn new(cfg: &PatchConfig, height: usize, width: usize) -> Result<Self> {
        cfg.validate()?;
        if height < cfg.patch_size || width < cfg.patch_size {
            return Err(DenoiseError::ImageTooSmall {
                height,
                width,
                patch_size: cfg.patch_size,
            });
        }
        Ok(Self {
            height,
            width,
            patch_size: cfg.patch_size,
            row_offsets: axis_offsets(height, cfg.patch_size, cfg.stride),
            col_offsets: axis_offsets(width, cfg.patch_size, cfg.stride),
        })
    }

    pub fn for_image(cfg: &PatchConfig, img: &Image) -> Result<Self> {
        Self::new(cfg, img.height(), img.width())
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    pub fn patch_dim(&self) -> usize {
        self.patch_size * self.patch_size
    }

    pub fn count(&self) -> usize {
        self.row_offsets.len() * self.col_offsets.len()
    }

    /// Top-left corners in column order of the patch matrix.
    pub fn positions(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.row_offsets
            .iter()
            .flat_map(move |&r| self.col_offsets.iter().map(move |&c| (r, c)))
    }

    pub fn extract(&self, img: &Image) -> Result<PatchMatrix> {
        if img.dims() != self.dims() {
            return Err(DenoiseError::ShapeMismatch(format!(
                "grid built for {}x{}, image is {}x{}",
                self.height,
                self.width,
                img.height(),
                img.width()
            )));
        }
        let p = self.patch_size;
        let mut data = DMatrix::zeros(self.patch_dim(), self.count());
        let src = img.pixels();
        for (j, (top, left)) in self.positions().enumerate() {
            let mut col = data.column_mut(j);
            let col = col.as_mut_slice();
            for r in 0..p {
                let start = (top + r) * self.width + left;
                col[r * p..(r + 1) * p].copy_from_slice(&src[start..start + p]);
            }
        }
        Ok(PatchMatrix { data })
    }

    /// Adjoint of [`PatchGrid::extract`]: scatter every column back and sum.
    pub fn aggregate(&self, pm: &PatchMatrix) -> Result<Image> {
        self.aggregate_matrix(&pm.data)
    }

    pub(crate) fn aggregate_matrix(&self, data: &DMatrix<f64>) -> Result<Image> {
        if data.nrows() != self.patch_dim() || data.ncols() != self.count() {
            return Err(DenoiseError::ShapeMismatch(format!(
                "patch matrix is {}x{}, grid expects {}x{}",
                data.nrows(),
                data.ncols(),
                self.patch_dim(),
                self.count()
            )));
        }
        let p = self.patch_size;
        let mut out = Image::zeros(self.height, self.width);
        let dst = out.pixels_mut();
        for (j, (top, left)) in self.positions().enumerate() {
            let col = data.column(j);
            let col = col.as_slice();
            for r in 0..p {
                let start = (top + r) * self.width + left;
                for (d, s) in dst[start..start + p]
                    .iter_mut()
                    .zip(&col[r * p..(r + 1) * p])
                {
                    *d += s;
                }
            }
        }
        Ok(out)
    }

    /// Number of patches covering each pixel.
    pub fn overlap_counts(&self) -> Image {
        let p = self.patch_size;
        let mut out = Image::zeros(self.height, self.width);
        for (top, left) in self.positions() {
            for r in top..top + p {
                for c in left..left + p {
                    let v = out.get(r, c);
                    out.set(r, c, v + 1.0);
                }
            }
        }
        out
    }
}

pub fn extract_patches(img: &Image, cfg: &PatchConfig) -> Result<PatchMatrix> {
    PatchGrid::for_image(cfg, img)?.extract(img)
}

pub fn aggregate_patches(
    pm: &PatchMatrix,
    cfg: &PatchConfig,
    height: usize,
    width: usize,
) -> Result<Image> {
    PatchGrid::new(cfg, height, width)?.aggregate(pm)
}

pub fn overlap_counts(cfg: &PatchConfig, height: usize, width: usize) -> Result<Image> {
    Ok(PatchGrid::new(cfg, height, width)?.overlap_counts())
}
