//! Noise suppression and vessel enhancement.
//!
//! All neighbourhood operations in this module replicate the edge pixels
//! beyond the image border.

mod frangi;
mod gaussian;
mod hessian;
mod median;

pub use frangi::{frangi_vesselness, single_scale_response, FrangiParams, Polarity, VesselnessMap};
pub use gaussian::{
    convolve, convolve_direct, default_kernel_size, gaussian_density, gaussian_kernel,
    GaussianKernel,
};
pub use hessian::{hessian_at_scale, symmetric_eigen, HessianField};
pub use median::median_filter;

use rayon::prelude::*;
use thiserror::Error;

use crate::raster::FloatImage;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FilterError {
    #[error("window size {0} must be odd")]
    EvenWindow(usize),
    #[error("kernel size {0} must be odd")]
    EvenSize(usize),
    #[error("sigma must be positive and finite, got {0}")]
    NonPositiveSigma(f64),
    #[error("invalid Frangi parameters: {0}")]
    InvalidParams(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Axis {
    X,
    Y,
}

/// One-dimensional tap layout used by the separable passes.
///
/// `taps[k - 1]` is the weight at offset `+k`. The mirrored weight at `-k` is
/// the same (`Even`) or negated (`Odd`). Mirrored samples are always combined
/// before weighting, which makes every pass exactly equivariant under
/// reflection and therefore under quarter turns of the image.
#[derive(Debug, Clone)]
pub(crate) enum Taps {
    /// `center * f(0) + sum_k taps_k * (f(k) + f(-k))`
    Even { center: f64, taps: Vec<f64> },
    /// `sum_k taps_k * (f(k) - f(-k))`
    Odd { taps: Vec<f64> },
    /// Zero-sum even kernel evaluated on differences to the centre sample:
    /// `sum_k taps_k * ((f(k) - f(0)) + (f(-k) - f(0)))`. Adding a constant to
    /// an integer-valued input leaves the output bit-identical.
    EvenZeroSum { taps: Vec<f64> },
}

impl Taps {
    fn radius(&self) -> usize {
        match self {
            Taps::Even { taps, .. } | Taps::Odd { taps } | Taps::EvenZeroSum { taps } => taps.len(),
        }
    }

    #[inline]
    fn apply(&self, line: &[f64], i: usize) -> f64 {
        // `line` is padded by `radius` on both sides; `i` indexes the padded line
        match self {
            Taps::Even { center, taps } => {
                let mut acc = center * line[i];
                for (k, t) in taps.iter().enumerate() {
                    let k = k + 1;
                    acc += t * (line[i + k] + line[i - k]);
                }
                acc
            }
            Taps::Odd { taps } => {
                let mut acc = 0.0;
                for (k, t) in taps.iter().enumerate() {
                    let k = k + 1;
                    acc += t * (line[i + k] - line[i - k]);
                }
                acc
            }
            Taps::EvenZeroSum { taps } => {
                let c = line[i];
                let mut acc = 0.0;
                for (k, t) in taps.iter().enumerate() {
                    let k = k + 1;
                    acc += t * ((line[i + k] - c) + (line[i - k] - c));
                }
                acc
            }
        }
    }
}

/// Correlate every row (`Axis::X`) or column (`Axis::Y`) with `taps`.
pub(crate) fn separable_pass(image: &FloatImage, taps: &Taps, axis: Axis) -> FloatImage {
    let (w, h) = image.dimensions();
    let r = taps.radius();
    let src = image.data();
    let mut out = vec![0.0; w * h];
    match axis {
        Axis::X => {
            out.par_chunks_mut(w).enumerate().for_each(|(y, row_out)| {
                let row = &src[y * w..(y + 1) * w];
                let line = pad_line(row.iter().copied(), w, r);
                for (x, o) in row_out.iter_mut().enumerate() {
                    *o = taps.apply(&line, x + r);
                }
            });
        }
        Axis::Y => {
            let cols: Vec<Vec<f64>> = (0..w)
                .into_par_iter()
                .map(|x| {
                    let line = pad_line((0..h).map(|y| src[y * w + x]), h, r);
                    (0..h).map(|y| taps.apply(&line, y + r)).collect()
                })
                .collect();
            for (x, col) in cols.iter().enumerate() {
                for (y, v) in col.iter().enumerate() {
                    out[y * w + x] = *v;
                }
            }
        }
    }
    FloatImage::from_raw(w, h, out)
}

fn pad_line(values: impl Iterator<Item = f64>, n: usize, r: usize) -> Vec<f64> {
    let mut line = Vec::with_capacity(n + 2 * r);
    let vals: Vec<f64> = values.collect();
    line.extend(std::iter::repeat_n(vals[0], r));
    line.extend_from_slice(&vals);
    line.extend(std::iter::repeat_n(vals[n - 1], r));
    line
}

pub(crate) fn check_sigma(sigma: f64) -> Result<(), FilterError> {
    if sigma.is_finite() && sigma > 0.0 {
        Ok(())
    } else {
        Err(FilterError::NonPositiveSigma(sigma))
    }
}
