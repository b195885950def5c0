//! Multiscale Frangi vesselness.
//!
//! Per scale the Hessian eigenvalues `|l1| <= |l2|` give a blobness ratio
//! `Rb = |l1| / |l2|` and a structureness `S = sqrt(l1^2 + l2^2)`; the
//! response is `exp(-Rb^2 / 2 beta^2) * (1 - exp(-S^2 / 2 c^2))` when the
//! sign of `l2` matches the requested polarity, else 0. The map keeps the
//! maximum over scales.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::hessian::{hessian_at_scale, symmetric_eigen, HessianField};
use super::FilterError;
use crate::raster::FloatImage;

/// Which tubes are enhanced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Polarity {
    /// Dark vessels on a bright background (iodine contrast on X-ray).
    #[default]
    DarkOnBright,
    BrightOnDark,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FrangiParams {
    /// Strictly increasing scales in pixels.
    pub scales: Vec<f64>,
    pub beta: f64,
    /// Structureness sensitivity. `None` picks half of the largest `S` in
    /// the image, separately for each scale.
    pub c: Option<f64>,
    pub polarity: Polarity,
}

impl Default for FrangiParams {
    fn default() -> Self {
        Self {
            scales: vec![1.0, 1.5, 2.0, 3.0, 4.0],
            beta: 0.5,
            c: None,
            polarity: Polarity::DarkOnBright,
        }
    }
}

impl FrangiParams {
    pub fn with_scales(scales: impl Into<Vec<f64>>) -> Self {
        Self {
            scales: scales.into(),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), FilterError> {
        let bad = |m: &str| Err(FilterError::InvalidParams(m.to_string()));
        if self.scales.is_empty() {
            return bad("scale list is empty");
        }
        if self.scales.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return bad("scales must be positive");
        }
        if self.scales.windows(2).any(|w| w[0] >= w[1]) {
            return bad("scales must be strictly increasing");
        }
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return bad("beta must be positive");
        }
        if let Some(c) = self.c {
            if !(c.is_finite() && c > 0.0) {
                return bad("c must be positive");
            }
        }
        Ok(())
    }
}

/// Per-pixel vesselness magnitude in `[0, 1]`, vessel direction in
/// `[0, pi)` and the scale that produced the magnitude.
#[derive(Debug, Clone, PartialEq)]
pub struct VesselnessMap {
    pub magnitude: FloatImage,
    pub orientation: FloatImage,
    pub best_scale: FloatImage,
}

impl VesselnessMap {
    pub fn width(&self) -> usize {
        self.magnitude.width()
    }

    pub fn height(&self) -> usize {
        self.magnitude.height()
    }
}

/// Response and direction at a single scale.
pub fn single_scale_response(
    hessian: &HessianField,
    beta: f64,
    c: Option<f64>,
    polarity: Polarity,
) -> (FloatImage, FloatImage) {
    let (w, h) = hessian.dxx.dimensions();
    let eig: Vec<(f64, f64, f64)> = hessian
        .dxx
        .data()
        .iter()
        .zip(hessian.dxy.data())
        .zip(hessian.dyy.data())
        .map(|((&a, &b), &c)| symmetric_eigen(a, b, c))
        .collect();

    let c = c.unwrap_or_else(|| {
        let max_s = eig
            .iter()
            .map(|(l1, l2, _)| l1.hypot(*l2))
            .fold(0.0, f64::max);
        if max_s > 0.0 {
            0.5 * max_s
        } else {
            1e-6
        }
    });
    let two_b2 = 2.0 * beta * beta;
    let two_c2 = 2.0 * c * c;

    let mut response = Vec::with_capacity(w * h);
    let mut angle = Vec::with_capacity(w * h);
    for &(l1, l2, theta) in &eig {
        let passes = match polarity {
            Polarity::DarkOnBright => l2 > 0.0,
            Polarity::BrightOnDark => l2 < 0.0,
        };
        let v = if passes {
            let rb = l1.abs() / l2.abs();
            let s2 = l1 * l1 + l2 * l2;
            ((-rb * rb / two_b2).exp() * (1.0 - (-s2 / two_c2).exp())).clamp(0.0, 1.0)
        } else {
            0.0
        };
        response.push(v);
        angle.push(theta);
    }
    (
        FloatImage::from_raw(w, h, response),
        FloatImage::from_raw(w, h, angle),
    )
}

/// Multiscale vesselness. Scales are evaluated in parallel and reduced in
/// list order; on ties the first (smallest) scale wins.
pub fn frangi_vesselness(
    image: &FloatImage,
    params: &FrangiParams,
) -> Result<VesselnessMap, FilterError> {
    params.validate()?;
    let per_scale: Vec<(FloatImage, FloatImage)> = params
        .scales
        .par_iter()
        .map(|&sigma| {
            let hessian = hessian_at_scale(image, sigma)?;
            Ok(single_scale_response(
                &hessian,
                params.beta,
                params.c,
                params.polarity,
            ))
        })
        .collect::<Result<_, FilterError>>()?;

    let (w, h) = image.dimensions();
    let mut magnitude = per_scale[0].0.data().to_vec();
    let mut orientation = per_scale[0].1.data().to_vec();
    let mut best_scale = vec![params.scales[0]; w * h];
    for ((resp, angle), &sigma) in per_scale.iter().zip(&params.scales).skip(1) {
        for i in 0..w * h {
            if resp.data()[i] > magnitude[i] {
                magnitude[i] = resp.data()[i];
                orientation[i] = angle.data()[i];
                best_scale[i] = sigma;
            }
        }
    }
    Ok(VesselnessMap {
        magnitude: FloatImage::from_raw(w, h, magnitude),
        orientation: FloatImage::from_raw(w, h, orientation),
        best_scale: FloatImage::from_raw(w, h, best_scale),
    })
}
