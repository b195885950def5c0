//! Canny contour detection.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::filtering::{convolve, gaussian_kernel, FilterError};
use crate::raster::{BinaryMask, FloatImage, GrayImage, NEIGHBORS_8};
use crate::segmentation::{otsu_threshold, Histogram256};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EdgeError {
    #[error("low threshold {low} must be below high threshold {high}")]
    InvalidThresholdOrder { low: f64, high: f64 },
    #[error("thresholds must lie in (0, 1], got low {low} high {high}")]
    ThresholdOutOfRange { low: f64, high: f64 },
    #[error(transparent)]
    Filter(#[from] FilterError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradientField {
    pub gx: FloatImage,
    pub gy: FloatImage,
    pub magnitude: FloatImage,
    /// `atan2(gy, gx)` in `(-pi, pi]`.
    pub direction: FloatImage,
}

/// 3x3 Sobel pair with replicated borders.
///
/// `gx = (d(y-1) + d(y+1)) + 2 d(y)` with `d(r)` the horizontal central
/// difference on row `r`, and `gy` likewise on columns. Grouping the terms
/// this way keeps the result exactly equivariant under quarter turns.
pub fn sobel_gradients(image: &FloatImage) -> GradientField {
    let (w, h) = image.dimensions();
    let f = |x: usize, y: usize, dx: isize, dy: isize| {
        image.get_clamped(x as isize + dx, y as isize + dy)
    };
    let mut gx = Vec::with_capacity(w * h);
    let mut gy = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            let dx = |r: isize| f(x, y, 1, r) - f(x, y, -1, r);
            let dy = |c: isize| f(x, y, c, 1) - f(x, y, c, -1);
            gx.push((dx(-1) + dx(1)) + 2.0 * dx(0));
            gy.push((dy(-1) + dy(1)) + 2.0 * dy(0));
        }
    }
    let magnitude: Vec<f64> = gx
        .iter()
        .zip(&gy)
        .map(|(a, b)| (a * a + b * b).sqrt())
        .collect();
    let direction: Vec<f64> = gx.iter().zip(&gy).map(|(a, b)| b.atan2(*a)).collect();
    GradientField {
        gx: FloatImage::from_raw(w, h, gx),
        gy: FloatImage::from_raw(w, h, gy),
        magnitude: FloatImage::from_raw(w, h, magnitude),
        direction: FloatImage::from_raw(w, h, direction),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CannyParams {
    pub sigma: f64,
    /// Fractions of the largest gradient magnitude.
    pub low: f64,
    pub high: f64,
    /// Replace `high` by the Otsu level of the quantized magnitudes.
    pub auto_high: bool,
}

impl Default for CannyParams {
    fn default() -> Self {
        Self {
            sigma: 1.0,
            low: 0.15,
            high: 0.4,
            auto_high: false,
        }
    }
}

/// Offset of the neighbour along the gradient, quantized to 0, 45, 90 or
/// 135 degrees. Angles exactly on a bin boundary go to the lower bin.
pub fn quantized_offset(gx: f64, gy: f64) -> (isize, isize) {
    const TAN_22_5: f64 = 0.414_213_562_373_095_03;
    let (ax, ay) = (gx.abs(), gy.abs());
    if ay <= TAN_22_5 * ax {
        (1, 0)
    } else if ax < TAN_22_5 * ay || (ax == TAN_22_5 * ay && gx * gy > 0.0) {
        (0, 1)
    } else if gx * gy > 0.0 {
        (1, 1)
    } else {
        (-1, 1)
    }
}

/// Pixels that are local maxima of the gradient magnitude along the
/// quantized gradient direction: strictly above the neighbour behind and at
/// least the neighbour ahead.
pub fn non_maximum_suppression(g: &GradientField) -> BinaryMask {
    let (w, h) = g.magnitude.dimensions();
    BinaryMask::from_fn(w, h, |x, y| {
        let m = g.magnitude.get(x, y);
        if m <= 0.0 {
            return false;
        }
        let (dx, dy) = quantized_offset(g.gx.get(x, y), g.gy.get(x, y));
        let (x, y) = (x as isize, y as isize);
        m > g.magnitude.get_clamped(x - dx, y - dy) && m >= g.magnitude.get_clamped(x + dx, y + dy)
    })
}

/// Strong pixels plus weak pixels 8-connected to them through weak pixels.
pub fn hysteresis(
    candidates: &BinaryMask,
    magnitude: &FloatImage,
    low: f64,
    high: f64,
) -> BinaryMask {
    let (w, h) = candidates.dimensions();
    let weak = |i: usize| candidates.data()[i] && magnitude.data()[i] >= low;
    let mut out = vec![false; w * h];
    let mut queue = VecDeque::new();
    for (i, kept) in out.iter_mut().enumerate() {
        if candidates.data()[i] && magnitude.data()[i] >= high {
            *kept = true;
            queue.push_back(i);
        }
    }
    while let Some(i) = queue.pop_front() {
        let (x, y) = ((i % w) as isize, (i / w) as isize);
        for (dx, dy) in NEIGHBORS_8 {
            let (nx, ny) = (x + dx, y + dy);
            if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
                continue;
            }
            let j = ny as usize * w + nx as usize;
            if !out[j] && weak(j) {
                out[j] = true;
                queue.push_back(j);
            }
        }
    }
    BinaryMask::new(w, h, out).expect("dimensions match")
}

fn check_fractions(low: f64, high: f64) -> Result<(), EdgeError> {
    if !(low > 0.0 && high <= 1.0 && low.is_finite() && high.is_finite()) {
        return Err(EdgeError::ThresholdOutOfRange { low, high });
    }
    if low >= high {
        return Err(EdgeError::InvalidThresholdOrder { low, high });
    }
    Ok(())
}

/// Canny detector on a real-valued image.
pub fn canny_float(image: &FloatImage, params: &CannyParams) -> Result<BinaryMask, EdgeError> {
    if !params.auto_high {
        check_fractions(params.low, params.high)?;
    }
    let kernel = gaussian_kernel(params.sigma, None)?;
    let grad = sobel_gradients(&convolve(image, &kernel));
    let (_, max) = grad.magnitude.min_max();
    let (w, h) = image.dimensions();
    if max <= 0.0 {
        return Ok(BinaryMask::empty(w, h));
    }
    let high = if params.auto_high {
        let q = GrayImage::from_fn(w, h, |x, y| {
            (grad.magnitude.get(x, y) / max * 255.0).round() as u8
        });
        match otsu_threshold(&Histogram256::from_gray(&q)) {
            Ok(t) => ((f64::from(t) + 0.5) / 255.0).min(1.0),
            Err(_) => params.high,
        }
    } else {
        params.high
    };
    check_fractions(params.low, high)?;
    let nms = non_maximum_suppression(&grad);
    Ok(hysteresis(
        &nms,
        &grad.magnitude,
        params.low * max,
        high * max,
    ))
}

/// Canny detector: Gaussian smoothing, Sobel gradients, non-maximum
/// suppression along the quantized direction and hysteresis with thresholds
/// given as fractions of the largest smoothed gradient magnitude.
pub fn canny(image: &GrayImage, params: &CannyParams) -> Result<BinaryMask, EdgeError> {
    canny_float(&image.to_float(), params)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(sigma: f64, low: f64, high: f64) -> CannyParams {
        CannyParams {
            sigma,
            low,
            high,
            auto_high: false,
        }
    }

    #[test]
    fn ramps() {
        let g = sobel_gradients(&FloatImage::from_fn(9, 9, |x, _| x as f64));
        assert_eq!(g.gx.get(4, 4), 8.0);
        assert_eq!(g.gy.get(4, 4), 0.0);
        let g = sobel_gradients(&FloatImage::from_fn(9, 9, |_, y| y as f64));
        assert_eq!(g.gy.get(4, 4), 8.0);
        assert_eq!(g.gx.get(4, 4), 0.0);
        let g = sobel_gradients(&FloatImage::from_fn(5, 5, |_, _| 3.0));
        assert!(g.magnitude.data().iter().all(|&m| m == 0.0));
    }

    #[test]
    fn constant_image_no_edges() {
        let img = GrayImage::filled(16, 16, 90);
        assert_eq!(canny(&img, &CannyParams::default()).unwrap().count(), 0);
    }

    #[test]
    fn threshold_validation() {
        let img = GrayImage::filled(4, 4, 0);
        assert!(matches!(
            canny(&img, &params(1.0, 0.5, 0.5)),
            Err(EdgeError::InvalidThresholdOrder { .. })
        ));
        assert!(matches!(
            canny(&img, &params(1.0, 0.0, 0.5)),
            Err(EdgeError::ThresholdOutOfRange { .. })
        ));
        assert!(matches!(
            canny(&img, &params(0.0, 0.1, 0.5)),
            Err(EdgeError::Filter(_))
        ));
    }

    #[test]
    fn vertical_step_gives_one_column() {
        let k = 12;
        let img = GrayImage::from_fn(24, 20, |x, _| if x < k { 0 } else { 255 });
        let e = canny(&img, &params(1.0, 0.2, 0.5)).unwrap();
        for y in 0..20 {
            let cols: Vec<usize> = (0..24).filter(|&x| e.get(x, y)).collect();
            assert_eq!(cols.len(), 1, "row {y}: {cols:?}");
            assert!(cols[0] == k - 1 || cols[0] == k);
        }
    }

    #[test]
    fn weak_half_kept_by_hysteresis() {
        // a 255 step on the upper third whose contrast fades linearly to
        // 77 (0.3 of the strong contrast) and stays there on the lower third
        let contrast = |y: usize| 255.0 - 178.0 * ((y as f64 - 20.0) / 20.0).clamp(0.0, 1.0);
        let img = GrayImage::from_fn(
            24,
            60,
            |x, y| if x < 12 { 0 } else { contrast(y).round() as u8 },
        );
        let e = canny(&img, &params(1.0, 0.2, 0.5)).unwrap();
        for y in 0..60 {
            assert!((11..13).any(|x| e.get(x, y)), "row {y}");
        }
        // with low above the weak contrast the lower rows disappear
        let strict = canny(&img, &params(1.0, 0.35, 0.5)).unwrap();
        assert!(!(45..60).any(|y| (0..24).any(|x| strict.get(x, y))));
    }

    #[test]
    fn quantization_bins() {
        assert_eq!(quantized_offset(1.0, 0.0), (1, 0));
        assert_eq!(quantized_offset(-1.0, 0.1), (1, 0));
        assert_eq!(quantized_offset(0.0, 1.0), (0, 1));
        assert_eq!(quantized_offset(1.0, 1.0), (1, 1));
        assert_eq!(quantized_offset(-1.0, 1.0), (-1, 1));
        assert_eq!(quantized_offset(1.0, -1.0), (-1, 1));
    }
}
