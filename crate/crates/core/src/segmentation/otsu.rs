use num_bigint::BigUint;

use super::SegmentationError;
use crate::raster::{BinaryMask, FloatImage, GrayImage};

/// 256-bin intensity histogram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram256 {
    counts: [u64; 256],
    total: u64,
}

impl Histogram256 {
    pub fn from_counts(counts: [u64; 256]) -> Self {
        let total = counts.iter().sum();
        Self { counts, total }
    }

    pub fn from_gray(image: &GrayImage) -> Self {
        let mut counts = [0u64; 256];
        for &v in image.data() {
            counts[v as usize] += 1;
        }
        Self::from_counts(counts)
    }

    /// Histogram of [`quantize`]d values.
    pub fn from_float(image: &FloatImage) -> Self {
        Self::from_gray(&quantize(image))
    }

    pub fn counts(&self) -> &[u64; 256] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn distinct_levels(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }
}

/// Min-max quantisation of a real image to 256 levels (rounded). Constant
/// images quantise to all zeros.
pub fn quantize(image: &FloatImage) -> GrayImage {
    image.to_gray_rescaled()
}

/// Otsu's threshold: the level `t` maximising the between-class variance of
/// the split `{v <= t} | {v > t}`. Scores are compared exactly in integer
/// arithmetic; ties go to the smallest `t`.
pub fn otsu_threshold(hist: &Histogram256) -> Result<u8, SegmentationError> {
    if hist.distinct_levels() < 2 {
        return Err(SegmentationError::DegenerateHistogram);
    }
    let n = u128::from(hist.total);
    let sum: u128 = hist
        .counts
        .iter()
        .enumerate()
        .map(|(i, &c)| i as u128 * u128::from(c))
        .sum();

    // between-class variance = (N*S0 - N0*S)^2 / (N^2 * N0 * N1);
    // N^2 is common to every candidate and dropped
    let mut best_t = 0u8;
    let mut best: Option<(BigUint, BigUint)> = None;
    let (mut n0, mut s0) = (0u128, 0u128);
    for t in 0..=255usize {
        n0 += u128::from(hist.counts[t]);
        s0 += t as u128 * u128::from(hist.counts[t]);
        let n1 = n - n0;
        if n0 == 0 || n1 == 0 {
            continue;
        }
        let diff = (n * s0).abs_diff(n0 * sum);
        let num = BigUint::from(diff).pow(2);
        let den = BigUint::from(n0) * BigUint::from(n1);
        let better = match &best {
            None => true,
            Some((bn, bd)) => &num * bd > bn * &den,
        };
        if better {
            best = Some((num, den));
            best_t = t as u8;
        }
    }
    Ok(best_t)
}

/// Foreground where `pixel > t`. `t` may lie outside `0..=255`.
pub fn binarize(image: &GrayImage, t: i32) -> BinaryMask {
    BinaryMask::from_fn(image.width(), image.height(), |x, y| {
        i32::from(image.get(x, y)) > t
    })
}
