use serde::Serialize;

use super::{distance_transform, path_length, GeometryError};
use crate::raster::{BinaryMask, Pixel};

/// Vessel radius sampled along a centerline.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusProfile {
    /// `(arc length, radius)` pairs in pixels, serialized as `[s, r]`.
    pub samples: Vec<(f64, f64)>,
    /// Indices of samples whose path pixel lies outside the mask.
    pub off_mask: Vec<usize>,
}

impl RadiusProfile {
    pub fn mean_radius(&self) -> f64 {
        if self.samples.is_empty() {
            return 0.0;
        }
        self.samples.iter().map(|s| s.1).sum::<f64>() / self.samples.len() as f64
    }
}

/// Sample the maximal inscribed disk radius every `step` pixels of arc
/// length along `path`. Each sample takes the distance-transform value at the
/// path pixel whose arc length is closest (the earlier one on ties).
pub fn estimate_radius(
    path: &[Pixel],
    mask: &BinaryMask,
    step: f64,
) -> Result<RadiusProfile, GeometryError> {
    if path.is_empty() {
        return Err(GeometryError::EmptyPath);
    }
    let step = if step > 0.0 && step.is_finite() {
        step
    } else {
        1.0
    };
    let dt = distance_transform(mask);
    let mut arc = Vec::with_capacity(path.len());
    arc.push(0.0);
    for w in path.windows(2) {
        arc.push(arc[arc.len() - 1] + path_length(w));
    }
    let total = arc[arc.len() - 1];
    let count = (total / step + 1e-9).floor() as usize;

    let mut samples = Vec::with_capacity(count + 1);
    let mut off_mask = Vec::new();
    for k in 0..=count {
        let s = k as f64 * step;
        let i = arc.partition_point(|&a| a < s);
        let idx = if i == 0 {
            0
        } else if i == arc.len() || (s - arc[i - 1]) <= (arc[i] - s) {
            i - 1
        } else {
            i
        };
        let p = path[idx];
        let inside = mask.contains(p) && mask.get(p.x, p.y);
        if !inside {
            off_mask.push(samples.len());
        }
        let r = if inside { dt.get(p.x, p.y) } else { 0.0 };
        samples.push((s, r));
    }
    Ok(RadiusProfile { samples, off_mask })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tube_radius() {
        for (half, expect) in [(3usize, 3.5), (1, 1.5)] {
            let mask = BinaryMask::from_fn(40, 21, |_, y| y.abs_diff(10) <= half);
            let path: Vec<Pixel> = (5..35).map(|x| Pixel::new(x, 10)).collect();
            let prof = estimate_radius(&path, &mask, 1.0).unwrap();
            assert_eq!(prof.samples.len(), 30);
            for &(_, r) in &prof.samples {
                assert!((r - expect).abs() <= 0.5);
            }
            assert!(prof.off_mask.is_empty());
        }
    }

    #[test]
    fn off_mask_sample_flagged() {
        let mask = BinaryMask::from_fn(10, 10, |x, _| x < 5);
        let path = vec![Pixel::new(3, 3), Pixel::new(4, 3), Pixel::new(5, 3)];
        let prof = estimate_radius(&path, &mask, 1.0).unwrap();
        assert_eq!(prof.samples[2].1, 0.0);
        assert_eq!(prof.off_mask, vec![2]);
        assert_eq!(
            estimate_radius(&[], &mask, 1.0),
            Err(GeometryError::EmptyPath)
        );
    }

    #[test]
    fn single_pixel_path() {
        let mask = BinaryMask::from_fn(5, 5, |_, _| true);
        let prof = estimate_radius(&[Pixel::new(2, 2)], &mask, 1.0).unwrap();
        assert_eq!(prof.samples, vec![(0.0, 3.0)]);
    }
}
