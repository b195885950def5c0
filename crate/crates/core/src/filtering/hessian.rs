use super::gaussian::default_kernel_size;
use super::{check_sigma, separable_pass, Axis, FilterError, Taps};
use crate::raster::FloatImage;

/// Scale-normalised second derivatives of the Gaussian-smoothed image
/// (each component already multiplied by `sigma^2`).
#[derive(Debug, Clone, PartialEq)]
pub struct HessianField {
    pub sigma: f64,
    pub dxx: FloatImage,
    pub dyy: FloatImage,
    pub dxy: FloatImage,
}

struct DerivativeTaps {
    smooth: Taps,
    first: Taps,
    second: Taps,
}

/// Sampled Gaussian derivative kernels on `[-r, r]`, `r = (size - 1) / 2`.
///
/// The sampled first and second derivative kernels are rescaled so that
/// their moments are exact on the lattice: the first derivative of `x` is 1
/// and the second derivative of `x^2` is 2. Quadratic inputs therefore give
/// exact derivatives away from the border.
fn derivative_taps(sigma: f64) -> DerivativeTaps {
    let r = default_kernel_size(sigma).max(3) / 2;
    let s2 = sigma * sigma;
    let g: Vec<f64> = (0..=r)
        .map(|k| (-((k * k) as f64) / (2.0 * s2)).exp())
        .collect();
    let norm = g[0] + 2.0 * g[1..].iter().sum::<f64>();
    let g: Vec<f64> = g.iter().map(|v| v / norm).collect();

    // correlation convention: out(x) = sum_k t(k) f(x + k)
    let first_raw: Vec<f64> = (1..=r).map(|k| k as f64 / s2 * g[k]).collect();
    let m1: f64 = first_raw
        .iter()
        .enumerate()
        .map(|(i, t)| 2.0 * (i + 1) as f64 * t)
        .sum();
    let first: Vec<f64> = first_raw.iter().map(|t| t / m1).collect();

    let second_raw: Vec<f64> = (1..=r)
        .map(|k| {
            let k2 = (k * k) as f64;
            (k2 / (s2 * s2) - 1.0 / s2) * g[k]
        })
        .collect();
    // sum_k k^2 t(k) over both signs must equal 2
    let m2: f64 = second_raw
        .iter()
        .enumerate()
        .map(|(i, t)| 2.0 * ((i + 1) * (i + 1)) as f64 * t)
        .sum();
    let second: Vec<f64> = second_raw.iter().map(|t| 2.0 * t / m2).collect();

    DerivativeTaps {
        smooth: Taps::Even {
            center: g[0],
            taps: g[1..].to_vec(),
        },
        first: Taps::Odd { taps: first },
        second: Taps::EvenZeroSum { taps: second },
    }
}

/// Second-derivative-of-Gaussian responses at scale `sigma`, scaled by
/// `sigma^2`. The derivative pass always runs first so a constant offset
/// in the input cancels before any smoothing.
pub fn hessian_at_scale(image: &FloatImage, sigma: f64) -> Result<HessianField, FilterError> {
    check_sigma(sigma)?;
    let t = derivative_taps(sigma);
    let s2 = sigma * sigma;
    let scale = |img: FloatImage| img.map(|v| v * s2);

    let dxx = separable_pass(
        &separable_pass(image, &t.second, Axis::X),
        &t.smooth,
        Axis::Y,
    );
    let dyy = separable_pass(
        &separable_pass(image, &t.second, Axis::Y),
        &t.smooth,
        Axis::X,
    );
    let dxy = separable_pass(&separable_pass(image, &t.first, Axis::X), &t.first, Axis::Y);
    Ok(HessianField {
        sigma,
        dxx: scale(dxx),
        dyy: scale(dyy),
        dxy: scale(dxy),
    })
}

/// Eigen-decomposition of `[[a, b], [b, c]]`.
///
/// Returns `(l1, l2, angle)` with `|l1| <= |l2|` (ties resolved by giving
/// `l1` the smaller signed value) and `angle` the direction of the `l1`
/// eigenvector in `[0, pi)`. An isotropic matrix reports angle 0.
pub fn symmetric_eigen(a: f64, b: f64, c: f64) -> (f64, f64, f64) {
    let mean = 0.5 * (a + c);
    let dev = (0.5 * (a - c)).hypot(b);
    let hi = mean + dev;
    let lo = mean - dev;
    let (l1, l2) = if hi.abs() < lo.abs() {
        (hi, lo)
    } else {
        (lo, hi)
    };

    let v1 = (b, l1 - a);
    let v2 = (l1 - c, b);
    let n1 = v1.0 * v1.0 + v1.1 * v1.1;
    let n2 = v2.0 * v2.0 + v2.1 * v2.1;
    let (vx, vy) = if n1 >= n2 { v1 } else { v2 };
    let angle = if vx == 0.0 && vy == 0.0 {
        0.0
    } else {
        let mut t = vy.atan2(vx);
        if t < 0.0 {
            t += std::f64::consts::PI;
        }
        if t >= std::f64::consts::PI {
            t -= std::f64::consts::PI;
        }
        t
    };
    (l1, l2, angle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn interior(w: usize, h: usize, margin: usize) -> impl Iterator<Item = (usize, usize)> {
        (margin..h - margin).flat_map(move |y| (margin..w - margin).map(move |x| (x, y)))
    }

    #[test]
    fn constant_image_has_zero_hessian() {
        let img = FloatImage::from_fn(20, 20, |_, _| 77.0);
        let h = hessian_at_scale(&img, 2.0).unwrap();
        for f in [&h.dxx, &h.dyy, &h.dxy] {
            assert!(f.data().iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn quadratic_phantoms() {
        for sigma in [1.0f64, 1.5, 2.0, 3.0] {
            let s2 = sigma * sigma;
            let m = (3.0 * sigma).ceil() as usize + 1;
            let xx = FloatImage::from_fn(40, 40, |x, _| (x * x) as f64);
            let h = hessian_at_scale(&xx, sigma).unwrap();
            for (x, y) in interior(40, 40, m) {
                assert!((h.dxx.get(x, y) - 2.0 * s2).abs() < 0.05 * 2.0 * s2);
                assert!(h.dyy.get(x, y).abs() < 1e-6);
                assert!(h.dxy.get(x, y).abs() < 1e-6);
            }
            let xy = FloatImage::from_fn(40, 40, |x, y| (x * y) as f64);
            let h = hessian_at_scale(&xy, sigma).unwrap();
            for (x, y) in interior(40, 40, m) {
                assert!((h.dxy.get(x, y) - s2).abs() < 0.05 * s2);
            }
        }
    }

    #[test]
    fn non_positive_sigma() {
        let img = FloatImage::zeros(3, 3);
        assert!(matches!(
            hessian_at_scale(&img, -1.0),
            Err(FilterError::NonPositiveSigma(_))
        ));
    }

    #[test]
    fn eigen_ordering_and_direction() {
        // vertical dark line: strong positive curvature across x
        let (l1, l2, a) = symmetric_eigen(4.0, 0.0, 0.0);
        assert_eq!((l1, l2), (0.0, 4.0));
        assert!((a - PI / 2.0).abs() < 1e-12);

        let (l1, l2, a) = symmetric_eigen(0.0, 0.0, 4.0);
        assert_eq!((l1, l2), (0.0, 4.0));
        assert!(a.abs() < 1e-12);

        // tie |l1| = |l2|: l1 gets the negative one
        let (l1, l2, _) = symmetric_eigen(3.0, 0.0, -3.0);
        assert_eq!((l1, l2), (-3.0, 3.0));

        let (_, _, a) = symmetric_eigen(2.0, 0.0, 2.0);
        assert_eq!(a, 0.0);

        // 45 degree ridge: eigenvector of the small eigenvalue along (1, 1)
        let (l1, l2, a) = symmetric_eigen(1.0, -1.0, 1.0);
        assert!(l1.abs() < 1e-12 && (l2 - 2.0).abs() < 1e-12);
        assert!((a - PI / 4.0).abs() < 1e-12);
    }
}
