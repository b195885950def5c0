use super::{check_sigma, separable_pass, Axis, FilterError, Taps};
use crate::raster::FloatImage;

/// Normalised square Gaussian mask.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianKernel {
    sigma: f64,
    size: usize,
    /// `size * size` weights, row-major, summing to one.
    coefficients: Vec<f64>,
    /// Normalised 1-D factor; the 2-D mask is its outer product.
    profile: Vec<f64>,
}

impl GaussianKernel {
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn radius(&self) -> usize {
        self.size / 2
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Weight at mask position `(x, y)`, `0 <= x, y < size`.
    pub fn coefficient(&self, x: usize, y: usize) -> f64 {
        self.coefficients[y * self.size + x]
    }

    pub fn profile(&self) -> &[f64] {
        &self.profile
    }

    pub(crate) fn taps(&self) -> Taps {
        let r = self.radius();
        Taps::Even {
            center: self.profile[r],
            taps: self.profile[r + 1..].to_vec(),
        }
    }
}

/// Smallest odd integer not below `6 * sigma`.
pub fn default_kernel_size(sigma: f64) -> usize {
    let n = (6.0 * sigma).ceil().max(1.0) as usize;
    if n.is_multiple_of(2) {
        n + 1
    } else {
        n
    }
}

/// Continuous 2-D Gaussian `exp(-(dx^2 + dy^2) / (2 s^2)) / (2 pi s^2)` at an
/// offset from the mask centre.
pub fn gaussian_density(sigma: f64, dx: f64, dy: f64) -> f64 {
    let s2 = sigma * sigma;
    (-(dx * dx + dy * dy) / (2.0 * s2)).exp() / (2.0 * std::f64::consts::PI * s2)
}

/// Build a `size x size` mask from the Gaussian density, normalised to sum to
/// one. When `size` is `None` the [`default_kernel_size`] rule applies.
pub fn gaussian_kernel(sigma: f64, size: Option<usize>) -> Result<GaussianKernel, FilterError> {
    check_sigma(sigma)?;
    let size = size.unwrap_or_else(|| default_kernel_size(sigma));
    if size.is_multiple_of(2) {
        return Err(FilterError::EvenSize(size));
    }
    let c = (size / 2) as f64;
    let mut coefficients = Vec::with_capacity(size * size);
    for y in 0..size {
        for x in 0..size {
            coefficients.push(gaussian_density(sigma, x as f64 - c, y as f64 - c));
        }
    }
    let sum: f64 = coefficients.iter().sum();
    coefficients.iter_mut().for_each(|v| *v /= sum);

    let mut profile: Vec<f64> = (0..size)
        .map(|i| {
            let d = i as f64 - c;
            (-(d * d) / (2.0 * sigma * sigma)).exp()
        })
        .collect();
    let psum: f64 = profile.iter().sum();
    profile.iter_mut().for_each(|v| *v /= psum);

    Ok(GaussianKernel {
        sigma,
        size,
        coefficients,
        profile,
    })
}

/// Smooth `image` with `kernel` (edge replication).
///
/// Runs the separable factorisation in both axis orders and averages them,
/// so a quarter turn of the input gives a quarter turn of the output
/// exactly. Agrees with [`convolve_direct`] to rounding error.
pub fn convolve(image: &FloatImage, kernel: &GaussianKernel) -> FloatImage {
    if kernel.size() == 1 {
        return image.clone();
    }
    let taps = kernel.taps();
    let xy = separable_pass(&separable_pass(image, &taps, Axis::X), &taps, Axis::Y);
    let yx = separable_pass(&separable_pass(image, &taps, Axis::Y), &taps, Axis::X);
    let data = xy
        .data()
        .iter()
        .zip(yx.data())
        .map(|(a, b)| 0.5 * (a + b))
        .collect();
    FloatImage::from_raw(image.width(), image.height(), data)
}

/// Plain 2-D sum of products over the full mask (edge replication).
pub fn convolve_direct(image: &FloatImage, kernel: &GaussianKernel) -> FloatImage {
    let r = kernel.radius() as isize;
    FloatImage::from_fn(image.width(), image.height(), |x, y| {
        let mut acc = 0.0;
        for ky in -r..=r {
            for kx in -r..=r {
                let w = kernel.coefficient((kx + r) as usize, (ky + r) as usize);
                acc += w * image.get_clamped(x as isize + kx, y as isize + ky);
            }
        }
        acc
    })
}
