//! Raster types shared by every stage, plus image I/O and overlay rendering.
//!
//! All rasters are row-major with the origin at the top-left corner,
//! `x` growing rightward and `y` growing downward.

mod io;
mod overlay;

pub use io::{load_image, load_image_bytes, save_image, to_png_bytes, ToGray};
pub use overlay::{render_overlay, LayerPayload, OverlayLayer, RgbImage};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RasterError {
    #[error("unsupported image format: {0}")]
    UnsupportedFormat(String),
    #[error("corrupt image file: {0}")]
    CorruptFile(String),
    #[error("image has a zero dimension ({width}x{height})")]
    ZeroDimension { width: usize, height: usize },
    #[error("buffer of {len} values does not match {width}x{height}")]
    DimensionMismatch {
        width: usize,
        height: usize,
        len: usize,
    },
    #[error("non-finite value at index {0}")]
    NonFinite(usize),
    #[error("overlay coordinate ({x}, {y}) outside {width}x{height} base image")]
    OutOfBounds {
        x: usize,
        y: usize,
        width: usize,
        height: usize,
    },
    #[error("i/o failure: {0}")]
    IoFailure(#[from] std::io::Error),
}

/// Integer pixel coordinate. Serialized as a `[x, y]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct Pixel {
    pub x: usize,
    pub y: usize,
}

impl Pixel {
    pub const fn new(x: usize, y: usize) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Pixel) -> f64 {
        let dx = self.x as f64 - other.x as f64;
        let dy = self.y as f64 - other.y as f64;
        dx.hypot(dy)
    }

    /// Chebyshev (chessboard) distance.
    pub fn chebyshev(self, other: Pixel) -> usize {
        self.x.abs_diff(other.x).max(self.y.abs_diff(other.y))
    }
}

impl From<[usize; 2]> for Pixel {
    fn from([x, y]: [usize; 2]) -> Self {
        Self { x, y }
    }
}

impl From<Pixel> for [usize; 2] {
    fn from(p: Pixel) -> Self {
        [p.x, p.y]
    }
}

impl From<(usize, usize)> for Pixel {
    fn from((x, y): (usize, usize)) -> Self {
        Self { x, y }
    }
}

fn check_dims(width: usize, height: usize, len: usize) -> Result<(), RasterError> {
    if width == 0 || height == 0 {
        return Err(RasterError::ZeroDimension { width, height });
    }
    if width.checked_mul(height) != Some(len) {
        return Err(RasterError::DimensionMismatch { width, height, len });
    }
    Ok(())
}

macro_rules! raster_common {
    ($ty:ident, $elem:ty) => {
        impl $ty {
            #[inline]
            pub fn width(&self) -> usize {
                self.width
            }

            #[inline]
            pub fn height(&self) -> usize {
                self.height
            }

            #[inline]
            pub fn dimensions(&self) -> (usize, usize) {
                (self.width, self.height)
            }

            #[inline]
            pub fn len(&self) -> usize {
                self.data.len()
            }

            #[inline]
            pub fn is_empty(&self) -> bool {
                self.data.is_empty()
            }

            /// Row-major pixel values.
            #[inline]
            pub fn data(&self) -> &[$elem] {
                &self.data
            }

            #[inline]
            pub fn get(&self, x: usize, y: usize) -> $elem {
                self.data[y * self.width + x]
            }

            /// Value at `(x, y)` with coordinates clamped into the raster
            /// (edge replication).
            #[inline]
            pub fn get_clamped(&self, x: isize, y: isize) -> $elem {
                let cx = x.clamp(0, self.width as isize - 1) as usize;
                let cy = y.clamp(0, self.height as isize - 1) as usize;
                self.data[cy * self.width + cx]
            }

            #[inline]
            pub fn contains(&self, p: Pixel) -> bool {
                p.x < self.width && p.y < self.height
            }

            pub fn from_fn(
                width: usize,
                height: usize,
                mut f: impl FnMut(usize, usize) -> $elem,
            ) -> Self {
                assert!(
                    width > 0 && height > 0,
                    "raster dimensions must be positive"
                );
                let mut data = Vec::with_capacity(width * height);
                for y in 0..height {
                    for x in 0..width {
                        data.push(f(x, y));
                    }
                }
                Self::from_raw(width, height, data)
            }

            /// Quarter turn clockwise: pixel `(x, y)` moves to `(h - 1 - y, x)`.
            pub fn rotate90(&self) -> Self {
                let (w, h) = (self.width, self.height);
                Self::from_fn(h, w, |x, y| self.get(y, h - 1 - x))
            }

            pub fn transpose(&self) -> Self {
                Self::from_fn(self.height, self.width, |x, y| self.get(y, x))
            }
        }
    };
}

/// 8-bit intensity raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

raster_common!(GrayImage, u8);

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self, RasterError> {
        check_dims(width, height, data.len())?;
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        Self::from_fn(width, height, |_, _| value)
    }

    fn from_raw(width: usize, height: usize, data: Vec<u8>) -> Self {
        Self {
            width,
            height,
            data,
        }
    }

    pub fn into_raw(self) -> Vec<u8> {
        self.data
    }

    pub fn to_float(&self) -> FloatImage {
        FloatImage::from_raw(
            self.width,
            self.height,
            self.data.iter().map(|&v| f64::from(v)).collect(),
        )
    }

    /// Photometric inverse `255 - v`.
    pub fn inverted(&self) -> Self {
        Self::from_raw(
            self.width,
            self.height,
            self.data.iter().map(|&v| 255 - v).collect(),
        )
    }
}

impl From<&GrayImage> for FloatImage {
    fn from(g: &GrayImage) -> Self {
        g.to_float()
    }
}

/// Real-valued raster. Values are always finite.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatImage {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

raster_common!(FloatImage, f64);

impl FloatImage {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self, RasterError> {
        check_dims(width, height, data.len())?;
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(RasterError::NonFinite(i));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn zeros(width: usize, height: usize) -> Self {
        Self::from_fn(width, height, |_, _| 0.0)
    }

    pub(crate) fn from_raw(width: usize, height: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), width * height);
        debug_assert!(data.iter().all(|v| v.is_finite()));
        Self {
            width,
            height,
            data,
        }
    }

    pub fn into_raw(self) -> Vec<f64> {
        self.data
    }

    /// `(min, max)` over all pixels.
    pub fn min_max(&self) -> (f64, f64) {
        self.data
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }

    pub fn mean(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        let data: Vec<f64> = self.data.iter().map(|&v| f(v)).collect();
        Self::new(self.width, self.height, data).expect("map produced a non-finite value")
    }

    /// Min-max rescale to `[0, 255]` with rounding. Constant images map to 0.
    pub fn to_gray_rescaled(&self) -> GrayImage {
        let (lo, hi) = self.min_max();
        let span = hi - lo;
        let data = if span > 0.0 {
            self.data
                .iter()
                .map(|&v| ((v - lo) / span * 255.0).round().clamp(0.0, 255.0) as u8)
                .collect()
        } else {
            vec![0; self.data.len()]
        };
        GrayImage::from_raw(self.width, self.height, data)
    }
}

/// Boolean raster. `true` is object (foreground).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    data: Vec<bool>,
}

raster_common!(BinaryMask, bool);

impl BinaryMask {
    pub fn new(width: usize, height: usize, data: Vec<bool>) -> Result<Self, RasterError> {
        check_dims(width, height, data.len())?;
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn empty(width: usize, height: usize) -> Self {
        Self::from_fn(width, height, |_, _| false)
    }

    pub(crate) fn from_raw(width: usize, height: usize, data: Vec<bool>) -> Self {
        debug_assert_eq!(data.len(), width * height);
        Self {
            width,
            height,
            data,
        }
    }

    pub fn from_pixels(width: usize, height: usize, pixels: &[Pixel]) -> Self {
        let mut data = vec![false; width * height];
        for p in pixels {
            data[p.y * width + p.x] = true;
        }
        Self::from_raw(width, height, data)
    }

    pub fn into_raw(self) -> Vec<bool> {
        self.data
    }

    /// Foreground test that treats anything outside the raster as background.
    #[inline]
    pub fn get_or_false(&self, x: isize, y: isize) -> bool {
        x >= 0
            && y >= 0
            && (x as usize) < self.width
            && (y as usize) < self.height
            && self.data[y as usize * self.width + x as usize]
    }

    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    /// Foreground pixels in row-major order.
    pub fn pixels(&self) -> impl Iterator<Item = Pixel> + '_ {
        let w = self.width;
        self.data
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| Pixel::new(i % w, i / w))
    }

    pub fn complement(&self) -> Self {
        Self::from_raw(
            self.width,
            self.height,
            self.data.iter().map(|b| !b).collect(),
        )
    }

    pub fn union(&self, other: &BinaryMask) -> Self {
        assert_eq!(self.dimensions(), other.dimensions());
        Self::from_raw(
            self.width,
            self.height,
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| *a || *b)
                .collect(),
        )
    }

    pub fn intersection(&self, other: &BinaryMask) -> Self {
        assert_eq!(self.dimensions(), other.dimensions());
        Self::from_raw(
            self.width,
            self.height,
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| *a && *b)
                .collect(),
        )
    }

    pub fn is_subset_of(&self, other: &BinaryMask) -> bool {
        self.dimensions() == other.dimensions()
            && self.data.iter().zip(&other.data).all(|(a, b)| !a || *b)
    }

    /// Number of foreground pixels among the 8 neighbours of `(x, y)`.
    pub fn neighbor_count(&self, x: usize, y: usize) -> usize {
        let (x, y) = (x as isize, y as isize);
        NEIGHBORS_8
            .iter()
            .filter(|(dx, dy)| self.get_or_false(x + dx, y + dy))
            .count()
    }

    pub fn to_gray(&self) -> GrayImage {
        GrayImage::from_raw(
            self.width,
            self.height,
            self.data.iter().map(|&b| if b { 255 } else { 0 }).collect(),
        )
    }
}

/// 8-neighbourhood offsets, clockwise starting at north.
pub const NEIGHBORS_8: [(isize, isize); 8] = [
    (0, -1),
    (1, -1),
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
];
