//! Centerline geometry: spline fitting, lengths, distance maps and radii.

mod distance;
mod radius;
mod spline;

pub use distance::{distance_transform, squared_distance_transform};
pub use radius::{estimate_radius, RadiusProfile};
pub use spline::{fit_natural_spline, CubicSpline, TridiagonalSystem};

use thiserror::Error;

use crate::raster::Pixel;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("a spline needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("point {0} coincides with the next one")]
    DuplicateConsecutivePoints(usize),
    #[error("parameter {t} outside [{min}, {max}]")]
    ParameterOutOfRange { t: f64, min: f64, max: f64 },
    #[error("path is empty")]
    EmptyPath,
}

/// Anything that can stand for a point in the plane.
pub trait PlanePoint: Copy {
    fn xy(self) -> (f64, f64);
}

impl PlanePoint for Pixel {
    fn xy(self) -> (f64, f64) {
        (self.x as f64, self.y as f64)
    }
}

impl PlanePoint for (f64, f64) {
    fn xy(self) -> (f64, f64) {
        self
    }
}

/// Sum of Euclidean distances between consecutive points.
pub fn path_length<P: PlanePoint>(points: &[P]) -> f64 {
    points
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0].xy(), w[1].xy());
            (b.0 - a.0).hypot(b.1 - a.1)
        })
        .sum()
}
