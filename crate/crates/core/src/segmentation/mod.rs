//! Global thresholding and binary morphology.

mod components;
mod morphology;
mod otsu;

pub use components::{count_components, label_components, remove_small_components, Connectivity};
pub use morphology::{morphology, MorphOp, SeShape, StructuringElement};
pub use otsu::{binarize, otsu_threshold, quantize, Histogram256};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SegmentationError {
    #[error("histogram has a single distinct value; no threshold separates two classes")]
    DegenerateHistogram,
    #[error("structuring element radius must be at least 1")]
    InvalidStructuringElement,
}
