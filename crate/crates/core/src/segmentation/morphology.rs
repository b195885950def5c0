use serde::{Deserialize, Serialize};

use super::SegmentationError;
use crate::raster::BinaryMask;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeShape {
    Square,
    Disk,
}

/// Centred, point-symmetric set of pixel offsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuringElement {
    shape: SeShape,
    radius: usize,
    offsets: Vec<(isize, isize)>,
}

impl StructuringElement {
    pub fn new(shape: SeShape, radius: usize) -> Result<Self, SegmentationError> {
        if radius == 0 {
            return Err(SegmentationError::InvalidStructuringElement);
        }
        let r = radius as isize;
        let offsets = (-r..=r)
            .flat_map(|dy| (-r..=r).map(move |dx| (dx, dy)))
            .filter(|&(dx, dy)| match shape {
                SeShape::Square => true,
                SeShape::Disk => dx * dx + dy * dy <= r * r,
            })
            .collect();
        Ok(Self {
            shape,
            radius,
            offsets,
        })
    }

    pub fn square(radius: usize) -> Result<Self, SegmentationError> {
        Self::new(SeShape::Square, radius)
    }

    pub fn disk(radius: usize) -> Result<Self, SegmentationError> {
        Self::new(SeShape::Disk, radius)
    }

    pub fn shape(&self) -> SeShape {
        self.shape
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn offsets(&self) -> &[(isize, isize)] {
        &self.offsets
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MorphOp {
    Erode,
    Dilate,
    Open,
    Close,
}

/// Binary morphology; pixels outside the image are background for both
/// erosion and dilation.
pub fn morphology(mask: &BinaryMask, se: &StructuringElement, op: MorphOp) -> BinaryMask {
    match op {
        MorphOp::Erode => erode(mask, se),
        MorphOp::Dilate => dilate(mask, se),
        MorphOp::Open => dilate(&erode(mask, se), se),
        MorphOp::Close => erode(&dilate(mask, se), se),
    }
}

fn erode(mask: &BinaryMask, se: &StructuringElement) -> BinaryMask {
    BinaryMask::from_fn(mask.width(), mask.height(), |x, y| {
        mask.get(x, y)
            && se
                .offsets
                .iter()
                .all(|&(dx, dy)| mask.get_or_false(x as isize + dx, y as isize + dy))
    })
}

fn dilate(mask: &BinaryMask, se: &StructuringElement) -> BinaryMask {
    BinaryMask::from_fn(mask.width(), mask.height(), |x, y| {
        se.offsets
            .iter()
            .any(|&(dx, dy)| mask.get_or_false(x as isize - dx, y as isize - dy))
    })
}
