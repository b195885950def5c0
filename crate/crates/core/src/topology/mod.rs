//! Skeletons of binary vessel masks.
//!
//! [`skeletonize`] thins a mask to one-pixel-wide curves while keeping its
//! 8-connected topology, [`trace_branches`] splits a skeleton into runs
//! between terminals and [`prune`] removes short spurs.

mod branches;
mod prune;
mod thinning;

pub use branches::trace_branches;
pub use prune::{prune, PruneParams};
pub use thinning::{is_simple, skeletonize};

use serde::Serialize;

use crate::raster::{BinaryMask, Pixel};

/// A thinned mask with its terminal pixels classified.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Skeleton {
    #[serde(skip)]
    pub mask: BinaryMask,
    /// Pixels with exactly one foreground 8-neighbour, row-major.
    pub endpoints: Vec<Pixel>,
    /// Pixels with three or more foreground 8-neighbours, row-major.
    pub branchpoints: Vec<Pixel>,
}

impl Skeleton {
    /// Classify the pixels of an already thin mask. No thinning is done.
    pub fn from_mask(mask: BinaryMask) -> Self {
        let mut endpoints = Vec::new();
        let mut branchpoints = Vec::new();
        for p in mask.pixels() {
            match mask.neighbor_count(p.x, p.y) {
                1 => endpoints.push(p),
                n if n >= 3 => branchpoints.push(p),
                _ => {}
            }
        }
        Self {
            mask,
            endpoints,
            branchpoints,
        }
    }

    pub fn pixel_count(&self) -> usize {
        self.mask.count()
    }

    pub fn is_terminal(&self, p: Pixel) -> bool {
        let n = self.mask.neighbor_count(p.x, p.y);
        n == 1 || n >= 3
    }
}

/// True if some 2x2 window of `mask` is entirely foreground.
pub fn has_square_block(mask: &BinaryMask) -> bool {
    let (w, h) = mask.dimensions();
    (0..h.saturating_sub(1)).any(|y| {
        (0..w.saturating_sub(1)).any(|x| {
            mask.get(x, y) && mask.get(x + 1, y) && mask.get(x, y + 1) && mask.get(x + 1, y + 1)
        })
    })
}
