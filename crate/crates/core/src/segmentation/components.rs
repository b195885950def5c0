use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::raster::{BinaryMask, NEIGHBORS_8};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Connectivity {
    #[serde(rename = "4")]
    Four,
    #[default]
    #[serde(rename = "8")]
    Eight,
}

impl Connectivity {
    pub(crate) fn offsets(self) -> &'static [(isize, isize)] {
        const FOUR: [(isize, isize); 4] = [(0, -1), (1, 0), (0, 1), (-1, 0)];
        match self {
            Connectivity::Four => &FOUR,
            Connectivity::Eight => &NEIGHBORS_8,
        }
    }
}

/// Label foreground components in row-major discovery order. Background is
/// 0, components are numbered from 1. Returns the labels and the pixel count
/// of each component (index `label - 1`).
pub fn label_components(mask: &BinaryMask, connectivity: Connectivity) -> (Vec<u32>, Vec<usize>) {
    let (w, h) = mask.dimensions();
    let mut labels = vec![0u32; w * h];
    let mut sizes = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..w * h {
        if !mask.data()[start] || labels[start] != 0 {
            continue;
        }
        let label = sizes.len() as u32 + 1;
        labels[start] = label;
        queue.push_back(start);
        let mut size = 0;
        while let Some(i) = queue.pop_front() {
            size += 1;
            let (x, y) = ((i % w) as isize, (i / w) as isize);
            for &(dx, dy) in connectivity.offsets() {
                let (nx, ny) = (x + dx, y + dy);
                if mask.get_or_false(nx, ny) {
                    let j = ny as usize * w + nx as usize;
                    if labels[j] == 0 {
                        labels[j] = label;
                        queue.push_back(j);
                    }
                }
            }
        }
        sizes.push(size);
    }
    (labels, sizes)
}

pub fn count_components(mask: &BinaryMask, connectivity: Connectivity) -> usize {
    label_components(mask, connectivity).1.len()
}

/// Drop every component with fewer than `min_size` pixels.
pub fn remove_small_components(
    mask: &BinaryMask,
    min_size: usize,
    connectivity: Connectivity,
) -> BinaryMask {
    if min_size == 0 {
        return mask.clone();
    }
    let (labels, sizes) = label_components(mask, connectivity);
    let data = labels
        .iter()
        .map(|&l| l != 0 && sizes[l as usize - 1] >= min_size)
        .collect();
    BinaryMask::new(mask.width(), mask.height(), data).expect("same dimensions")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_component_removed() {
        // 3-pixel component and a 50-pixel (5x10) component
        let m = BinaryMask::from_fn(20, 12, |x, y| {
            (y == 1 && (1..=3).contains(&x)) || ((8..13).contains(&x) && (1..11).contains(&y))
        });
        let (_, sizes) = label_components(&m, Connectivity::Eight);
        assert_eq!(sizes, vec![3, 50]);
        let out = remove_small_components(&m, 10, Connectivity::Eight);
        assert_eq!(out.count(), 50);
        assert!(!out.get(2, 1));
    }

    #[test]
    fn trivial_cases() {
        let e = BinaryMask::empty(4, 4);
        assert_eq!(remove_small_components(&e, 5, Connectivity::Eight), e);
        let m = BinaryMask::from_fn(4, 4, |x, y| x == y);
        assert_eq!(remove_small_components(&m, 0, Connectivity::Four), m);
    }

    #[test]
    fn diagonal_connectivity() {
        let m = BinaryMask::from_fn(4, 4, |x, y| x == y);
        assert_eq!(count_components(&m, Connectivity::Eight), 1);
        assert_eq!(count_components(&m, Connectivity::Four), 4);
    }
}
