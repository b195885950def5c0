use serde::{Deserialize, Serialize};

use super::{skeletonize, trace_branches, Skeleton};
use crate::raster::{BinaryMask, NEIGHBORS_8};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PruneParams {
    /// Pixels peeled from every end before the regrowth step.
    pub m: usize,
    /// Runs with a free end and fewer pixels than this are deleted.
    pub min_branch: usize,
}

impl Default for PruneParams {
    fn default() -> Self {
        Self {
            m: 0,
            min_branch: 8,
        }
    }
}

fn degree(data: &[bool], w: usize, h: usize, x: usize, y: usize) -> usize {
    NEIGHBORS_8
        .iter()
        .filter(|(dx, dy)| {
            let (nx, ny) = (x as isize + dx, y as isize + dy);
            nx >= 0
                && ny >= 0
                && (nx as usize) < w
                && (ny as usize) < h
                && data[ny as usize * w + nx as usize]
        })
        .count()
}

/// Remove spurs from a skeleton.
///
/// 1. Every run with at least one free endpoint whose length is below
///    `min_branch` is deleted. Length counts the run's pixels minus the
///    branchpoint it hangs from; a run with two free ends counts all pixels.
///    Runs between two branchpoints are never touched.
/// 2. `m` times, all pixels with exactly one neighbour are removed.
/// 3. The pixels left with at most one neighbour are dilated `m` times with
///    a 3x3 square, each time intersected with the skeleton from step 1,
///    and the result is added back. Main lines regain the pixels lost in
///    step 2 while deleted spurs stay deleted.
/// 4. The result is thinned again.
pub fn prune(skel: &Skeleton, params: &PruneParams) -> Skeleton {
    let (w, h) = skel.mask.dimensions();
    let mut base = skel.mask.data().to_vec();
    let mut changed = false;

    for run in trace_branches(skel) {
        let first_free = skel.mask.neighbor_count(run[0].x, run[0].y) <= 1;
        let last = run[run.len() - 1];
        let last_free = skel.mask.neighbor_count(last.x, last.y) <= 1;
        if !(first_free || last_free) {
            continue;
        }
        let length = if first_free && last_free {
            run.len()
        } else {
            run.len() - 1
        };
        if length >= params.min_branch {
            continue;
        }
        let keep_first = !first_free;
        let keep_last = !last_free;
        for (i, p) in run.iter().enumerate() {
            if (i == 0 && keep_first) || (i == run.len() - 1 && keep_last) {
                continue;
            }
            base[p.y * w + p.x] = false;
            changed = true;
        }
    }

    let mut peeled = base.clone();
    for _ in 0..params.m {
        let ends: Vec<usize> = (0..w * h)
            .filter(|&i| peeled[i] && degree(&peeled, w, h, i % w, i / w) == 1)
            .collect();
        for i in ends {
            peeled[i] = false;
        }
    }

    if params.m > 0 {
        let mut grown: Vec<bool> = (0..w * h)
            .map(|i| peeled[i] && degree(&peeled, w, h, i % w, i / w) <= 1)
            .collect();
        for _ in 0..params.m {
            let prev = grown.clone();
            for y in 0..h {
                for x in 0..w {
                    let i = y * w + x;
                    if grown[i] || !base[i] {
                        continue;
                    }
                    grown[i] = NEIGHBORS_8.iter().any(|(dx, dy)| {
                        let (nx, ny) = (x as isize + dx, y as isize + dy);
                        nx >= 0
                            && ny >= 0
                            && (nx as usize) < w
                            && (ny as usize) < h
                            && prev[ny as usize * w + nx as usize]
                    });
                }
            }
        }
        for (p, g) in peeled.iter_mut().zip(&grown) {
            *p |= *g;
        }
        changed |= peeled != base;
    }

    if !changed {
        return skel.clone();
    }
    skeletonize(&BinaryMask::from_raw(w, h, peeled))
}
