use super::Skeleton;
use crate::geometry::squared_distance_transform;
use crate::raster::{BinaryMask, NEIGHBORS_8};

/// The eight neighbours of `(x, y)` clockwise from north.
#[inline]
fn ring(mask: &[bool], w: usize, h: usize, x: usize, y: usize) -> [bool; 8] {
    let mut out = [false; 8];
    for (o, (dx, dy)) in out.iter_mut().zip(NEIGHBORS_8) {
        let (nx, ny) = (x as isize + dx, y as isize + dy);
        *o = nx >= 0
            && ny >= 0
            && (nx as usize) < w
            && (ny as usize) < h
            && mask[ny as usize * w + nx as usize];
    }
    out
}

/// 8-connectivity number of a neighbourhood ring (Yokoi). A foreground pixel
/// is simple, i.e. removable without changing the topology of either the
/// foreground (8-connected) or the background (4-connected), exactly when
/// this number is 1.
fn connectivity_number(n: &[bool; 8]) -> u32 {
    let bg = |k: usize| u32::from(!n[k % 8]);
    [0, 2, 4, 6]
        .iter()
        .map(|&k| bg(k) - bg(k) * bg(k + 1) * bg(k + 2))
        .sum()
}

/// Whether removing foreground pixel `(x, y)` keeps the topology of `mask`.
pub fn is_simple(mask: &BinaryMask, x: usize, y: usize) -> bool {
    let n = ring(mask.data(), mask.width(), mask.height(), x, y);
    connectivity_number(&n) == 1
}

/// Directional condition of the two thinning sub-iterations. With `n` in
/// clockwise order from north, the first pass peels south-east boundary
/// pixels and the second north-west ones.
fn direction_ok(n: &[bool; 8], pass: usize) -> bool {
    let (north, east, south, west) = (n[0], n[2], n[4], n[6]);
    if pass == 0 {
        !(north && east && south) && !(east && south && west)
    } else {
        !(north && east && west) && !(north && south && west)
    }
}

/// Thin `mask` to one-pixel-wide curves.
///
/// Two alternating sub-iterations select boundary candidates with between
/// two and six neighbours on a snapshot of the current mask. Candidates are
/// then removed one at a time in row-major order, each re-checked for being
/// simple against the already updated mask, so the topology never changes.
///
/// Round `k` only considers pixels lying within distance `k` of the
/// background. Peeling thus advances one distance level per round, which
/// stops thick ends from being eaten away faster than the sides: the curve
/// of a capsule ends at its cap centres, on the centres of maximal disks.
/// The loop stops once every level is unlocked and a full round removes
/// nothing, so applying it to its own output changes nothing.
pub fn skeletonize(mask: &BinaryMask) -> Skeleton {
    let (w, h) = mask.dimensions();
    let mut data = mask.data().to_vec();
    let depth = squared_distance_transform(mask);
    let deepest = depth.data().iter().cloned().fold(0.0, f64::max);
    let mut candidates = Vec::new();
    let mut level = 0.0f64;
    loop {
        level += 1.0;
        let mut changed = false;
        for pass in 0..2 {
            candidates.clear();
            for y in 0..h {
                for x in 0..w {
                    if !data[y * w + x] || depth.get(x, y) > level * level {
                        continue;
                    }
                    let n = ring(&data, w, h, x, y);
                    let b = n.iter().filter(|&&v| v).count();
                    if (2..=6).contains(&b)
                        && connectivity_number(&n) == 1
                        && direction_ok(&n, pass)
                    {
                        candidates.push((x, y));
                    }
                }
            }
            for &(x, y) in &candidates {
                if connectivity_number(&ring(&data, w, h, x, y)) == 1 {
                    data[y * w + x] = false;
                    changed = true;
                }
            }
        }
        if !changed && level * level >= deepest {
            break;
        }
    }
    Skeleton::from_mask(BinaryMask::from_raw(w, h, data))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::Pixel;
    use crate::segmentation::{count_components, Connectivity};
    use crate::topology::has_square_block;

    #[test]
    fn straight_line_unchanged() {
        let m = BinaryMask::from_fn(13, 5, |x, y| y == 2 && (2..11).contains(&x));
        let s = skeletonize(&m);
        assert_eq!(s.mask, m);
        assert_eq!(s.endpoints, vec![Pixel::new(2, 2), Pixel::new(10, 2)]);
        assert!(s.branchpoints.is_empty());
    }

    #[test]
    fn rectangle_thins_to_middle_row() {
        let m = BinaryMask::from_fn(15, 7, |x, y| (2..=4).contains(&y) && (2..13).contains(&x));
        let s = skeletonize(&m);
        assert!(s.mask.count() > 0);
        for p in s.mask.pixels() {
            assert_eq!(p.y, 3, "{p:?}");
            assert!((2..13).contains(&p.x));
        }
        assert!(s.mask.count() >= 11 - 4);
        assert_eq!(count_components(&s.mask, Connectivity::Eight), 1);
    }

    #[test]
    fn capsule_reaches_cap_centres() {
        let m = BinaryMask::from_fn(40, 15, |x, y| {
            let cx = (x as f64).clamp(8.0, 31.0);
            (x as f64 - cx).powi(2) + (y as f64 - 7.0).powi(2) < 3.5 * 3.5
        });
        let s = skeletonize(&m);
        let xs: Vec<usize> = s.mask.pixels().map(|p| p.x).collect();
        let (lo, hi) = (*xs.iter().min().unwrap(), *xs.iter().max().unwrap());
        assert!(lo.abs_diff(8) <= 1 && hi.abs_diff(31) <= 1, "{lo}..{hi}");
        assert!(s.mask.pixels().all(|p| p.y == 7));
    }

    #[test]
    fn empty_mask() {
        let s = skeletonize(&BinaryMask::empty(6, 6));
        assert_eq!(s.mask.count(), 0);
        assert!(s.endpoints.is_empty() && s.branchpoints.is_empty());
    }

    #[test]
    fn isolated_pixel_and_block_survive() {
        let m = BinaryMask::from_pixels(5, 5, &[Pixel::new(2, 2)]);
        assert_eq!(skeletonize(&m).mask, m);
        let block = BinaryMask::from_fn(6, 6, |x, y| (2..4).contains(&x) && (2..4).contains(&y));
        let s = skeletonize(&block);
        assert!(s.mask.count() >= 1 && !has_square_block(&s.mask));
    }

    #[test]
    fn ring_keeps_its_hole() {
        let m = BinaryMask::from_fn(20, 20, |x, y| {
            let d = ((x as f64 - 9.5).powi(2) + (y as f64 - 9.5).powi(2)).sqrt();
            (3.0..7.5).contains(&d)
        });
        let s = skeletonize(&m);
        assert_eq!(count_components(&s.mask, Connectivity::Eight), 1);
        assert_eq!(
            count_components(&s.mask.complement(), Connectivity::Four),
            2
        );
        assert!(s.endpoints.is_empty());
    }

    #[test]
    fn simple_point_classification() {
        let line = BinaryMask::from_fn(5, 3, |_, y| y == 1);
        assert!(!is_simple(&line, 2, 1));
        assert!(is_simple(&line, 0, 1));
        let diag = BinaryMask::from_fn(3, 3, |x, y| x + y == 2);
        assert!(!is_simple(&diag, 1, 1));
    }
}
