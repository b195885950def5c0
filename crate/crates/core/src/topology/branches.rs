use std::collections::HashSet;

use super::Skeleton;
use crate::raster::{Pixel, NEIGHBORS_8};

fn neighbors(skel: &Skeleton, p: Pixel) -> impl Iterator<Item = Pixel> + '_ {
    NEIGHBORS_8.iter().filter_map(move |&(dx, dy)| {
        let (x, y) = (p.x as isize + dx, p.y as isize + dy);
        skel.mask
            .get_or_false(x, y)
            .then(|| Pixel::new(x as usize, y as usize))
    })
}

fn edge_key(a: Pixel, b: Pixel) -> (Pixel, Pixel) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Split a skeleton into ordered pixel runs.
///
/// Terminals are endpoints and branchpoints. A run starts at a terminal,
/// follows degree-2 pixels and stops at the next terminal, so branchpoints
/// are shared by the runs that meet there. Isolated pixels form one-pixel
/// runs, and closed loops without terminals become a single run starting at
/// their first pixel in row-major order.
pub fn trace_branches(skel: &Skeleton) -> Vec<Vec<Pixel>> {
    let mut runs = Vec::new();
    let mut used: HashSet<(Pixel, Pixel)> = HashSet::new();
    let mut covered: HashSet<Pixel> = HashSet::new();

    let walk = |start: Pixel, first: Pixel, used: &mut HashSet<(Pixel, Pixel)>| {
        let mut run = vec![start, first];
        used.insert(edge_key(start, first));
        let (mut prev, mut cur) = (start, first);
        while !skel.is_terminal(cur) && cur != start {
            let next =
                neighbors(skel, cur).find(|&n| n != prev && !used.contains(&edge_key(cur, n)));
            match next {
                Some(n) => {
                    used.insert(edge_key(cur, n));
                    run.push(n);
                    prev = cur;
                    cur = n;
                }
                None => break,
            }
        }
        run
    };

    for p in skel.mask.pixels() {
        let degree = skel.mask.neighbor_count(p.x, p.y);
        if degree == 0 {
            runs.push(vec![p]);
            covered.insert(p);
            continue;
        }
        if !skel.is_terminal(p) {
            continue;
        }
        let firsts: Vec<Pixel> = neighbors(skel, p).collect();
        for n in firsts {
            if used.contains(&edge_key(p, n)) {
                continue;
            }
            let run = walk(p, n, &mut used);
            covered.extend(run.iter().copied());
            runs.push(run);
        }
    }

    // loops made only of degree-2 pixels
    for p in skel.mask.pixels() {
        if covered.contains(&p) {
            continue;
        }
        let Some(n) = neighbors(skel, p).next() else {
            continue;
        };
        let mut run = walk(p, n, &mut used);
        if run.len() > 1 && run.last() == Some(&p) {
            run.pop();
        }
        covered.extend(run.iter().copied());
        runs.push(run);
    }
    runs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::BinaryMask;
    use crate::topology::skeletonize;

    fn skel(w: usize, h: usize, px: &[(usize, usize)]) -> Skeleton {
        let px: Vec<Pixel> = px.iter().map(|&(x, y)| Pixel::new(x, y)).collect();
        Skeleton::from_mask(BinaryMask::from_pixels(w, h, &px))
    }

    fn is_chain(run: &[Pixel]) -> bool {
        run.windows(2).all(|w| w[0].chebyshev(w[1]) == 1)
    }

    #[test]
    fn straight_line_is_one_run() {
        let px: Vec<(usize, usize)> = (1..9).map(|x| (x, 2)).collect();
        let runs = trace_branches(&skel(10, 5, &px));
        assert_eq!(runs.len(), 1);
        assert_eq!(runs[0].len(), 8);
        assert!(is_chain(&runs[0]));
    }

    #[test]
    fn y_shape_has_three_runs_sharing_branchpoint() {
        let c = (10, 10);
        let mut px = vec![c];
        for k in 1..=6 {
            px.push((10, 10 - k));
            px.push((10 - k, 10 + k));
            px.push((10 + k, 10 + k));
        }
        let s = skel(21, 21, &px);
        assert_eq!(s.branchpoints, vec![Pixel::new(10, 10)]);
        let runs = trace_branches(&s);
        assert_eq!(runs.len(), 3);
        for r in &runs {
            assert_eq!(r.len(), 7);
            assert!(
                r.first() == Some(&Pixel::new(10, 10)) || r.last() == Some(&Pixel::new(10, 10))
            );
            assert!(is_chain(r));
        }
    }

    #[test]
    fn empty_and_loop() {
        assert!(trace_branches(&skel(4, 4, &[])).is_empty());
        let ring = BinaryMask::from_fn(16, 16, |x, y| {
            let d = ((x as f64 - 7.5).powi(2) + (y as f64 - 7.5).powi(2)).sqrt();
            (3.0..6.0).contains(&d)
        });
        let s = skeletonize(&ring);
        let runs = trace_branches(&s);
        let total: usize = runs.iter().map(Vec::len).sum();
        assert_eq!(runs.len(), 1);
        assert_eq!(total, s.mask.count());
        assert!(is_chain(&runs[0]));
    }
}
