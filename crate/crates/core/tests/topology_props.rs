use vesseltrack::geometry::distance_transform;
use vesseltrack::phantom::{capsule_mask, random_blob_mask, segment_distance};
use vesseltrack::segmentation::{count_components, Connectivity};
use vesseltrack::topology::{has_square_block, prune, skeletonize, PruneParams};

#[test]
fn skeleton_properties_on_random_blobs() {
    for seed in 0..200 {
        let mask = random_blob_mask(32, 32, 2, seed);
        let s = skeletonize(&mask);
        assert!(s.mask.is_subset_of(&mask), "seed {seed}: not a subset");
        assert!(!has_square_block(&s.mask), "seed {seed}: 2x2 block");
        assert_eq!(
            count_components(&s.mask, Connectivity::Eight),
            count_components(&mask, Connectivity::Eight),
            "seed {seed}: component count"
        );
        assert_eq!(
            count_components(&s.mask.complement(), Connectivity::Four),
            count_components(&mask.complement(), Connectivity::Four),
            "seed {seed}: hole count"
        );
        assert_eq!(
            skeletonize(&s.mask).mask,
            s.mask,
            "seed {seed}: not idempotent"
        );
    }
}

#[test]
fn prune_never_grows_or_splits() {
    for seed in 0..200 {
        let s = skeletonize(&random_blob_mask(40, 40, 2, seed));
        for params in [
            PruneParams {
                m: 0,
                min_branch: 8,
            },
            PruneParams {
                m: 2,
                min_branch: 4,
            },
            PruneParams {
                m: 3,
                min_branch: 0,
            },
        ] {
            let p = prune(&s, &params);
            assert!(p.mask.count() <= s.mask.count(), "seed {seed}");
            assert!(p.mask.is_subset_of(&s.mask), "seed {seed}");
            assert!(
                count_components(&p.mask, Connectivity::Eight)
                    <= count_components(&s.mask, Connectivity::Eight),
                "seed {seed}: split"
            );
        }
    }
}

/// Medial pixels in the sense of maximal inscribed disks: local maxima of
/// the distance to the background.
fn medial_pixels(mask: &vesseltrack::raster::BinaryMask) -> Vec<(usize, usize)> {
    let dt = distance_transform(mask);
    let (w, h) = mask.dimensions();
    let mut out = Vec::new();
    for y in 1..h - 1 {
        for x in 1..w - 1 {
            let v = dt.get(x, y);
            if v > 0.0 && (0..9).all(|k| v >= dt.get(x + k % 3 - 1, y + k / 3 - 1)) {
                out.push((x, y));
            }
        }
    }
    out
}

#[test]
fn tube_skeleton_follows_centre_line() {
    for (a, b) in [
        ((10.0, 32.0), (54.0, 32.0)),
        ((32.0, 8.0), (32.0, 56.0)),
        ((12.0, 12.0), (52.0, 52.0)),
        ((10.0, 40.0), (54.0, 22.0)),
    ] {
        for r in [1.5, 2.5, 3.5] {
            let mask = capsule_mask(64, 64, a, b, r);
            let s = skeletonize(&mask);
            assert!(s.mask.count() > 0);
            let medial = medial_pixels(&mask);
            for p in s.mask.pixels() {
                let d = segment_distance(p.x as f64, p.y as f64, a, b);
                assert!(d <= 1.0, "{a:?}-{b:?} r {r}: {p:?} at {d}");
                let near_medial = medial
                    .iter()
                    .any(|&(mx, my)| mx.abs_diff(p.x) <= 1 && my.abs_diff(p.y) <= 1);
                assert!(near_medial, "{p:?} far from the medial set");
            }
        }
    }
}
