//! Synthetic test images with known geometry.
//!
//! Vessels are modelled as cylinders seen in projection: the darkening at a
//! pixel is proportional to the chord length of the ray through the lumen,
//! `2 * sqrt(r^2 - d^2)` at distance `d` from the axis. Segments end in
//! hemispherical caps, so the footprint of a straight vessel is a capsule.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::raster::{BinaryMask, GrayImage};

/// Distance from `(px, py)` to the segment `a`-`b`.
pub fn segment_distance(px: f64, py: f64, a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((px - a.0) * dx + (py - a.1) * dy) / len2).clamp(0.0, 1.0)
    };
    let (cx, cy) = (a.0 + t * dx, a.1 + t * dy);
    (px - cx).hypot(py - cy)
}

/// One straight vessel piece.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TubeSegment {
    pub a: (f64, f64),
    pub b: (f64, f64),
    pub radius: f64,
}

impl TubeSegment {
    pub fn new(a: (f64, f64), b: (f64, f64), radius: f64) -> Self {
        Self { a, b, radius }
    }

    fn chord(&self, x: f64, y: f64) -> f64 {
        let d = segment_distance(x, y, self.a, self.b);
        if d >= self.radius {
            0.0
        } else {
            2.0 * (self.radius * self.radius - d * d).sqrt()
        }
    }

    fn bbox(&self, width: usize, height: usize) -> (usize, usize, usize, usize) {
        let r = self.radius.ceil() + 1.0;
        let clamp = |v: f64, hi: usize| v.max(0.0).min(hi as f64 - 1.0) as usize;
        (
            clamp(self.a.0.min(self.b.0) - r, width),
            clamp(self.a.0.max(self.b.0) + r, width),
            clamp(self.a.1.min(self.b.1) - r, height),
            clamp(self.a.1.max(self.b.1) + r, height),
        )
    }
}

/// Render dark vessels on a constant background. At each pixel the largest
/// chord over all segments is used, so overlapping pieces of one vessel do
/// not double the contrast. A chord of `2 * r_ref` darkens by `drop`.
pub fn render_tubes(
    width: usize,
    height: usize,
    segments: &[TubeSegment],
    background: f64,
    drop_per_px: f64,
) -> GrayImage {
    let chord = chord_map(width, height, segments);
    GrayImage::from_fn(width, height, |x, y| {
        (background - drop_per_px * chord[y * width + x])
            .round()
            .clamp(0.0, 255.0) as u8
    })
}

fn chord_map(width: usize, height: usize, segments: &[TubeSegment]) -> Vec<f64> {
    let mut chord = vec![0.0f64; width * height];
    for s in segments {
        let (x0, x1, y0, y1) = s.bbox(width, height);
        for y in y0..=y1 {
            for x in x0..=x1 {
                let c = s.chord(x as f64, y as f64);
                let slot = &mut chord[y * width + x];
                *slot = slot.max(c);
            }
        }
    }
    chord
}

/// The reference phantom: a 128x128 image with one horizontal dark vessel
/// of radius 3.5 (width 7) whose axis runs from `(10, 64)` to `(118, 64)`,
/// darkening by 140 gray levels at its centre on a background of 200.
pub fn tube_phantom() -> GrayImage {
    straight_tube(128, 128, (10.0, 64.0), (118.0, 64.0), 3.5)
}

/// A single straight dark vessel, 140 gray levels deep at its axis on a
/// background of 200.
pub fn straight_tube(
    width: usize,
    height: usize,
    a: (f64, f64),
    b: (f64, f64),
    radius: f64,
) -> GrayImage {
    render_tubes(
        width,
        height,
        &[TubeSegment::new(a, b, radius)],
        200.0,
        140.0 / (2.0 * radius),
    )
}

/// Pixels whose centre lies within `radius` of the segment `a`-`b`.
pub fn capsule_mask(
    width: usize,
    height: usize,
    a: (f64, f64),
    b: (f64, f64),
    radius: f64,
) -> BinaryMask {
    BinaryMask::from_fn(width, height, |x, y| {
        segment_distance(x as f64, y as f64, a, b) < radius
    })
}

/// Pixels within `half_width` of the infinite line through `a` with
/// direction `angle` (radians), i.e. a tube that crosses the whole frame.
pub fn band_mask(
    width: usize,
    height: usize,
    a: (f64, f64),
    angle: f64,
    half_width: f64,
) -> BinaryMask {
    let (nx, ny) = (-angle.sin(), angle.cos());
    BinaryMask::from_fn(width, height, |x, y| {
        ((x as f64 - a.0) * nx + (y as f64 - a.1) * ny).abs() <= half_width
    })
}

/// Smooth random blob mask: a union of one to four capsules and discs kept
/// at least `margin` pixels away from the frame.
pub fn random_blob_mask(width: usize, height: usize, margin: usize, seed: u64) -> BinaryMask {
    let mut rng = StdRng::seed_from_u64(seed);
    let pieces = rng.gen_range(1..=4);
    let m = margin as f64;
    let mut shapes = Vec::with_capacity(pieces);
    for _ in 0..pieces {
        let r: f64 = rng.gen_range(1.5..5.0);
        let lo = m + r;
        let (hx, hy) = (width as f64 - 1.0 - lo, height as f64 - 1.0 - lo);
        if hx <= lo || hy <= lo {
            continue;
        }
        let a = (rng.gen_range(lo..hx), rng.gen_range(lo..hy));
        let b = if rng.gen_bool(0.3) {
            a
        } else {
            (rng.gen_range(lo..hx), rng.gen_range(lo..hy))
        };
        shapes.push((a, b, r));
    }
    BinaryMask::from_fn(width, height, |x, y| {
        shapes
            .iter()
            .any(|&(a, b, r)| segment_distance(x as f64, y as f64, a, b) < r)
    })
}

/// Vessel tree used as a stand-in for a coronary angiogram frame: a
/// meandering main vessel with tapering side branches on a slowly varying
/// background, plus uniform noise of +/- `noise` gray levels.
pub fn synthetic_angiogram(size: usize, seed: u64, noise: f64) -> GrayImage {
    let mut rng = StdRng::seed_from_u64(seed);
    let s = size as f64;
    let mut segments = Vec::new();
    let mut stack = vec![(
        (0.5 * s, 0.04 * s),
        std::f64::consts::FRAC_PI_2 * 0.9,
        0.012 * s,
        0u32,
    )];
    while let Some((mut p, mut angle, mut radius, depth)) = stack.pop() {
        let steps = rng.gen_range(20..40) / (depth as usize + 1) + 6;
        for _ in 0..steps {
            let step = rng.gen_range(0.015..0.03) * s;
            angle += rng.gen_range(-0.25..0.25);
            let q = (p.0 + step * angle.cos(), p.1 + step * angle.sin());
            if q.0 < 0.03 * s || q.0 > 0.97 * s || q.1 < 0.03 * s || q.1 > 0.97 * s {
                break;
            }
            segments.push(TubeSegment::new(p, q, radius));
            if depth < 3 && rng.gen_bool(0.12) {
                let side = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                stack.push((
                    q,
                    angle + side * rng.gen_range(0.5..1.1),
                    radius * 0.7,
                    depth + 1,
                ));
            }
            radius = (radius * 0.98).max(1.2);
            p = q;
        }
    }
    let chord = chord_map(size, size, &segments);
    let noise_field: Vec<f64> = (0..size * size)
        .map(|_| rng.gen_range(-noise..=noise))
        .collect();
    GrayImage::from_fn(size, size, |x, y| {
        let shade = 185.0 + 25.0 * ((x as f64 / s) - 0.5) - 15.0 * ((y as f64 / s) - 0.5);
        let i = y * size + x;
        let v = shade - 9.0 * chord[i] + noise_field[i];
        v.round().clamp(0.0, 255.0) as u8
    })
}
