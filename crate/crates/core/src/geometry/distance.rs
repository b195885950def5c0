use crate::raster::{BinaryMask, FloatImage};

const INF: f64 = 1e20;

/// One-dimensional squared distance transform of a sampled function
/// (lower envelope of parabolas).
fn edt_1d(f: &[f64], out: &mut [f64], v: &mut [usize], z: &mut [f64]) {
    let n = f.len();
    let mut k = 0usize;
    v[0] = 0;
    z[0] = -INF;
    z[1] = INF;
    for q in 1..n {
        let fq = f[q] + (q * q) as f64;
        let parabola_meet =
            |p: usize| (fq - (f[p] + (p * p) as f64)) / (2.0 * (q as f64 - p as f64));
        let mut s = parabola_meet(v[k]);
        while s <= z[k] {
            // z[0] is -INF and every line has a finite sample, so k > 0 here
            k -= 1;
            s = parabola_meet(v[k]);
        }
        k += 1;
        v[k] = q;
        z[k] = s;
        z[k + 1] = INF;
    }
    k = 0;
    for (q, o) in out.iter_mut().enumerate() {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let d = q as f64 - v[k] as f64;
        *o = d * d + f[v[k]];
    }
}

/// Exact squared Euclidean distance from every pixel to the nearest
/// background pixel, treating everything outside the frame as background.
pub fn squared_distance_transform(mask: &BinaryMask) -> FloatImage {
    let (w, h) = mask.dimensions();
    // one pixel of background around the raster makes the frame count
    let (pw, ph) = (w + 2, h + 2);
    let mut grid = vec![0.0; pw * ph];
    for y in 0..h {
        for x in 0..w {
            if mask.get(x, y) {
                grid[(y + 1) * pw + x + 1] = INF;
            }
        }
    }
    let n = pw.max(ph);
    let (mut f, mut out) = (vec![0.0; n], vec![0.0; n]);
    let (mut v, mut z) = (vec![0usize; n], vec![0.0; n + 1]);
    for x in 0..pw {
        for y in 0..ph {
            f[y] = grid[y * pw + x];
        }
        edt_1d(&f[..ph], &mut out[..ph], &mut v, &mut z);
        for y in 0..ph {
            grid[y * pw + x] = out[y];
        }
    }
    for y in 0..ph {
        let row = &mut grid[y * pw..(y + 1) * pw];
        f[..pw].copy_from_slice(row);
        edt_1d(&f[..pw], &mut out[..pw], &mut v, &mut z);
        row.copy_from_slice(&out[..pw]);
    }
    FloatImage::from_fn(w, h, |x, y| grid[(y + 1) * pw + x + 1])
}

/// Exact Euclidean distance from every foreground pixel to the nearest
/// background pixel centre (0 on the background). The frame counts as
/// background.
pub fn distance_transform(mask: &BinaryMask) -> FloatImage {
    squared_distance_transform(mask).map(f64::sqrt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::Pixel;

    #[test]
    fn basic_values() {
        assert!(distance_transform(&BinaryMask::empty(5, 4))
            .data()
            .iter()
            .all(|&v| v == 0.0));
        let one = BinaryMask::from_pixels(5, 5, &[Pixel::new(2, 2)]);
        assert_eq!(distance_transform(&one).get(2, 2), 1.0);
        let block =
            BinaryMask::from_fn(15, 15, |x, y| (5..10).contains(&x) && (5..10).contains(&y));
        let dt = distance_transform(&block);
        assert_eq!(dt.get(7, 7), 3.0);
        assert_eq!(dt.get(5, 5), 1.0);
        assert_eq!(dt.get(0, 0), 0.0);
    }

    #[test]
    fn frame_is_background() {
        let full = BinaryMask::from_fn(7, 7, |_, _| true);
        let dt = distance_transform(&full);
        assert_eq!(dt.get(0, 3), 1.0);
        assert_eq!(dt.get(3, 3), 4.0);
    }

    #[test]
    fn one_pixel_wide_images() {
        let m = BinaryMask::from_fn(1, 6, |_, y| y != 2);
        let dt = distance_transform(&m);
        assert_eq!(dt.data(), &[1.0, 1.0, 0.0, 1.0, 1.0, 1.0]);
    }
}
