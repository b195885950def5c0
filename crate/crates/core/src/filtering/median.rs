use super::FilterError;
use crate::raster::GrayImage;

/// Median of each `window x window` neighbourhood, edge-replicated.
pub fn median_filter(image: &GrayImage, window: usize) -> Result<GrayImage, FilterError> {
    if window.is_multiple_of(2) {
        return Err(FilterError::EvenWindow(window));
    }
    if window == 1 {
        return Ok(image.clone());
    }
    let r = (window / 2) as isize;
    let mid = window * window / 2;
    let mut buf = Vec::with_capacity(window * window);
    Ok(GrayImage::from_fn(image.width(), image.height(), |x, y| {
        buf.clear();
        for dy in -r..=r {
            for dx in -r..=r {
                buf.push(image.get_clamped(x as isize + dx, y as isize + dy));
            }
        }
        *buf.select_nth_unstable(mid).1
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_stays_constant() {
        let g = GrayImage::filled(6, 4, 7);
        assert_eq!(median_filter(&g, 3).unwrap(), g);
    }

    #[test]
    fn isolated_spike_removed() {
        let g = GrayImage::from_fn(5, 5, |x, y| if (x, y) == (2, 2) { 255 } else { 0 });
        let out = median_filter(&g, 3).unwrap();
        assert!(out.data().iter().all(|&v| v == 0));
    }

    #[test]
    fn window_one_is_identity() {
        let g = GrayImage::from_fn(4, 4, |x, y| (x * 31 + y * 17) as u8);
        assert_eq!(median_filter(&g, 1).unwrap(), g);
    }

    #[test]
    fn even_window_rejected() {
        let g = GrayImage::filled(2, 2, 0);
        assert_eq!(median_filter(&g, 4), Err(FilterError::EvenWindow(4)));
    }

    #[test]
    fn matches_sorted_neighbourhood() {
        let g = GrayImage::from_fn(9, 7, |x, y| ((x * 97 + y * 61) % 251) as u8);
        let out = median_filter(&g, 5).unwrap();
        for y in 0..7 {
            for x in 0..9 {
                let mut v: Vec<u8> = (-2..=2)
                    .flat_map(|dy| (-2..=2).map(move |dx| (dx, dy)))
                    .map(|(dx, dy)| g.get_clamped(x as isize + dx, y as isize + dy))
                    .collect();
                v.sort_unstable();
                assert_eq!(out.get(x, y), v[12]);
            }
        }
    }
}
