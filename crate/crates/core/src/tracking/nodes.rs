use serde::{Deserialize, Serialize};

use super::TrackingError;
use crate::filtering::VesselnessMap;
use crate::raster::{BinaryMask, Pixel};

/// Graph node at a likely vessel pixel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VesselNode {
    pub id: usize,
    #[serde(flatten, with = "xy")]
    pub position: Pixel,
    #[serde(rename = "v")]
    pub vesselness: f64,
    #[serde(rename = "theta")]
    pub orientation: f64,
}

mod xy {
    use super::Pixel;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Xy {
        x: usize,
        y: usize,
    }

    pub fn serialize<S: Serializer>(p: &Pixel, s: S) -> Result<S::Ok, S::Error> {
        Xy { x: p.x, y: p.y }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Pixel, D::Error> {
        let Xy { x, y } = Xy::deserialize(d)?;
        Ok(Pixel::new(x, y))
    }
}

fn node_at(vmap: &VesselnessMap, id: usize, p: Pixel) -> VesselNode {
    VesselNode {
        id,
        position: p,
        vesselness: vmap.magnitude.get(p.x, p.y),
        orientation: vmap.orientation.get(p.x, p.y),
    }
}

/// Nodes at strict local maxima of the vesselness magnitude over a
/// `window x window` neighbourhood (pixels beyond the frame are ignored)
/// whose magnitude exceeds `floor`. Ids follow row-major order.
pub fn extract_nodes(
    vmap: &VesselnessMap,
    window: usize,
    floor: f64,
) -> Result<Vec<VesselNode>, TrackingError> {
    if window < 3 || window.is_multiple_of(2) {
        return Err(TrackingError::InvalidWindow(window));
    }
    if !(0.0..1.0).contains(&floor) {
        return Err(TrackingError::InvalidFloor(floor));
    }
    let m = &vmap.magnitude;
    let (w, h) = m.dimensions();
    let r = (window / 2) as isize;
    let mut nodes = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let v = m.get(x, y);
            if v <= floor {
                continue;
            }
            let is_max = (-r..=r).all(|dy| {
                (-r..=r).all(|dx| {
                    let (nx, ny) = (x as isize + dx, y as isize + dy);
                    (dx == 0 && dy == 0)
                        || nx < 0
                        || ny < 0
                        || nx >= w as isize
                        || ny >= h as isize
                        || m.get(nx as usize, ny as usize) < v
                })
            });
            if is_max {
                nodes.push(node_at(vmap, nodes.len(), Pixel::new(x, y)));
            }
        }
    }
    Ok(nodes)
}

/// One node per skeleton pixel, in row-major order.
pub fn skeleton_nodes(skeleton: &BinaryMask, vmap: &VesselnessMap) -> Vec<VesselNode> {
    skeleton
        .pixels()
        .enumerate()
        .map(|(id, p)| node_at(vmap, id, p))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::FloatImage;

    fn map(f: impl FnMut(usize, usize) -> f64) -> VesselnessMap {
        let magnitude = FloatImage::from_fn(32, 32, f);
        VesselnessMap {
            orientation: FloatImage::zeros(32, 32),
            best_scale: FloatImage::zeros(32, 32),
            magnitude,
        }
    }

    fn blob(x: usize, y: usize, cx: f64, cy: f64) -> f64 {
        (-((x as f64 - cx).powi(2) + (y as f64 - cy).powi(2)) / 8.0).exp()
    }

    #[test]
    fn zero_map_has_no_nodes() {
        assert!(extract_nodes(&map(|_, _| 0.0), 5, 0.0).unwrap().is_empty());
    }

    #[test]
    fn blobs() {
        let one = extract_nodes(&map(|x, y| blob(x, y, 12.0, 17.0)), 5, 0.05).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].position, Pixel::new(12, 17));
        let two = extract_nodes(
            &map(|x, y| blob(x, y, 10.0, 16.0).max(blob(x, y, 20.0, 16.0))),
            5,
            0.05,
        )
        .unwrap();
        assert_eq!(
            two.iter().map(|n| (n.id, n.position)).collect::<Vec<_>>(),
            vec![(0, Pixel::new(10, 16)), (1, Pixel::new(20, 16))]
        );
    }

    #[test]
    fn bad_window() {
        assert_eq!(
            extract_nodes(&map(|_, _| 0.0), 4, 0.0),
            Err(TrackingError::InvalidWindow(4))
        );
    }

    #[test]
    fn json_shape() {
        let n = VesselNode {
            id: 3,
            position: Pixel::new(4, 5),
            vesselness: 0.5,
            orientation: 0.25,
        };
        let v = serde_json::to_value(n).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"id": 3, "x": 4, "y": 5, "v": 0.5, "theta": 0.25})
        );
        assert_eq!(serde_json::from_value::<VesselNode>(v).unwrap(), n);
    }
}
