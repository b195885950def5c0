use super::{PipelineResult, Stage};
use crate::raster::{render_overlay, to_png_bytes, OverlayLayer};

const SKELETON_GREEN: [u8; 3] = [0, 255, 0];
const EDGE_CYAN: [u8; 3] = [0, 255, 255];
const NODE_YELLOW: [u8; 3] = [255, 220, 0];

/// PNG rendering of one stage: gray rasters for the image-valued stages and
/// colour overlays on the median image for skeleton, edges and graph.
pub fn render_stage_png(result: &PipelineResult, stage: Stage) -> Vec<u8> {
    let base = &result.median;
    let overlay = |layer: OverlayLayer| {
        render_overlay(base, &[layer])
            .expect("stage rasters share the image dimensions")
            .to_png_bytes()
    };
    match stage {
        Stage::Median => to_png_bytes(base),
        Stage::Frangi => to_png_bytes(&result.vesselness.magnitude.to_gray_rescaled()),
        Stage::Otsu => to_png_bytes(&result.segmented.to_gray()),
        Stage::Close => to_png_bytes(&result.mask.to_gray()),
        Stage::Skeleton => overlay(OverlayLayer::mask(
            result.skeleton.mask.clone(),
            SKELETON_GREEN,
            1.0,
        )),
        Stage::Edges => overlay(OverlayLayer::mask(result.edges.clone(), EDGE_CYAN, 1.0)),
        Stage::Graph => {
            let points = result.graph.nodes().iter().map(|n| n.position).collect();
            overlay(OverlayLayer::points(points, NODE_YELLOW, 1.0))
        }
    }
}
