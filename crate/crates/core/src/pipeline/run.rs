use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use super::render::render_stage_png;
use super::{NodeSource, OtsuSource, PipelineConfig, PipelineError, Stage, StageError};
use crate::edges::canny;
use crate::filtering::{frangi_vesselness, median_filter, Polarity, VesselnessMap};
use crate::raster::{BinaryMask, GrayImage, RasterError};
use crate::segmentation::{
    binarize, morphology, otsu_threshold, quantize, remove_small_components, Connectivity,
    Histogram256, MorphOp, StructuringElement,
};
use crate::topology::{prune, skeletonize, Skeleton};
use crate::tracking::{build_graph, extract_nodes, skeleton_nodes, PixelGraph};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StageTiming {
    pub stage: Stage,
    pub ms: f64,
}

/// Output of every automatic stage.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineResult {
    pub median: GrayImage,
    pub vesselness: VesselnessMap,
    /// Otsu level on the thresholded source.
    pub threshold: u8,
    /// Thresholded mask before closing.
    pub segmented: BinaryMask,
    /// Closed mask with small components removed.
    pub mask: BinaryMask,
    /// Pruned skeleton of `mask`.
    pub skeleton: Skeleton,
    pub edges: BinaryMask,
    pub graph: PixelGraph,
    /// One entry per stage, in run order.
    pub timings: Vec<StageTiming>,
}

impl PipelineResult {
    pub fn stages(&self) -> Vec<Stage> {
        self.timings.iter().map(|t| t.stage).collect()
    }

    /// Compact JSON description of the run.
    pub fn summary(&self) -> serde_json::Value {
        serde_json::json!({
            "stages": self.stages(),
            "timings": self.timings,
            "threshold": self.threshold,
            "mask_pixels": self.mask.count(),
            "skeleton_pixels": self.skeleton.pixel_count(),
            "edge_pixels": self.edges.count(),
            "node_count": self.graph.node_count(),
            "edge_count": self.graph.edges().len(),
        })
    }

    /// Write `01_median.png` ... `07_graph.json` into `dir`.
    pub fn write_artifacts(&self, dir: &Path) -> Result<(), RasterError> {
        std::fs::create_dir_all(dir)?;
        for stage in Stage::ALL {
            let path = dir.join(stage.artifact_name());
            if stage == Stage::Graph {
                let text = serde_json::to_string(&self.graph).expect("graph serializes");
                std::fs::write(path, text)?;
            } else {
                std::fs::write(path, render_stage_png(self, stage))?;
            }
        }
        Ok(())
    }
}

struct Timer {
    timings: Vec<StageTiming>,
    started: Instant,
}

impl Timer {
    fn lap(&mut self, stage: Stage) {
        let now = Instant::now();
        self.timings.push(StageTiming {
            stage,
            ms: (now - self.started).as_secs_f64() * 1e3,
        });
        self.started = now;
    }
}

/// Run every automatic stage on `image`, writing artifacts to
/// `config.output_dir` when set.
pub fn run_pipeline(
    image: &GrayImage,
    config: &PipelineConfig,
) -> Result<PipelineResult, PipelineError> {
    config.validate()?;
    let mut timer = Timer {
        timings: Vec::with_capacity(Stage::ALL.len()),
        started: Instant::now(),
    };
    let fail = |stage: Stage| move |e: StageError| PipelineError::Stage { stage, source: e };

    let median =
        median_filter(image, config.median_window).map_err(|e| fail(Stage::Median)(e.into()))?;
    timer.lap(Stage::Median);

    let vesselness = frangi_vesselness(&median.to_float(), &config.frangi)
        .map_err(|e| fail(Stage::Frangi)(e.into()))?;
    timer.lap(Stage::Frangi);

    let source = match config.otsu_source {
        OtsuSource::Magnitude => quantize(&vesselness.magnitude),
        OtsuSource::Original => match config.frangi.polarity {
            Polarity::DarkOnBright => median.inverted(),
            Polarity::BrightOnDark => median.clone(),
        },
    };
    let threshold = otsu_threshold(&Histogram256::from_gray(&source))
        .map_err(|e| fail(Stage::Otsu)(e.into()))?;
    let segmented = binarize(&source, i32::from(threshold));
    timer.lap(Stage::Otsu);

    let se = StructuringElement::new(config.closing.shape, config.closing.radius)
        .map_err(|e| fail(Stage::Close)(e.into()))?;
    let closed = morphology(&segmented, &se, MorphOp::Close);
    let mask = remove_small_components(&closed, config.min_component_size, Connectivity::Eight);
    timer.lap(Stage::Close);

    let skeleton = prune(&skeletonize(&mask), &config.prune);
    timer.lap(Stage::Skeleton);

    let edges = canny(&median, &config.canny).map_err(|e| fail(Stage::Edges)(e.into()))?;
    timer.lap(Stage::Edges);

    let nodes = match config.nodes.source {
        NodeSource::Skeleton => skeleton_nodes(&skeleton.mask, &vesselness),
        NodeSource::LocalMaxima => {
            extract_nodes(&vesselness, config.nodes.window, config.nodes.floor)
                .map_err(|e| fail(Stage::Graph)(e.into()))?
        }
    };
    let graph = build_graph(nodes, &config.cost).map_err(|e| fail(Stage::Graph)(e.into()))?;
    timer.lap(Stage::Graph);

    let result = PipelineResult {
        median,
        vesselness,
        threshold,
        segmented,
        mask,
        skeleton,
        edges,
        graph,
        timings: timer.timings,
    };
    if let Some(dir) = &config.output_dir {
        result
            .write_artifacts(dir)
            .map_err(PipelineError::Artifact)?;
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phantom::tube_phantom;

    #[test]
    fn constant_image_fails_at_otsu() {
        let err =
            run_pipeline(&GrayImage::filled(32, 32, 120), &PipelineConfig::default()).unwrap_err();
        assert_eq!(err.stage(), Some(Stage::Otsu));
        assert_eq!(err.code(), "DegenerateHistogram");
    }

    #[test]
    fn stage_order() {
        let r = run_pipeline(&tube_phantom(), &PipelineConfig::default()).unwrap();
        assert_eq!(r.stages(), Stage::ALL.to_vec());
        assert!(r.graph.node_count() > 0);
    }

    #[test]
    fn even_median_window_reported() {
        let cfg = PipelineConfig {
            median_window: 4,
            ..PipelineConfig::default()
        };
        let err = run_pipeline(&tube_phantom(), &cfg).unwrap_err();
        assert_eq!(err.stage(), Some(Stage::Median));
    }
}
