//! The end-to-end vessel analysis run and the interactive tracing session.
//!
//! [`run_pipeline`] performs the automatic stages in a fixed order: median
//! filtering, Frangi vesselness, Otsu thresholding, closing with small
//! component removal, skeletonization with pruning, Canny edges and the
//! node graph. Centerline tracing between two user clicks is a separate
//! step, [`trace_segment`], because it needs the user's input.

mod config;
mod render;
mod run;
mod session;

pub use config::{ClosingConfig, NodeConfig, NodeSource, OtsuSource, PipelineConfig};
pub use render::render_stage_png;
pub use run::{run_pipeline, PipelineResult, StageTiming};
pub use session::{trace_segment, ImageMetadata, SegmentRecord, SessionState};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::edges::EdgeError;
use crate::filtering::FilterError;
use crate::geometry::GeometryError;
use crate::raster::RasterError;
use crate::segmentation::SegmentationError;
use crate::tracking::TrackingError;

/// Pipeline stages in execution order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Median,
    Frangi,
    Otsu,
    Close,
    Skeleton,
    Edges,
    Graph,
}

impl Stage {
    pub const ALL: [Stage; 7] = [
        Stage::Median,
        Stage::Frangi,
        Stage::Otsu,
        Stage::Close,
        Stage::Skeleton,
        Stage::Edges,
        Stage::Graph,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Median => "median",
            Stage::Frangi => "frangi",
            Stage::Otsu => "otsu",
            Stage::Close => "close",
            Stage::Skeleton => "skeleton",
            Stage::Edges => "edges",
            Stage::Graph => "graph",
        }
    }

    pub fn from_name(name: &str) -> Option<Stage> {
        Stage::ALL.into_iter().find(|s| s.name() == name)
    }

    /// 1-based position in the run.
    pub fn number(self) -> usize {
        Stage::ALL.iter().position(|&s| s == self).unwrap() + 1
    }

    /// Name of the artifact written for this stage, e.g. `03_otsu.png`.
    pub fn artifact_name(self) -> String {
        let ext = if self == Stage::Graph { "json" } else { "png" };
        format!("{:02}_{}.{ext}", self.number(), self.name())
    }
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error)]
pub enum StageError {
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error(transparent)]
    Segmentation(#[from] SegmentationError),
    #[error(transparent)]
    Edge(#[from] EdgeError),
    #[error(transparent)]
    Tracking(#[from] TrackingError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Raster(#[from] RasterError),
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("stage {stage} failed: {source}")]
    Stage {
        stage: Stage,
        #[source]
        source: StageError,
    },
    #[error("writing artifacts failed: {0}")]
    Artifact(#[source] RasterError),
    #[error("the pipeline has not been run for this session")]
    NotRun,
    #[error(transparent)]
    Trace(#[from] TrackingError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

impl PipelineError {
    pub fn stage(&self) -> Option<Stage> {
        match self {
            PipelineError::Stage { stage, .. } => Some(*stage),
            _ => None,
        }
    }

    /// Short machine-readable error code.
    pub fn code(&self) -> &'static str {
        match self {
            PipelineError::Config(_) => "InvalidConfig",
            PipelineError::Artifact(_) => "IoFailure",
            PipelineError::NotRun => "NotRun",
            PipelineError::Trace(e) => tracking_code(e),
            PipelineError::Geometry(_) => "GeometryError",
            PipelineError::Stage { source, .. } => match source {
                StageError::Filter(FilterError::EvenWindow(_)) => "EvenWindow",
                StageError::Filter(FilterError::EvenSize(_)) => "EvenSize",
                StageError::Filter(FilterError::NonPositiveSigma(_)) => "NonPositiveSigma",
                StageError::Filter(FilterError::InvalidParams(_)) => "InvalidParams",
                StageError::Segmentation(SegmentationError::DegenerateHistogram) => {
                    "DegenerateHistogram"
                }
                StageError::Segmentation(SegmentationError::InvalidStructuringElement) => {
                    "InvalidStructuringElement"
                }
                StageError::Edge(EdgeError::InvalidThresholdOrder { .. }) => {
                    "InvalidThresholdOrder"
                }
                StageError::Edge(EdgeError::ThresholdOutOfRange { .. }) => "ThresholdOutOfRange",
                StageError::Edge(EdgeError::Filter(_)) => "NonPositiveSigma",
                StageError::Tracking(e) => tracking_code(e),
                StageError::Geometry(_) => "GeometryError",
                StageError::Raster(_) => "RasterError",
            },
        }
    }
}

fn tracking_code(e: &TrackingError) -> &'static str {
    match e {
        TrackingError::NoPath { .. } => "NoPath",
        TrackingError::UnknownNode(_) => "UnknownNode",
        TrackingError::EmptyGraph => "EmptyGraph",
        TrackingError::InvalidWindow(_) => "InvalidWindow",
        TrackingError::InvalidFloor(_) => "InvalidFloor",
        TrackingError::InvalidWeights(_) => "InvalidWeights",
        TrackingError::InvalidEdge(_) => "InvalidEdge",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stage_names_and_artifacts() {
        let names: Vec<String> = Stage::ALL.iter().map(|s| s.artifact_name()).collect();
        assert_eq!(
            names,
            [
                "01_median.png",
                "02_frangi.png",
                "03_otsu.png",
                "04_close.png",
                "05_skeleton.png",
                "06_edges.png",
                "07_graph.json"
            ]
        );
        assert_eq!(Stage::from_name("otsu"), Some(Stage::Otsu));
        assert_eq!(Stage::from_name("nope"), None);
    }
}
