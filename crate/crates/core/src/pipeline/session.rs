use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{run_pipeline, PipelineConfig, PipelineError, PipelineResult};
use crate::geometry::{
    estimate_radius, fit_natural_spline, path_length, CubicSpline, RadiusProfile,
};
use crate::raster::{GrayImage, Pixel};
use crate::tracking::{shortest_path, snap_to_node, CenterlinePath};

/// Optional acquisition data stored next to an image as
/// `<image>.meta.json`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ImageMetadata {
    pub pixel_spacing_mm: Option<f64>,
    pub frame_rate: Option<f64>,
    pub angles: Option<Vec<f64>>,
}

impl ImageMetadata {
    pub fn sidecar_path(image: &Path) -> PathBuf {
        let mut name = image.as_os_str().to_owned();
        name.push(".meta.json");
        PathBuf::from(name)
    }

    /// Read the sidecar of `image` if there is one.
    pub fn load_for(image: &Path) -> Result<Option<Self>, String> {
        let path = Self::sidecar_path(image);
        match std::fs::read_to_string(&path) {
            Ok(text) => serde_json::from_str(&text)
                .map(Some)
                .map_err(|e| format!("{}: {e}", path.display())),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(format!("{}: {e}", path.display())),
        }
    }
}

/// A measured vessel segment between two clicks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SegmentRecord {
    pub start_click: Pixel,
    pub end_click: Pixel,
    pub start_node: usize,
    pub end_node: usize,
    pub path: CenterlinePath,
    /// Spline through the path's node positions; absent for one-node paths.
    pub spline: Option<CubicSpline>,
    /// Length of the pixel trace.
    pub length_px: f64,
    /// Length of the spline sampled every 0.1 px.
    pub spline_length_px: Option<f64>,
    pub length_mm: Option<f64>,
    pub radius: RadiusProfile,
    pub mean_radius_px: f64,
    pub mean_radius_mm: Option<f64>,
}

/// State behind one interactive session.
#[derive(Debug, Clone)]
pub struct SessionState {
    pub id: String,
    pub image: GrayImage,
    pub config: PipelineConfig,
    pub metadata: Option<ImageMetadata>,
    pub result: Option<PipelineResult>,
    /// Traced segments, append-only.
    pub segments: Vec<SegmentRecord>,
}

impl SessionState {
    pub fn new(id: impl Into<String>, image: GrayImage, config: PipelineConfig) -> Self {
        Self {
            id: id.into(),
            image,
            config,
            metadata: None,
            result: None,
            segments: Vec::new(),
        }
    }

    pub fn run(&mut self) -> Result<&PipelineResult, PipelineError> {
        let result = run_pipeline(&self.image, &self.config)?;
        self.segments.clear();
        Ok(self.result.insert(result))
    }
}

/// Snap both clicks to graph nodes, trace the minimal-cost path, fit a
/// spline through its nodes and measure length and radius. The record is
/// appended to the session and returned.
pub fn trace_segment(
    session: &mut SessionState,
    start_click: Pixel,
    end_click: Pixel,
) -> Result<SegmentRecord, PipelineError> {
    let result = session.result.as_ref().ok_or(PipelineError::NotRun)?;
    let graph = &result.graph;
    let start_node = snap_to_node(graph, start_click)?;
    let end_node = snap_to_node(graph, end_click)?;
    let path = shortest_path(graph, start_node, end_node)?;

    let positions: Vec<Pixel> = path
        .nodes
        .iter()
        .map(|&n| graph.nodes()[n].position)
        .collect();
    let spline = if positions.len() >= 2 {
        Some(fit_natural_spline(&positions)?)
    } else {
        None
    };
    let length_px = path_length(&path.pixels);
    let spline_length_px = spline.as_ref().map(|s| s.length(0.1));
    let radius = estimate_radius(&path.pixels, &result.mask, session.config.radius_step)?;
    let mean_radius_px = radius.mean_radius();
    let spacing = session.metadata.as_ref().and_then(|m| m.pixel_spacing_mm);

    let record = SegmentRecord {
        start_click,
        end_click,
        start_node,
        end_node,
        path,
        spline,
        length_px,
        spline_length_px,
        length_mm: spacing.map(|s| s * length_px),
        radius,
        mean_radius_px,
        mean_radius_mm: spacing.map(|s| s * mean_radius_px),
    };
    session.segments.push(record.clone());
    Ok(record)
}
