//! Vessel analysis for X-ray angiograms: enhancement, segmentation,
//! skeletonization, edge detection and minimal-cost centerline tracing with
//! length and radius measurement.

pub mod edges;
pub mod filtering;
pub mod geometry;
pub mod phantom;
pub mod pipeline;
pub mod raster;
pub mod segmentation;
pub mod topology;
pub mod tracking;

pub use edges::{canny, sobel_gradients, CannyParams, EdgeError, GradientField};
pub use filtering::{
    frangi_vesselness, gaussian_kernel, hessian_at_scale, median_filter, FilterError, FrangiParams,
    GaussianKernel, HessianField, Polarity, VesselnessMap,
};
pub use geometry::{
    distance_transform, estimate_radius, fit_natural_spline, path_length, CubicSpline,
    GeometryError, RadiusProfile,
};
pub use pipeline::{
    run_pipeline, trace_segment, PipelineConfig, PipelineError, PipelineResult, SegmentRecord,
    SessionState, Stage,
};
pub use raster::{
    load_image, render_overlay, save_image, BinaryMask, FloatImage, GrayImage, OverlayLayer, Pixel,
    RasterError, RgbImage,
};
pub use segmentation::{
    binarize, morphology, otsu_threshold, remove_small_components, Connectivity, Histogram256,
    MorphOp, SegmentationError, StructuringElement,
};
pub use topology::{prune, skeletonize, trace_branches, PruneParams, Skeleton};
pub use tracking::{
    build_graph, extract_nodes, shortest_path, snap_to_node, CenterlinePath, CostWeights,
    PixelGraph, TrackingError, VesselNode,
};
