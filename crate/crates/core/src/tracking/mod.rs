//! Vessel graph and minimal-cost centerline tracing.

mod graph;
mod nodes;
mod path;

pub use graph::{build_graph, CostWeights, GraphEdge, PixelGraph};
pub use nodes::{extract_nodes, skeleton_nodes, VesselNode};
pub use path::{bresenham, shortest_path, snap_to_node, CenterlinePath};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrackingError {
    #[error("no path between node {start} and node {goal}")]
    NoPath { start: usize, goal: usize },
    #[error("unknown node id {0}")]
    UnknownNode(usize),
    #[error("graph has no nodes")]
    EmptyGraph,
    #[error("node window must be odd and at least 3, got {0}")]
    InvalidWindow(usize),
    #[error("invalid node floor {0}; expected a value in [0, 1)")]
    InvalidFloor(f64),
    #[error("invalid cost weights: {0}")]
    InvalidWeights(String),
    #[error("invalid edge: {0}")]
    InvalidEdge(String),
}
