use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{TrackingError, VesselNode};

/// Weights of the edge cost
/// `w_dist * euclid + w_vessel * (1 - mean v) + w_orient * (1 - |cos dtheta|)`,
/// floored at `epsilon`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CostWeights {
    pub w_dist: f64,
    pub w_vessel: f64,
    pub w_orient: f64,
    pub epsilon: f64,
}

impl Default for CostWeights {
    fn default() -> Self {
        Self {
            w_dist: 1.0,
            w_vessel: 2.0,
            w_orient: 0.5,
            epsilon: 1e-6,
        }
    }
}

impl CostWeights {
    pub fn validate(&self) -> Result<(), TrackingError> {
        let ws = [self.w_dist, self.w_vessel, self.w_orient];
        if ws.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(TrackingError::InvalidWeights(
                "weights must be finite and >= 0".into(),
            ));
        }
        if ws.iter().all(|&w| w == 0.0) {
            return Err(TrackingError::InvalidWeights(
                "at least one weight must be positive".into(),
            ));
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(TrackingError::InvalidWeights(
                "epsilon must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn cost(&self, a: &VesselNode, b: &VesselNode) -> f64 {
        let dist = a.position.distance(b.position);
        let vessel = 1.0 - 0.5 * (a.vesselness + b.vesselness);
        let orient = 1.0 - (a.orientation - b.orientation).cos().abs();
        (self.w_dist * dist + self.w_vessel * vessel + self.w_orient * orient).max(self.epsilon)
    }
}

/// Undirected edge `[i, j, cost]` with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphEdge(pub usize, pub usize, pub f64);

/// Weighted undirected graph over vessel nodes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PixelGraph {
    nodes: Vec<VesselNode>,
    edges: Vec<GraphEdge>,
    #[serde(skip)]
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl PixelGraph {
    /// Build a graph from explicit edges. Node ids must equal their index.
    /// Parallel edges keep the smallest cost.
    pub fn new(nodes: Vec<VesselNode>, edges: &[GraphEdge]) -> Result<Self, TrackingError> {
        if let Some((i, n)) = nodes.iter().enumerate().find(|(i, n)| n.id != *i) {
            return Err(TrackingError::InvalidEdge(format!(
                "node at index {i} has id {}",
                n.id
            )));
        }
        let mut best: HashMap<(usize, usize), f64> = HashMap::new();
        for &GraphEdge(a, b, c) in edges {
            if a >= nodes.len() || b >= nodes.len() {
                return Err(TrackingError::UnknownNode(a.max(b)));
            }
            if a == b {
                return Err(TrackingError::InvalidEdge(format!("self-loop at {a}")));
            }
            if !(c.is_finite() && c >= 0.0) {
                return Err(TrackingError::InvalidEdge(format!("cost {c} on {a}-{b}")));
            }
            let key = (a.min(b), a.max(b));
            best.entry(key).and_modify(|v| *v = v.min(c)).or_insert(c);
        }
        let mut edges: Vec<GraphEdge> = best
            .into_iter()
            .map(|((a, b), c)| GraphEdge(a, b, c))
            .collect();
        edges.sort_by_key(|x| (x.0, x.1));
        let mut adjacency = vec![Vec::new(); nodes.len()];
        for &GraphEdge(a, b, c) in &edges {
            adjacency[a].push((b, c));
            adjacency[b].push((a, c));
        }
        for list in &mut adjacency {
            list.sort_by_key(|&(n, _)| n);
        }
        Ok(Self {
            nodes,
            edges,
            adjacency,
        })
    }

    pub fn nodes(&self) -> &[VesselNode] {
        &self.nodes
    }

    pub fn edges(&self) -> &[GraphEdge] {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Neighbours of `id` with edge costs, sorted by neighbour id.
    pub fn neighbors(&self, id: usize) -> &[(usize, f64)] {
        &self.adjacency[id]
    }

    pub fn edge_cost(&self, a: usize, b: usize) -> Option<f64> {
        let list = self.adjacency.get(a)?;
        list.binary_search_by_key(&b, |&(n, _)| n)
            .ok()
            .map(|i| list[i].1)
    }

    /// Same graph with every cost multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        let edges: Vec<GraphEdge> = self
            .edges
            .iter()
            .map(|e| GraphEdge(e.0, e.1, e.2 * k))
            .collect();
        Self::new(self.nodes.clone(), &edges).expect("scaling keeps the graph valid")
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("graph serializes")
    }
}

/// Connect every pair of nodes whose positions are at Chebyshev distance at
/// most 4, i.e. lie in a common 5x5 window.
pub fn build_graph(
    nodes: Vec<VesselNode>,
    weights: &CostWeights,
) -> Result<PixelGraph, TrackingError> {
    weights.validate()?;
    let by_pos: HashMap<(usize, usize), usize> = nodes
        .iter()
        .map(|n| ((n.position.x, n.position.y), n.id))
        .collect();
    let mut edges = Vec::new();
    for a in &nodes {
        let (x, y) = (a.position.x as isize, a.position.y as isize);
        for dy in -4..=4isize {
            for dx in -4..=4isize {
                let (nx, ny) = (x + dx, y + dy);
                if nx < 0 || ny < 0 {
                    continue;
                }
                if let Some(&b) = by_pos.get(&(nx as usize, ny as usize)) {
                    if b > a.id {
                        edges.push(GraphEdge(a.id, b, weights.cost(a, &nodes[b])));
                    }
                }
            }
        }
    }
    PixelGraph::new(nodes, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::Pixel;

    fn node(id: usize, x: usize, y: usize, v: f64, theta: f64) -> VesselNode {
        VesselNode {
            id,
            position: Pixel::new(x, y),
            vesselness: v,
            orientation: theta,
        }
    }

    #[test]
    fn single_and_far_nodes() {
        let w = CostWeights::default();
        assert!(build_graph(vec![node(0, 5, 5, 1.0, 0.0)], &w)
            .unwrap()
            .edges()
            .is_empty());
        let g = build_graph(vec![node(0, 5, 5, 1.0, 0.0), node(1, 10, 5, 1.0, 0.0)], &w).unwrap();
        assert!(g.edges().is_empty());
        let g = build_graph(vec![node(0, 5, 5, 1.0, 0.0), node(1, 9, 9, 1.0, 0.0)], &w).unwrap();
        assert_eq!(g.edges().len(), 1);
    }

    #[test]
    fn cost_formula() {
        let w = CostWeights {
            w_dist: 1.0,
            w_vessel: 1.0,
            w_orient: 1.0,
            epsilon: 1e-6,
        };
        let g = build_graph(vec![node(0, 5, 5, 1.0, 0.3), node(1, 8, 5, 1.0, 0.3)], &w).unwrap();
        assert_eq!(g.edges(), &[GraphEdge(0, 1, 3.0)]);
        let perp = w.cost(
            &node(0, 0, 0, 0.5, 0.0),
            &node(1, 0, 1, 0.5, std::f64::consts::FRAC_PI_2),
        );
        assert!((perp - (1.0 + 0.5 + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn weights_validated() {
        let w = CostWeights {
            w_dist: 0.0,
            w_vessel: 0.0,
            w_orient: 0.0,
            epsilon: 1e-6,
        };
        assert!(build_graph(vec![], &w).is_err());
    }

    #[test]
    fn json_export() {
        let g = build_graph(
            vec![node(0, 1, 1, 1.0, 0.0), node(1, 2, 1, 1.0, 0.0)],
            &CostWeights::default(),
        )
        .unwrap();
        let v = g.to_json();
        assert_eq!(v["edges"], serde_json::json!([[0, 1, 1.0]]));
        assert_eq!(v["nodes"][1]["x"], 2);
    }
}
