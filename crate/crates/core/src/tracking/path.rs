use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::{PixelGraph, TrackingError};
use crate::raster::Pixel;

/// Traced centerline between two nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CenterlinePath {
    /// Node ids from start to goal.
    pub nodes: Vec<usize>,
    /// Rasterized trace through the node positions.
    pub pixels: Vec<Pixel>,
    /// Sum of the traversed edge costs.
    pub cost: f64,
}

#[derive(PartialEq)]
struct Entry {
    dist: f64,
    node: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    // min-heap on (dist, node)
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Single-source Dijkstra distances (infinity where unreachable) and the
/// predecessor of every reached node on its shortest-path tree.
fn distances_from(graph: &PixelGraph, source: usize) -> (Vec<f64>, Vec<usize>) {
    let mut dist = vec![f64::INFINITY; graph.node_count()];
    let mut parent: Vec<usize> = (0..graph.node_count()).collect();
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Entry {
        dist: 0.0,
        node: source,
    });
    while let Some(Entry { dist: d, node }) = heap.pop() {
        if d > dist[node] {
            continue;
        }
        for &(n, c) in graph.neighbors(node) {
            let nd = d + c;
            if nd < dist[n] {
                dist[n] = nd;
                parent[n] = node;
                heap.push(Entry { dist: nd, node: n });
            }
        }
    }
    (dist, parent)
}

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

/// Minimal-cost path from `start` to `goal`.
///
/// Distances to the goal are computed with Dijkstra; the path is then
/// walked forward from the start, always stepping to the smallest-id
/// neighbour that stays on a shortest path. Among equal-cost paths this
/// yields the lexicographically smallest node sequence.
pub fn shortest_path(
    graph: &PixelGraph,
    start: usize,
    goal: usize,
) -> Result<CenterlinePath, TrackingError> {
    for id in [start, goal] {
        if id >= graph.node_count() {
            return Err(TrackingError::UnknownNode(id));
        }
    }
    let (to_goal, toward_goal) = distances_from(graph, goal);
    let mut visited = vec![false; graph.node_count()];
    visited[start] = true;
    if to_goal[start].is_infinite() {
        return Err(TrackingError::NoPath { start, goal });
    }
    let mut nodes = vec![start];
    let mut cost = 0.0;
    let mut cur = start;
    while cur != goal {
        let next = graph.neighbors(cur).iter().copied().find(|&(n, c)| {
            !visited[n] && to_goal[n].is_finite() && near(to_goal[cur], c + to_goal[n])
        });
        let (next, c) = match next {
            Some(step) => step,
            None => {
                // rounding or zero-cost plateaus: follow the Dijkstra tree
                let n = toward_goal[cur];
                (n, graph.edge_cost(cur, n).expect("tree edges exist"))
            }
        };
        visited[next] = true;
        cost += c;
        nodes.push(next);
        cur = next;
    }
    let positions: Vec<Pixel> = nodes.iter().map(|&n| graph.nodes()[n].position).collect();
    Ok(CenterlinePath {
        nodes,
        pixels: trace_through(&positions),
        cost,
    })
}

/// Bresenham segment from `a` to `b`, both ends included.
pub fn bresenham(a: Pixel, b: Pixel) -> Vec<Pixel> {
    let (mut x, mut y) = (a.x as i64, a.y as i64);
    let (x1, y1) = (b.x as i64, b.y as i64);
    let dx = (x1 - x).abs();
    let dy = -(y1 - y).abs();
    let sx = if x < x1 { 1 } else { -1 };
    let sy = if y < y1 { 1 } else { -1 };
    let mut err = dx + dy;
    let mut out = Vec::with_capacity((dx.max(-dy) + 1) as usize);
    loop {
        out.push(Pixel::new(x as usize, y as usize));
        if x == x1 && y == y1 {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x += sx;
        }
        if e2 <= dx {
            err += dx;
            y += sy;
        }
    }
    out
}

fn trace_through(points: &[Pixel]) -> Vec<Pixel> {
    let mut out = vec![points[0]];
    for w in points.windows(2) {
        out.extend(bresenham(w[0], w[1]).into_iter().skip(1));
    }
    out
}

/// Nearest node to `click` by Euclidean distance; ties go to the smaller id.
pub fn snap_to_node(graph: &PixelGraph, click: Pixel) -> Result<usize, TrackingError> {
    graph
        .nodes()
        .iter()
        .map(|n| {
            let dx = n.position.x.abs_diff(click.x) as u128;
            let dy = n.position.y.abs_diff(click.y) as u128;
            (dx * dx + dy * dy, n.id)
        })
        .min()
        .map(|(_, id)| id)
        .ok_or(TrackingError::EmptyGraph)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tracking::{GraphEdge, VesselNode};

    fn nodes(n: usize) -> Vec<VesselNode> {
        (0..n)
            .map(|i| VesselNode {
                id: i,
                position: Pixel::new(i * 2, 0),
                vesselness: 1.0,
                orientation: 0.0,
            })
            .collect()
    }

    #[test]
    fn diamond() {
        let (a, b, c, d) = (0, 1, 2, 3);
        let g = PixelGraph::new(
            nodes(4),
            &[
                GraphEdge(a, b, 1.0),
                GraphEdge(a, c, 2.0),
                GraphEdge(b, d, 2.0),
                GraphEdge(c, d, 0.5),
            ],
        )
        .unwrap();
        let p = shortest_path(&g, a, d).unwrap();
        assert_eq!(p.nodes, vec![a, c, d]);
        assert_eq!(p.cost, 2.5);
    }

    #[test]
    fn trivial_and_errors() {
        let g = PixelGraph::new(nodes(4), &[GraphEdge(0, 1, 1.0), GraphEdge(2, 3, 1.0)]).unwrap();
        let p = shortest_path(&g, 2, 2).unwrap();
        assert_eq!(
            (p.nodes, p.cost, p.pixels),
            (vec![2], 0.0, vec![Pixel::new(4, 0)])
        );
        assert_eq!(
            shortest_path(&g, 0, 3),
            Err(TrackingError::NoPath { start: 0, goal: 3 })
        );
        assert_eq!(shortest_path(&g, 0, 9), Err(TrackingError::UnknownNode(9)));
    }

    #[test]
    fn equal_cost_tie_takes_smaller_ids() {
        // 0-3-1 and 0-2-1 both cost 2
        let g = PixelGraph::new(
            nodes(4),
            &[
                GraphEdge(0, 3, 1.0),
                GraphEdge(3, 1, 1.0),
                GraphEdge(0, 2, 1.0),
                GraphEdge(2, 1, 1.0),
            ],
        )
        .unwrap();
        assert_eq!(shortest_path(&g, 0, 1).unwrap().nodes, vec![0, 2, 1]);
    }

    #[test]
    fn snapping() {
        let mut ns = nodes(8);
        ns[3].position = Pixel::new(10, 10);
        ns[7].position = Pixel::new(14, 10);
        let g = PixelGraph::new(ns, &[]).unwrap();
        assert_eq!(snap_to_node(&g, Pixel::new(12, 10)), Ok(3));
        assert_eq!(snap_to_node(&g, Pixel::new(14, 10)), Ok(7));
        assert_eq!(snap_to_node(&g, Pixel::new(500, 500)), Ok(7));
        let empty = PixelGraph::new(vec![], &[]).unwrap();
        assert_eq!(
            snap_to_node(&empty, Pixel::new(0, 0)),
            Err(TrackingError::EmptyGraph)
        );
    }

    #[test]
    fn bresenham_lines() {
        assert_eq!(bresenham(Pixel::new(0, 0), Pixel::new(3, 0)).len(), 4);
        let d = bresenham(Pixel::new(4, 4), Pixel::new(0, 0));
        assert_eq!(
            d,
            (0..5).rev().map(|k| Pixel::new(k, k)).collect::<Vec<_>>()
        );
        let s = bresenham(Pixel::new(0, 0), Pixel::new(4, 2));
        assert_eq!(s.len(), 5);
        assert!(s.windows(2).all(|w| w[0].chebyshev(w[1]) == 1));
    }
}
