use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::PlanError;
use crate::geometry::{is_tangential, line_intersects_polygon, Point2, Segment2};
use crate::map::PolygonMap;
use crate::minimal_construct::{check_query, VertexOrigin};
use crate::path::Path;

/// Every convex corner plus `s` and `t`, with an edge for each pair that is
/// tangential at its corner ends and passes through no obstacle interior.
#[derive(Debug, Clone)]
pub struct VisibilityGraph {
    positions: Vec<Point2>,
    origins: Vec<VertexOrigin>,
    adjacency: Vec<Vec<(usize, f64)>>,
    edge_count: usize,
}

impl VisibilityGraph {
    pub fn vertex_count(&self) -> usize {
        self.positions.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn positions(&self) -> &[Point2] {
        &self.positions
    }

    pub fn origins(&self) -> &[VertexOrigin] {
        &self.origins
    }

    pub fn edge_segments(&self) -> Vec<(Point2, Point2)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for (i, ns) in self.adjacency.iter().enumerate() {
            for &(j, _) in ns {
                if i < j {
                    out.push((self.positions[i], self.positions[j]));
                }
            }
        }
        out
    }

    /// Dijkstra from vertex 0 (`s`) to vertex 1 (`t`).
    fn shortest_path(&self) -> Option<Path> {
        let n = self.positions.len();
        let mut dist = vec![f64::INFINITY; n];
        let mut parent = vec![usize::MAX; n];
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();
        dist[0] = 0.0;
        heap.push((Reverse(OrdF64(0.0)), 0usize));
        while let Some((Reverse(OrdF64(d)), v)) = heap.pop() {
            if done[v] {
                continue;
            }
            done[v] = true;
            if v == 1 {
                break;
            }
            for &(w, len) in &self.adjacency[v] {
                let nd = d + len;
                if nd < dist[w] {
                    dist[w] = nd;
                    parent[w] = v;
                    heap.push((Reverse(OrdF64(nd)), w));
                }
            }
        }
        if !done[1] {
            return None;
        }
        let mut chain = vec![1];
        while *chain.last().expect("non-empty") != 0 {
            chain.push(parent[*chain.last().expect("non-empty")]);
        }
        chain.reverse();
        Some(Path::new(chain.into_iter().map(|i| self.positions[i]).collect()).expect("finite"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct OrdF64(f64);
impl Eq for OrdF64 {}
impl PartialOrd for OrdF64 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Exhaustive construction: every vertex pair is checked against every
/// obstacle.
pub fn build_full_visibility_graph(map: &PolygonMap, s: Point2, t: Point2) -> VisibilityGraph {
    let mut positions = vec![s, t];
    let mut origins = vec![VertexOrigin::Start, VertexOrigin::Target];
    for p in map.polygons() {
        for i in p.convex_corners() {
            positions.push(p.vertex(i));
            origins.push(VertexOrigin::Corner { polygon: p.id(), index: i });
        }
    }
    let n = positions.len();
    let mut adjacency = vec![Vec::new(); n];
    let mut edge_count = 0;
    let tangential_at = |seg: &Segment2, origin: VertexOrigin| match origin {
        VertexOrigin::Corner { polygon, index } => {
            let p = map.polygon(polygon).expect("corner of a map polygon");
            is_tangential(seg, p, index).expect("anchored at corner")
        }
        _ => true,
    };
    for i in 0..n {
        for j in (i + 1)..n {
            let Ok(forward) = Segment2::new(positions[i], positions[j]) else {
                continue;
            };
            let backward = Segment2::new(positions[j], positions[i]).expect("distinct");
            if !tangential_at(&forward, origins[j]) || !tangential_at(&backward, origins[i]) {
                continue;
            }
            if map.polygons().any(|p| line_intersects_polygon(&forward, p)) {
                continue;
            }
            let len = forward.length();
            adjacency[i].push((j, len));
            adjacency[j].push((i, len));
            edge_count += 1;
        }
    }
    VisibilityGraph { positions, origins, adjacency, edge_count }
}

/// Shortest path over the full visibility graph.
pub fn oracle_shortest_path(map: &PolygonMap, s: Point2, t: Point2) -> Result<Path, PlanError> {
    check_query(map, s, t)?;
    if s == t {
        return Ok(Path::new(vec![s]).expect("non-empty"));
    }
    build_full_visibility_graph(map, s, t)
        .shortest_path()
        .ok_or(PlanError::NoPath { counters: Default::default() })
}
