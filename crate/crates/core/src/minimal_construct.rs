//! Lazy A* over an on-demand visibility graph.
//!
//! The search starts from the two-vertex graph `{s, t}` joined by a single
//! edge. An edge is only collision-checked when the vertex at its far end
//! is popped from the queue. When the check fails, the first obstacle hit is
//! "connected": its convex corners join the graph with tangential edges to
//! every vertex already known, and the popped vertex looks for a new parent
//! among its closed neighbours. Obstacles the search never runs into are
//! never looked at.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap};

use crate::error::PlanError;
use crate::geometry::{first_intersected_polygon, is_tangential, Point2, PolygonId, Segment2};
use crate::map::PolygonMap;
use crate::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId(pub usize);

/// What a graph vertex stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VertexOrigin {
    Start,
    Target,
    Corner { polygon: PolygonId, index: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VertexState {
    Untouched,
    Open,
    Closed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchVertex {
    pub position: Point2,
    pub origin: VertexOrigin,
    /// Cost of the best known path from the start.
    pub g: f64,
    /// Straight-line distance to the target.
    pub h: f64,
    pub f: f64,
    pub parent: Option<VertexId>,
    pub state: VertexState,
    /// Sequence number of the live queue entry; older entries are stale.
    stamp: u64,
}

/// Work done by one search.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchCounters {
    /// Edge collision tests, one per non-stale pop.
    pub intersection_tests: u64,
    /// Edges inserted into the graph, including the initial `(s, t)`.
    pub edges_added: u64,
    /// Vertices closed after a successful edge test.
    pub vertices_expanded: u64,
    /// Parent searches after an edge failed or a corner was added.
    pub reparent_calls: u64,
    /// Every pop from the queue, stale entries included.
    pub queue_pops: u64,
    /// Obstacles whose corners were added to the graph.
    pub polygons_connected: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct QueueEntry {
    f: f64,
    g: f64,
    seq: u64,
    vertex: VertexId,
}

impl Eq for QueueEntry {}

impl Ord for QueueEntry {
    // BinaryHeap is a max-heap: the "greatest" entry has the smallest f,
    // then the largest g, then the earliest insertion
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .f
            .total_cmp(&self.f)
            .then_with(|| self.g.total_cmp(&other.g))
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

impl PartialOrd for QueueEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The part of the visibility graph discovered so far, plus the A* queue.
#[derive(Debug, Clone)]
pub struct SearchGraph {
    vertices: Vec<SearchVertex>,
    adjacency: Vec<Vec<VertexId>>,
    queue: BinaryHeap<QueueEntry>,
    next_seq: u64,
    target: Point2,
    counters: SearchCounters,
}

impl SearchGraph {
    fn new(target: Point2) -> Self {
        Self {
            vertices: Vec::new(),
            adjacency: Vec::new(),
            queue: BinaryHeap::new(),
            next_seq: 0,
            target,
            counters: SearchCounters::default(),
        }
    }

    pub fn vertices(&self) -> &[SearchVertex] {
        &self.vertices
    }

    pub fn vertex(&self, v: VertexId) -> &SearchVertex {
        &self.vertices[v.0]
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v.0]
    }

    pub fn counters(&self) -> &SearchCounters {
        &self.counters
    }

    /// Current edge set, each undirected edge once with the smaller id first.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        for (i, ns) in self.adjacency.iter().enumerate() {
            for &n in ns {
                if i < n.0 {
                    out.push((VertexId(i), n));
                }
            }
        }
        out
    }

    pub fn edge_segments(&self) -> Vec<(Point2, Point2)> {
        self.edges()
            .into_iter()
            .map(|(a, b)| (self.vertex(a).position, self.vertex(b).position))
            .collect()
    }

    /// Number of entries currently in the queue, stale ones included.
    pub fn queued(&self) -> usize {
        self.queue.len()
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.adjacency[a.0].contains(&b)
    }

    fn add_vertex(&mut self, position: Point2, origin: VertexOrigin) -> VertexId {
        let id = VertexId(self.vertices.len());
        let h = position.distance(self.target);
        self.vertices.push(SearchVertex {
            position,
            origin,
            g: f64::INFINITY,
            h,
            f: f64::INFINITY,
            parent: None,
            state: VertexState::Untouched,
            stamp: u64::MAX,
        });
        self.adjacency.push(Vec::new());
        id
    }

    fn add_edge(&mut self, a: VertexId, b: VertexId) {
        self.adjacency[a.0].push(b);
        self.adjacency[b.0].push(a);
        self.counters.edges_added += 1;
    }

    fn remove_edge(&mut self, a: VertexId, b: VertexId) {
        self.adjacency[a.0].retain(|&x| x != b);
        self.adjacency[b.0].retain(|&x| x != a);
    }

    fn set_parent(&mut self, parent: VertexId, child: VertexId) {
        let g = self.vertices[parent.0].g + self.distance(parent, child);
        let v = &mut self.vertices[child.0];
        v.parent = Some(parent);
        v.g = g;
        v.f = g + v.h;
    }

    /// Drops the parent link. The vertex's cost becomes unknown and any
    /// queue entry it had goes stale.
    fn remove_parent(&mut self, v: VertexId) {
        let vx = &mut self.vertices[v.0];
        vx.parent = None;
        vx.g = f64::INFINITY;
        vx.f = f64::INFINITY;
        vx.stamp = u64::MAX;
        if vx.state == VertexState::Open {
            vx.state = VertexState::Untouched;
        }
    }

    fn push(&mut self, v: VertexId) {
        let seq = self.next_seq;
        self.next_seq += 1;
        let vx = &mut self.vertices[v.0];
        vx.state = VertexState::Open;
        vx.stamp = seq;
        self.queue.push(QueueEntry { f: vx.f, g: vx.g, seq, vertex: v });
    }

    /// Next live queue entry; stale duplicates are discarded.
    fn pop(&mut self) -> Option<VertexId> {
        while let Some(entry) = self.queue.pop() {
            self.counters.queue_pops += 1;
            let v = &self.vertices[entry.vertex.0];
            if v.state == VertexState::Open && v.stamp == entry.seq {
                return Some(entry.vertex);
            }
        }
        None
    }

    fn close(&mut self, v: VertexId) {
        self.vertices[v.0].state = VertexState::Closed;
    }

    fn distance(&self, a: VertexId, b: VertexId) -> f64 {
        self.vertices[a.0].position.distance(self.vertices[b.0].position)
    }

    /// Re-parents a parentless `v` onto the closed neighbour that gives the
    /// cheapest path, and queues it. Leaves `v` untouched if no neighbour
    /// is closed.
    pub fn find_parent(&mut self, v: VertexId) {
        self.counters.reparent_calls += 1;
        let mut best: Option<(f64, VertexId)> = None;
        for &n in &self.adjacency[v.0] {
            let nv = &self.vertices[n.0];
            if nv.state != VertexState::Closed {
                continue;
            }
            let cost = nv.g + self.distance(n, v);
            if best.is_none_or(|(c, _)| cost < c) {
                best = Some((cost, n));
            }
        }
        if let Some((_, u)) = best {
            self.set_parent(u, v);
            self.push(v);
        }
    }

    /// Walks parent links back from `t` to the start.
    ///
    /// # Panics
    /// On a broken or cyclic parent chain, which is an internal defect.
    pub fn extract_path(&self, t: VertexId) -> Path {
        let mut chain = vec![t];
        let mut cur = t;
        while let Some(p) = self.vertices[cur.0].parent {
            chain.push(p);
            cur = p;
            assert!(chain.len() <= self.vertices.len(), "cyclic parent chain");
        }
        assert_eq!(
            self.vertices[cur.0].origin,
            VertexOrigin::Start,
            "parent chain does not reach the start"
        );
        chain.reverse();
        Path::new(chain.into_iter().map(|v| self.vertices[v.0].position).collect())
            .expect("finite positions")
    }
}

/// A successful search: the path and the graph that produced it.
#[derive(Debug, Clone)]
pub struct PlanOutcome {
    pub path: Path,
    pub graph: SearchGraph,
}

impl PlanOutcome {
    pub fn counters(&self) -> &SearchCounters {
        self.graph.counters()
    }
}

/// Shortest obstacle-avoiding path from `s` to `t`.
///
/// `s` and `t` must lie inside the map bounds and outside every obstacle
/// interior; they may touch an obstacle boundary.
pub fn plan(map: &PolygonMap, s: Point2, t: Point2) -> Result<PlanOutcome, PlanError> {
    check_query(map, s, t)?;
    Search::new(map, s, t).run()
}

pub(crate) fn check_query(map: &PolygonMap, s: Point2, t: Point2) -> Result<(), PlanError> {
    for (name, p) in [("start", s), ("target", t)] {
        if !p.is_finite() {
            return Err(PlanError::InvalidQuery(format!("{name} {p} is not finite")));
        }
        if !map.bounds().contains(p) {
            return Err(PlanError::InvalidQuery(format!("{name} {p} is outside the map bounds")));
        }
        if let Some(id) = map.point_blocked(p) {
            return Err(PlanError::InvalidQuery(format!("{name} {p} is inside obstacle {id}")));
        }
    }
    Ok(())
}

struct Search<'a> {
    map: &'a PolygonMap,
    graph: SearchGraph,
    start: VertexId,
    target: VertexId,
    closed_polygons: BTreeSet<PolygonId>,
}

impl<'a> Search<'a> {
    fn new(map: &'a PolygonMap, s: Point2, t: Point2) -> Self {
        let mut graph = SearchGraph::new(t);
        let start = graph.add_vertex(s, VertexOrigin::Start);
        let target = graph.add_vertex(t, VertexOrigin::Target);
        graph.vertices[start.0].g = 0.0;
        graph.vertices[start.0].f = graph.vertices[start.0].h;
        graph.add_edge(start, target);
        graph.set_parent(start, target);
        graph.close(start);
        graph.push(target);
        Self { map, graph, start, target, closed_polygons: BTreeSet::new() }
    }

    fn run(mut self) -> Result<PlanOutcome, PlanError> {
        while let Some(v) = self.graph.pop() {
            let u = self.graph.vertices[v.0].parent.expect("queued vertices have a parent");
            let (pu, pv) = (self.graph.vertices[u.0].position, self.graph.vertices[v.0].position);
            self.graph.counters.intersection_tests += 1;
            let hit = Segment2::new(pu, pv)
                .ok()
                .and_then(|seg| first_intersected_polygon(&seg, self.map));
            match hit {
                None => {
                    if v == self.target {
                        let path = self.graph.extract_path(v);
                        return Ok(PlanOutcome { path, graph: self.graph });
                    }
                    self.graph.close(v);
                    self.graph.counters.vertices_expanded += 1;
                    self.relax_neighbors(v);
                }
                Some(p) => {
                    self.graph.remove_edge(v, u);
                    self.graph.remove_parent(v);
                    self.graph.find_parent(v);
                    if self.closed_polygons.insert(p) {
                        self.connect_obstacle(p);
                    }
                }
            }
        }
        Err(PlanError::NoPath { counters: self.graph.counters })
    }

    fn relax_neighbors(&mut self, v: VertexId) {
        let g_v = self.graph.vertices[v.0].g;
        let neighbors = self.graph.adjacency[v.0].clone();
        for n in neighbors {
            let nv = &self.graph.vertices[n.0];
            if nv.state == VertexState::Closed {
                continue;
            }
            let g_new = g_v + self.graph.distance(v, n);
            if nv.state != VertexState::Open || g_new < nv.g {
                self.graph.set_parent(v, n);
                self.graph.push(n);
            }
        }
    }

    /// Adds the convex corners of `p` with every tangential edge to the
    /// vertices already in the graph. Edges are not collision-checked here.
    fn connect_obstacle(&mut self, p: PolygonId) {
        let polygon = self.map.polygon(p).expect("hit polygon belongs to the map");
        self.graph.counters.polygons_connected += 1;
        for i in polygon.convex_corners() {
            let pos = polygon.vertex(i);
            let new = self
                .graph
                .add_vertex(pos, VertexOrigin::Corner { polygon: p, index: i });
            for j in 0..new.0 {
                let other = self.graph.vertices[j].position;
                let origin = self.graph.vertices[j].origin;
                if other == pos {
                    continue;
                }
                let toward_new = Segment2::new(other, pos).expect("distinct");
                if !is_tangential(&toward_new, polygon, i).expect("anchored at corner") {
                    continue;
                }
                if let VertexOrigin::Corner { polygon: q, index } = origin {
                    let q = self.map.polygon(q).expect("corner of a map polygon");
                    let toward_other = Segment2::new(pos, other).expect("distinct");
                    if !is_tangential(&toward_other, q, index).expect("anchored at corner") {
                        continue;
                    }
                }
                self.graph.add_edge(new, VertexId(j));
            }
            self.graph.find_parent(new);
        }
        debug_assert!(self.graph.vertices[self.start.0].state == VertexState::Closed);
    }
}
