//! The obstacle set, its change events, and validation.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

use crate::error::MapError;
use crate::geometry::{
    inflate_polygon, line_intersects_polygon, point_in_polygon, Aabb, Point2,
    Polygon, PolygonId, Segment2,
};
use crate::path::Path;

/// A problem found by [`validate_map`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Violation {
    Overlap(PolygonId, PolygonId),
    SelfIntersecting(PolygonId),
    OutOfBounds { polygon: PolygonId, vertex: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Overlap(a, b) => write!(f, "polygons {a} and {b} overlap"),
            Violation::SelfIntersecting(id) => write!(f, "polygon {id} self-intersects"),
            Violation::OutOfBounds { polygon, vertex } => {
                write!(f, "vertex {vertex} of polygon {polygon} is outside the map bounds")
            }
        }
    }
}

/// Disjoint obstacles inside a bounding rectangle, plus a version counter
/// bumped on every successful mutation.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonMap {
    polygons: BTreeMap<PolygonId, Polygon>,
    bounds: Aabb,
    version: u64,
}

impl PolygonMap {
    /// Builds a map at version 0, rejecting duplicate ids and any violation
    /// reported by [`validate_map`].
    pub fn new(bounds: Aabb, polygons: Vec<Polygon>) -> Result<Self, MapError> {
        let mut by_id = BTreeMap::new();
        for p in polygons {
            let id = p.id();
            if by_id.insert(id, p).is_some() {
                return Err(MapError::DuplicatePolygon(id));
            }
        }
        let map = Self { polygons: by_id, bounds, version: 0 };
        let report = validate_map(&map);
        if report.is_empty() {
            Ok(map)
        } else {
            Err(MapError::Invalid(report))
        }
    }

    /// Skips validation so tests can build overlapping layouts.
    #[cfg(test)]
    pub(crate) fn new_unchecked(bounds: Aabb, polygons: Vec<Polygon>) -> Self {
        let polygons = polygons.into_iter().map(|p| (p.id(), p)).collect();
        Self { polygons, bounds, version: 0 }
    }

    pub fn bounds(&self) -> &Aabb {
        &self.bounds
    }

    pub fn version(&self) -> u64 {
        self.version
    }

    /// Polygons in ascending id order.
    pub fn polygons(&self) -> impl ExactSizeIterator<Item = &Polygon> + Clone {
        self.polygons.values()
    }

    pub fn polygon(&self, id: PolygonId) -> Option<&Polygon> {
        self.polygons.get(&id)
    }

    pub fn len(&self) -> usize {
        self.polygons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polygons.is_empty()
    }

    /// Total number of polygon corners.
    pub fn vertex_count(&self) -> usize {
        self.polygons.values().map(Polygon::len).sum()
    }

    /// Whether `q` lies strictly inside some obstacle.
    pub fn point_blocked(&self, q: Point2) -> Option<PolygonId> {
        self.polygons
            .values()
            .find(|p| point_in_polygon(q, p))
            .map(Polygon::id)
    }

    /// Same obstacles and bounds, ignoring the version counter.
    pub fn same_geometry(&self, other: &PolygonMap) -> bool {
        self.bounds == other.bounds
            && self.polygons.len() == other.polygons.len()
            && self.polygons.iter().zip(&other.polygons).all(|((ia, a), (ib, b))| {
                ia == ib
                    && a.len() == b.len()
                    && a.vertices()
                        .iter()
                        .zip(b.vertices())
                        .all(|(u, v)| u.distance(*v) <= 1e-9 * (1.0 + u.norm()))
            })
    }

    /// Every polygon grown by `radius`; bounds grow by the same amount.
    /// The result is validated and keeps this map's version.
    pub fn inflated(&self, radius: f64) -> Result<PolygonMap, MapError> {
        let polygons = self
            .polygons
            .values()
            .map(|p| inflate_polygon(p, radius))
            .collect::<Result<Vec<_>, _>>()?;
        let mut out = PolygonMap::new(self.bounds.expanded(radius), polygons)?;
        out.version = self.version;
        Ok(out)
    }
}

/// Reports every overlapping pair, self-intersecting polygon, and
/// out-of-bounds vertex. An empty report means the map is valid.
pub fn validate_map(m: &PolygonMap) -> Vec<Violation> {
    let mut report = Vec::new();
    let polys: Vec<&Polygon> = m.polygons.values().collect();
    for p in &polys {
        if Polygon::new(p.id(), p.vertices().to_vec()).is_err() {
            report.push(Violation::SelfIntersecting(p.id()));
        }
        for (i, v) in p.vertices().iter().enumerate() {
            if !m.bounds.contains(*v) {
                report.push(Violation::OutOfBounds { polygon: p.id(), vertex: i });
            }
        }
    }
    for (i, a) in polys.iter().enumerate() {
        for b in &polys[i + 1..] {
            if interiors_overlap(a, b) {
                report.push(Violation::Overlap(a.id(), b.id()));
            }
        }
    }
    report
}

/// Interiors overlap iff some boundary edge of one enters the other's
/// interior, or one lies entirely inside (or on) the other.
fn interiors_overlap(a: &Polygon, b: &Polygon) -> bool {
    let eps = a.boundary_eps().max(b.boundary_eps());
    if !a.bounds().intersects(&b.bounds().expanded(eps)) {
        return false;
    }
    let edge_enters = |p: &Polygon, q: &Polygon| {
        p.edges()
            .any(|(u, v)| Segment2::new(u, v).is_ok_and(|s| line_intersects_polygon(&s, q)))
    };
    edge_enters(a, b)
        || edge_enters(b, a)
        || point_in_polygon(a.interior_point(), b)
        || point_in_polygon(b.interior_point(), a)
}

/// A timed change to the map.
#[derive(Debug, Clone, PartialEq)]
pub struct MapEvent {
    pub time: f64,
    pub kind: MapEventKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MapEventKind {
    Appear(Polygon),
    Disappear(PolygonId),
    Move { id: PolygonId, by: Point2 },
}

impl MapEvent {
    pub fn polygon_id(&self) -> PolygonId {
        match &self.kind {
            MapEventKind::Appear(p) => p.id(),
            MapEventKind::Disappear(id) | MapEventKind::Move { id, .. } => *id,
        }
    }
}

/// Applies one event, returning the new map with its version bumped. The
/// input map is never modified; a rejected event leaves nothing changed.
pub fn apply_event(m: &PolygonMap, e: &MapEvent) -> Result<PolygonMap, MapError> {
    let mut polygons = m.polygons.clone();
    match &e.kind {
        MapEventKind::Appear(p) => {
            if polygons.contains_key(&p.id()) {
                return Err(MapError::DuplicatePolygon(p.id()));
            }
            polygons.insert(p.id(), p.clone());
        }
        MapEventKind::Disappear(id) => {
            polygons.remove(id).ok_or(MapError::UnknownPolygon(*id))?;
        }
        MapEventKind::Move { id, by } => {
            if !by.is_finite() {
                return Err(MapError::NonFiniteDisplacement(*by));
            }
            let moved = polygons.get(id).ok_or(MapError::UnknownPolygon(*id))?.translated(*by);
            polygons.insert(*id, moved);
        }
    }
    let next = PolygonMap { polygons, bounds: m.bounds, version: m.version + 1 };
    // only the touched polygon can introduce a violation
    let report: Vec<_> = validate_map(&next)
        .into_iter()
        .filter(|v| match v {
            Violation::Overlap(a, b) => *a == e.polygon_id() || *b == e.polygon_id(),
            Violation::SelfIntersecting(id) => *id == e.polygon_id(),
            Violation::OutOfBounds { polygon, .. } => *polygon == e.polygon_id(),
        })
        .collect();
    if report.is_empty() {
        Ok(next)
    } else {
        Err(MapError::Invalid(report))
    }
}

/// Whether any segment of `path` passes through an obstacle interior.
pub fn path_collides(m: &PolygonMap, path: &Path) -> bool {
    path.waypoints().windows(2).any(|w| {
        Segment2::new(w[0], w[1]).is_ok_and(|s| m.polygons().any(|p| line_intersects_polygon(&s, p)))
    })
}
