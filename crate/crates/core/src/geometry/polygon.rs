use serde::{Deserialize, Serialize};
use std::fmt;

use super::{orientation, segments_touch, Aabb, Orientation, Point2, EPS_BOUNDARY};
use crate::error::GeometryError;

/// Opaque obstacle identifier. Ids are unique within a map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PolygonId(pub u32);

impl fmt::Display for PolygonId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A simple polygon with counter-clockwise vertex order.
///
/// Convexity of every corner and the bounding box are computed once at
/// construction, since the planners query them in their inner loops.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    id: PolygonId,
    vertices: Vec<Point2>,
    convex: Vec<bool>,
    bounds: Aabb,
}

impl Polygon {
    /// Validates and normalizes a vertex ring.
    ///
    /// A trailing vertex equal to the first one is dropped (closed rings are
    /// accepted). Clockwise input is reversed.
    pub fn new(id: PolygonId, mut vertices: Vec<Point2>) -> Result<Self, GeometryError> {
        if let Some(bad) = vertices.iter().find(|p| !p.is_finite()) {
            return Err(GeometryError::NonFinite { x: bad.x, y: bad.y });
        }
        if vertices.len() > 3 && vertices.first() == vertices.last() {
            vertices.pop();
        }
        if vertices.len() < 3 {
            return Err(GeometryError::TooFewVertices { id, count: vertices.len() });
        }
        let n = vertices.len();
        for i in 0..n {
            if vertices[i] == vertices[(i + 1) % n] {
                return Err(GeometryError::RepeatedVertex { id, index: i });
            }
        }
        let area = signed_area(&vertices);
        if area == 0.0 {
            return Err(GeometryError::ZeroArea(id));
        }
        if area < 0.0 {
            vertices.reverse();
        }
        if !is_simple(&vertices) {
            return Err(GeometryError::SelfIntersecting(id));
        }
        Ok(Self::from_ccw_unchecked(id, vertices))
    }

    fn from_ccw_unchecked(id: PolygonId, vertices: Vec<Point2>) -> Self {
        let n = vertices.len();
        let convex = (0..n)
            .map(|i| {
                orientation(vertices[(i + n - 1) % n], vertices[i], vertices[(i + 1) % n])
                    == Orientation::Left
            })
            .collect();
        let bounds = Aabb::from_points(vertices.iter().copied()).expect("non-empty");
        Self { id, vertices, convex, bounds }
    }

    pub fn id(&self) -> PolygonId {
        self.id
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> Point2 {
        self.vertices[i]
    }

    pub fn prev(&self, i: usize) -> Point2 {
        let n = self.vertices.len();
        self.vertices[(i + n - 1) % n]
    }

    pub fn next(&self, i: usize) -> Point2 {
        self.vertices[(i + 1) % self.vertices.len()]
    }

    /// Whether corner `i` bends outward (interior angle below 180 degrees).
    pub fn is_convex(&self, i: usize) -> bool {
        self.convex[i]
    }

    pub fn convex_corners(&self) -> impl Iterator<Item = usize> + '_ {
        self.convex.iter().enumerate().filter(|(_, c)| **c).map(|(i, _)| i)
    }

    pub fn bounds(&self) -> &Aabb {
        &self.bounds
    }

    /// Distance under which a point counts as lying on this polygon's boundary.
    pub fn boundary_eps(&self) -> f64 {
        EPS_BOUNDARY * self.bounds.extent().max(1.0)
    }

    /// Boundary edges `(v_i, v_{i+1})` in ring order.
    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    /// Rigid translation; keeps id and orientation.
    pub fn translated(&self, by: Point2) -> Polygon {
        let vertices = self.vertices.iter().map(|&v| v + by).collect();
        let mut out = Self::from_ccw_unchecked(self.id, vertices);
        // convexity is translation invariant; keep the original flags so
        // rounding in the shifted coordinates cannot flip a borderline corner
        out.convex.clone_from(&self.convex);
        out
    }

    pub fn with_id(&self, id: PolygonId) -> Polygon {
        Polygon { id, ..self.clone() }
    }

    /// A point strictly inside the polygon: the centroid of an ear.
    pub fn interior_point(&self) -> Point2 {
        let n = self.vertices.len();
        for i in 0..n {
            if !self.convex[i] {
                continue;
            }
            let (a, b, c) = (self.prev(i), self.vertices[i], self.next(i));
            let blocked = self.vertices.iter().enumerate().any(|(j, &q)| {
                j != i
                    && j != (i + 1) % n
                    && j != (i + n - 1) % n
                    && orientation(a, b, q) != Orientation::Right
                    && orientation(b, c, q) != Orientation::Right
                    && orientation(c, a, q) != Orientation::Right
            });
            if !blocked {
                return Point2::new((a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0);
            }
        }
        // every simple polygon has an ear; this is reachable only through
        // near-degenerate rings that passed the tolerance checks
        self.bounds.center()
    }
}

pub(crate) fn signed_area(vertices: &[Point2]) -> f64 {
    let n = vertices.len();
    let twice: f64 = (0..n)
        .map(|i| vertices[i].cross(vertices[(i + 1) % n]))
        .sum();
    twice * 0.5
}

fn is_simple(vertices: &[Point2]) -> bool {
    let n = vertices.len();
    for i in 0..n {
        let (a, b) = (vertices[i], vertices[(i + 1) % n]);
        // adjacent edges may only share their common vertex
        let c = vertices[(i + 2) % n];
        if orientation(a, b, c) == Orientation::Collinear && (a - b).dot(c - b) > 0.0 {
            return false;
        }
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (c, d) = (vertices[j], vertices[(j + 1) % n]);
            if segments_touch(a, b, c, d) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(raw: &[(f64, f64)]) -> Vec<Point2> {
        raw.iter().map(|&(x, y)| Point2::new(x, y)).collect()
    }

    #[test]
    fn clockwise_input_is_reversed() {
        let p = Polygon::new(
            PolygonId(1),
            pts(&[(0.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, 0.0)]),
        )
        .unwrap();
        assert!(p.area() > 0.0);
        assert!((0..4).all(|i| p.is_convex(i)));
    }

    #[test]
    fn closing_vertex_dropped() {
        let p = Polygon::new(
            PolygonId(1),
            pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 0.0)]),
        )
        .unwrap();
        assert_eq!(p.len(), 3);
    }

    #[test]
    fn bow_tie_rejected() {
        let err = Polygon::new(
            PolygonId(7),
            pts(&[(0.0, 0.0), (2.0, 2.0), (2.0, 0.0), (0.0, 1.0)]),
        )
        .unwrap_err();
        assert!(matches!(err, GeometryError::SelfIntersecting(PolygonId(7))));
    }

    #[test]
    fn degenerate_rings_rejected() {
        assert!(Polygon::new(PolygonId(1), pts(&[(0.0, 0.0), (1.0, 0.0)])).is_err());
        assert!(Polygon::new(
            PolygonId(1),
            pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 1.0)])
        )
        .is_err());
        assert!(Polygon::new(PolygonId(1), pts(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)])).is_err());
    }

    #[test]
    fn interior_point_of_l_shape() {
        let p = Polygon::new(
            PolygonId(1),
            pts(&[(0.0, 0.0), (2.0, 0.0), (2.0, 2.0), (1.0, 2.0), (1.0, 1.0), (0.0, 1.0)]),
        )
        .unwrap();
        let q = p.interior_point();
        assert!(super::super::point_in_polygon(q, &p));
    }
}
