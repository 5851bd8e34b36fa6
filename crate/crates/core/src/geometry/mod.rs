//! 2-D primitives and the predicates the planners are built on.
//!
//! Everything here is a pure function over immutable values. Tolerances are
//! relative to the magnitude of the operands so the same map behaves the same
//! way whether it is expressed in millimetres or metres.

mod offset;
mod polygon;
mod predicates;

pub use offset::inflate_polygon;
pub use polygon::{Polygon, PolygonId};
pub use predicates::{
    first_interior_param, first_intersected_polygon, is_convex_corner, is_tangential,
    line_intersects_polygon, point_in_polygon, point_segment_distance, segment_intersections,
    segments_touch,
};

use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::GeometryError;

/// Relative tolerance for collinearity: `|cross| <= EPS_CROSS * |b - a| * |c - a|`.
pub const EPS_CROSS: f64 = 1e-9;
/// Absolute tolerance on segment parameters in `[0, 1]`.
pub const EPS_PARAM: f64 = 1e-9;
/// Relative tolerance for "on the boundary", scaled by the polygon extent.
pub const EPS_BOUNDARY: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    /// Builds a point without checking finiteness. Use [`Point2::try_new`] on
    /// untrusted input.
    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn try_new(x: f64, y: f64) -> Result<Self, GeometryError> {
        if x.is_finite() && y.is_finite() {
            Ok(Self { x, y })
        } else {
            Err(GeometryError::NonFinite { x, y })
        }
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    #[inline]
    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3-D cross product of two vectors.
    #[inline]
    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn distance(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    #[inline]
    pub fn lerp(self, other: Point2, t: f64) -> Point2 {
        Point2::new(
            self.x + (other.x - self.x) * t,
            self.y + (other.y - self.y) * t,
        )
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(self) -> Option<Point2> {
        let n = self.norm();
        (n > 0.0).then(|| Point2::new(self.x / n, self.y / n))
    }

    /// Counter-clockwise perpendicular.
    #[inline]
    pub fn perp(self) -> Point2 {
        Point2::new(-self.y, self.x)
    }
}

impl Add for Point2 {
    type Output = Point2;
    #[inline]
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    #[inline]
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    #[inline]
    fn mul(self, rhs: f64) -> Point2 {
        Point2::new(self.x * rhs, self.y * rhs)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    #[inline]
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl From<(f64, f64)> for Point2 {
    fn from((x, y): (f64, f64)) -> Self {
        Point2::new(x, y)
    }
}

/// A directed, non-degenerate line segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment2 {
    pub a: Point2,
    pub b: Point2,
}

impl Segment2 {
    pub fn new(a: Point2, b: Point2) -> Result<Self, GeometryError> {
        if !a.is_finite() || !b.is_finite() {
            let bad = if a.is_finite() { b } else { a };
            return Err(GeometryError::NonFinite { x: bad.x, y: bad.y });
        }
        if a == b {
            return Err(GeometryError::DegenerateSegment(a));
        }
        Ok(Self { a, b })
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.a.distance(self.b)
    }

    #[inline]
    pub fn point_at(&self, t: f64) -> Point2 {
        self.a.lerp(self.b, t)
    }

    pub fn bounds(&self) -> Aabb {
        Aabb::from_points([self.a, self.b]).expect("two points")
    }
}

/// Which side of the directed line `a -> b` a third point lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Left,
    Right,
    Collinear,
}

impl Neg for Orientation {
    type Output = Orientation;
    fn neg(self) -> Orientation {
        match self {
            Orientation::Left => Orientation::Right,
            Orientation::Right => Orientation::Left,
            Orientation::Collinear => Orientation::Collinear,
        }
    }
}

/// Sign of `(b - a) x (c - a)` with a relative collinearity band.
pub fn orientation(a: Point2, b: Point2, c: Point2) -> Orientation {
    let ab = b - a;
    let ac = c - a;
    let cross = ab.cross(ac);
    let scale = ab.norm() * ac.norm();
    if cross.abs() <= EPS_CROSS * scale {
        Orientation::Collinear
    } else if cross > 0.0 {
        Orientation::Left
    } else {
        Orientation::Right
    }
}

/// Axis-aligned rectangle, `min <= max` componentwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aabb {
    pub min: Point2,
    pub max: Point2,
}

impl Aabb {
    pub fn new(min: Point2, max: Point2) -> Result<Self, GeometryError> {
        if !min.is_finite() || !max.is_finite() || min.x > max.x || min.y > max.y {
            return Err(GeometryError::InvalidBounds { min, max });
        }
        Ok(Self { min, max })
    }

    pub fn from_points<I: IntoIterator<Item = Point2>>(points: I) -> Option<Self> {
        let mut it = points.into_iter();
        let first = it.next()?;
        let (mut min, mut max) = (first, first);
        for p in it {
            min.x = min.x.min(p.x);
            min.y = min.y.min(p.y);
            max.x = max.x.max(p.x);
            max.y = max.y.max(p.y);
        }
        Some(Self { min, max })
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    /// Longest side.
    pub fn extent(&self) -> f64 {
        self.width().max(self.height())
    }

    pub fn contains(&self, p: Point2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn contains_aabb(&self, other: &Aabb) -> bool {
        self.contains(other.min) && self.contains(other.max)
    }

    /// Closed-set overlap test.
    pub fn intersects(&self, other: &Aabb) -> bool {
        self.min.x <= other.max.x
            && other.min.x <= self.max.x
            && self.min.y <= other.max.y
            && other.min.y <= self.max.y
    }

    pub fn expanded(&self, margin: f64) -> Aabb {
        Aabb {
            min: Point2::new(self.min.x - margin, self.min.y - margin),
            max: Point2::new(self.max.x + margin, self.max.y + margin),
        }
    }

    pub fn center(&self) -> Point2 {
        self.min.lerp(self.max, 0.5)
    }

    /// Closed-set test of a segment against this rectangle (Liang-Barsky clip).
    pub fn intersects_segment(&self, a: Point2, b: Point2) -> bool {
        let d = b - a;
        let mut t0 = 0.0_f64;
        let mut t1 = 1.0_f64;
        for (p, q) in [
            (-d.x, a.x - self.min.x),
            (d.x, self.max.x - a.x),
            (-d.y, a.y - self.min.y),
            (d.y, self.max.y - a.y),
        ] {
            if p == 0.0 {
                if q < 0.0 {
                    return false;
                }
            } else {
                let r = q / p;
                if p < 0.0 {
                    t0 = t0.max(r);
                } else {
                    t1 = t1.min(r);
                }
                if t0 > t1 {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orientation_examples() {
        let o = Point2::new(0.0, 0.0);
        let x = Point2::new(1.0, 0.0);
        assert_eq!(orientation(o, x, Point2::new(0.0, 1.0)), Orientation::Left);
        assert_eq!(orientation(o, x, Point2::new(2.0, 0.0)), Orientation::Collinear);
        assert_eq!(orientation(o, x, Point2::new(0.0, -1.0)), Orientation::Right);
    }

    #[test]
    fn orientation_is_scale_invariant() {
        for scale in [1e-6, 1.0, 1e6] {
            let a = Point2::new(0.0, 0.0);
            let b = Point2::new(scale, 0.0);
            let c = Point2::new(2.0 * scale, 1e-12 * scale);
            assert_eq!(orientation(a, b, c), Orientation::Collinear);
            let c = Point2::new(2.0 * scale, 1e-6 * scale);
            assert_eq!(orientation(a, b, c), Orientation::Left);
        }
    }

    #[test]
    fn point_rejects_non_finite() {
        assert!(Point2::try_new(f64::NAN, 0.0).is_err());
        assert!(Point2::try_new(0.0, f64::INFINITY).is_err());
        assert!(Point2::try_new(1.0, 2.0).is_ok());
    }

    #[test]
    fn degenerate_segment_rejected() {
        let p = Point2::new(1.0, 1.0);
        assert!(matches!(
            Segment2::new(p, p),
            Err(GeometryError::DegenerateSegment(_))
        ));
    }

    #[test]
    fn aabb_segment_clip() {
        let r = Aabb::new(Point2::new(0.0, 0.0), Point2::new(1.0, 1.0)).unwrap();
        assert!(r.intersects_segment(Point2::new(-1.0, 0.5), Point2::new(2.0, 0.5)));
        // touching a corner counts
        assert!(r.intersects_segment(Point2::new(1.0, 1.0), Point2::new(2.0, 2.0)));
        assert!(!r.intersects_segment(Point2::new(1.5, 0.0), Point2::new(3.0, 1.0)));
        // fully inside
        assert!(r.intersects_segment(Point2::new(0.2, 0.2), Point2::new(0.3, 0.8)));
    }
}
