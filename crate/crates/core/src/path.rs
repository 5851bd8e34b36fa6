use serde::{Deserialize, Serialize};

use crate::error::PathError;
use crate::geometry::Point2;

/// A polyline of waypoints with its arc length cached.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point2>", into = "Vec<Point2>")]
pub struct Path {
    waypoints: Vec<Point2>,
    /// `cumulative[i]` is the arc length from the first waypoint to waypoint `i`.
    cumulative: Vec<f64>,
}

impl Path {
    pub fn new(waypoints: Vec<Point2>) -> Result<Self, PathError> {
        if waypoints.is_empty() {
            return Err(PathError::Empty);
        }
        if let Some(&bad) = waypoints.iter().find(|p| !p.is_finite()) {
            return Err(PathError::NonFinite(bad));
        }
        let mut cumulative = Vec::with_capacity(waypoints.len());
        let mut acc = 0.0;
        cumulative.push(0.0);
        for w in waypoints.windows(2) {
            acc += w[0].distance(w[1]);
            cumulative.push(acc);
        }
        Ok(Self { waypoints, cumulative })
    }

    pub fn waypoints(&self) -> &[Point2] {
        &self.waypoints
    }

    pub fn length(&self) -> f64 {
        *self.cumulative.last().expect("non-empty")
    }

    /// Number of line segments, `waypoints - 1`.
    pub fn segments(&self) -> usize {
        self.waypoints.len() - 1
    }

    pub fn start(&self) -> Point2 {
        self.waypoints[0]
    }

    pub fn end(&self) -> Point2 {
        *self.waypoints.last().expect("non-empty")
    }

    /// Arc length at each waypoint.
    pub fn arc_lengths(&self) -> &[f64] {
        &self.cumulative
    }

    /// Point at arc length `s`, clamped to the ends.
    pub fn point_at(&self, s: f64) -> Point2 {
        if s <= 0.0 || self.waypoints.len() == 1 {
            return self.start();
        }
        if s >= self.length() {
            return self.end();
        }
        let i = self.segment_at(s);
        let (s0, s1) = (self.cumulative[i], self.cumulative[i + 1]);
        if s1 <= s0 {
            return self.waypoints[i];
        }
        self.waypoints[i].lerp(self.waypoints[i + 1], (s - s0) / (s1 - s0))
    }

    /// Index of the segment containing arc length `s` (clamped).
    pub fn segment_at(&self, s: f64) -> usize {
        let n = self.segments();
        if n == 0 {
            return 0;
        }
        let idx = self.cumulative.partition_point(|&c| c <= s);
        idx.saturating_sub(1).min(n - 1)
    }

    /// Closest point on the path to `p`, restricted to arc lengths in
    /// `[from, to]`. Returns `(arc length, distance)`; ties go to the
    /// smaller arc length.
    pub fn project_within(&self, p: Point2, from: f64, to: f64) -> (f64, f64) {
        let from = from.clamp(0.0, self.length());
        let to = to.clamp(from, self.length());
        if self.segments() == 0 {
            return (0.0, p.distance(self.start()));
        }
        let mut best = (from, p.distance(self.point_at(from)));
        for i in self.segment_at(from)..self.segments() {
            let (s0, s1) = (self.cumulative[i], self.cumulative[i + 1]);
            if s0 > to {
                break;
            }
            let (a, b) = (self.waypoints[i], self.waypoints[i + 1]);
            let len = s1 - s0;
            if len <= 0.0 {
                continue;
            }
            let u = ((p - a).dot(b - a) / (len * len)).clamp(0.0, 1.0);
            let s = (s0 + u * len).clamp(from, to);
            let d = p.distance(self.point_at(s));
            if d < best.1 {
                best = (s, d);
            }
        }
        best
    }

    /// Closest point over the whole path.
    pub fn project(&self, p: Point2) -> (f64, f64) {
        self.project_within(p, 0.0, self.length())
    }

    /// The part of the path from arc length `s` to the end. A single-point
    /// path when `s` is at or past the end.
    pub fn suffix_from(&self, s: f64) -> Path {
        if s >= self.length() || self.segments() == 0 {
            return Path::new(vec![self.end()]).expect("non-empty");
        }
        let s = s.max(0.0);
        let i = self.segment_at(s);
        let mut waypoints = Vec::with_capacity(self.waypoints.len() - i);
        let head = self.point_at(s);
        waypoints.push(head);
        for &w in &self.waypoints[i + 1..] {
            if w != head || waypoints.len() > 1 {
                waypoints.push(w);
            }
        }
        Path::new(waypoints).expect("non-empty, finite")
    }
}

impl TryFrom<Vec<Point2>> for Path {
    type Error = PathError;
    fn try_from(v: Vec<Point2>) -> Result<Self, Self::Error> {
        Path::new(v)
    }
}

impl From<Path> for Vec<Point2> {
    fn from(p: Path) -> Self {
        p.waypoints
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(raw: &[(f64, f64)]) -> Path {
        Path::new(raw.iter().map(|&(x, y)| Point2::new(x, y)).collect()).unwrap()
    }

    #[test]
    fn length_and_segments() {
        let p = path(&[(0.0, 0.0), (3.0, 0.0), (3.0, 4.0), (0.0, 0.0)]);
        assert_eq!(p.segments(), 3);
        assert!((p.length() - 12.0).abs() < 1e-12);
        assert!(Path::new(vec![]).is_err());
    }

    #[test]
    fn point_at_interpolates() {
        let p = path(&[(0.0, 0.0), (2.0, 0.0), (2.0, 2.0)]);
        assert_eq!(p.point_at(1.0), Point2::new(1.0, 0.0));
        assert_eq!(p.point_at(3.0), Point2::new(2.0, 1.0));
        assert_eq!(p.point_at(10.0), Point2::new(2.0, 2.0));
    }

    #[test]
    fn suffix_examples() {
        let p = path(&[(0.0, 0.0), (10.0, 0.0)]);
        assert_eq!(p.suffix_from(0.0), p);
        let half = p.suffix_from(5.0);
        assert!((half.length() - 5.0).abs() < 1e-12);
        assert_eq!(p.suffix_from(12.0).segments(), 0);
    }

    #[test]
    fn projection_respects_window() {
        let p = path(&[(0.0, 0.0), (10.0, 0.0), (10.0, 1.0), (0.0, 1.0)]);
        let q = Point2::new(2.0, 0.9);
        let (s_all, _) = p.project(q);
        assert!((s_all - 19.0).abs() < 1e-9);
        let (s_win, _) = p.project_within(q, 0.0, 5.0);
        assert!((s_win - 2.0).abs() < 1e-9);
    }
}
