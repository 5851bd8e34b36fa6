use super::{orientation, Orientation, Point2, Polygon, PolygonId, Segment2, EPS_PARAM};
use crate::error::GeometryError;
use crate::map::PolygonMap;

/// Corner `i` is convex iff `orientation(v[i-1], v[i], v[i+1])` is `Left`.
pub fn is_convex_corner(p: &Polygon, i: usize) -> bool {
    p.is_convex(i)
}

/// Whether the edge `e`, ending at corner `j` of `p`, has both polygon
/// neighbours of that corner on the same side. A neighbour lying on the
/// edge's supporting line counts as tangential.
pub fn is_tangential(e: &Segment2, p: &Polygon, j: usize) -> Result<bool, GeometryError> {
    let corner = p.vertex(j);
    let tol = 1e-12 * (corner.x.abs().max(corner.y.abs()).max(1.0));
    if e.b.distance(corner) > tol {
        return Err(GeometryError::NotAnchored {
            polygon: p.id(),
            index: j,
        });
    }
    let before = orientation(e.a, e.b, p.prev(j));
    let after = orientation(e.a, e.b, p.next(j));
    Ok(before == Orientation::Collinear || after == Orientation::Collinear || before == after)
}

pub fn point_segment_distance(q: Point2, a: Point2, b: Point2) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return q.distance(a);
    }
    let t = ((q - a).dot(ab) / len2).clamp(0.0, 1.0);
    q.distance(a + ab * t)
}

/// Strict interior membership by the even-odd rule. Points within the
/// polygon's boundary tolerance of any edge are reported as outside.
pub fn point_in_polygon(q: Point2, p: &Polygon) -> bool {
    let eps = p.boundary_eps();
    let b = p.bounds();
    if q.x < b.min.x - eps || q.x > b.max.x + eps || q.y < b.min.y - eps || q.y > b.max.y + eps {
        return false;
    }
    let mut inside = false;
    for (a, c) in p.edges() {
        if point_segment_distance(q, a, c) <= eps {
            return false;
        }
        if (a.y > q.y) != (c.y > q.y) {
            let x_cross = a.x + (q.y - a.y) / (c.y - a.y) * (c.x - a.x);
            if q.x < x_cross {
                inside = !inside;
            }
        }
    }
    inside
}

/// Closed-set intersection test for two segments (touching counts).
pub fn segments_touch(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let o1 = orientation(a, b, c);
    let o2 = orientation(a, b, d);
    let o3 = orientation(c, d, a);
    let o4 = orientation(c, d, b);
    if o1 != o2 && o3 != o4 {
        return true;
    }
    let on = |p: Point2, q: Point2, r: Point2| {
        // r on segment pq given collinearity
        r.x >= p.x.min(q.x) && r.x <= p.x.max(q.x) && r.y >= p.y.min(q.y) && r.y <= p.y.max(q.y)
    };
    (o1 == Orientation::Collinear && on(a, b, c))
        || (o2 == Orientation::Collinear && on(a, b, d))
        || (o3 == Orientation::Collinear && on(c, d, a))
        || (o4 == Orientation::Collinear && on(c, d, b))
}

/// Parameters along `e` where it crosses or touches the boundary of `p`,
/// sorted and deduplicated within `EPS_PARAM`.
pub fn segment_intersections(e: &Segment2, p: &Polygon) -> Vec<f64> {
    let mut out = Vec::new();
    if !e.bounds().intersects(&p.bounds().expanded(p.boundary_eps())) {
        return out;
    }
    let (a, b) = (e.a, e.b);
    let dir = b - a;
    let len2 = dir.dot(dir);
    let project = |q: Point2| (q - a).dot(dir) / len2;
    let mut push = |t: f64| {
        if (-EPS_PARAM..=1.0 + EPS_PARAM).contains(&t) {
            out.push(t.clamp(0.0, 1.0));
        }
    };
    for (c, d) in p.edges() {
        let oc = orientation(a, b, c);
        let od = orientation(a, b, d);
        if oc == Orientation::Collinear && od == Orientation::Collinear {
            let (tc, td) = (project(c), project(d));
            let (lo, hi) = if tc <= td { (tc, td) } else { (td, tc) };
            if hi < -EPS_PARAM || lo > 1.0 + EPS_PARAM {
                continue;
            }
            push(lo.max(0.0));
            push(hi.min(1.0));
            continue;
        }
        if oc == od {
            continue;
        }
        let oa = orientation(c, d, a);
        let ob = orientation(c, d, b);
        if oa == ob && oa != Orientation::Collinear {
            continue;
        }
        let t = if oc == Orientation::Collinear {
            project(c)
        } else if od == Orientation::Collinear {
            project(d)
        } else if oa == Orientation::Collinear {
            0.0
        } else if ob == Orientation::Collinear {
            1.0
        } else {
            let cd = d - c;
            let ca = cd.cross(a - c);
            let cb = cd.cross(b - c);
            ca / (ca - cb)
        };
        push(t);
    }
    out.sort_by(f64::total_cmp);
    out.dedup_by(|later, earlier| *later - *earlier <= EPS_PARAM);
    out
}

/// Parameter of the first sub-segment midpoint of `e` that lies strictly
/// inside `p`, or `None` if `e` at most grazes the boundary.
///
/// The segment is cut at every boundary contact; each piece lies entirely
/// inside or entirely outside, so its midpoint decides for the whole piece.
pub fn first_interior_param(e: &Segment2, p: &Polygon) -> Option<f64> {
    if !e.bounds().intersects(&p.bounds().expanded(p.boundary_eps())) {
        return None;
    }
    let cuts = segment_intersections(e, p);
    let mut prev = 0.0;
    for t in cuts.into_iter().chain(std::iter::once(1.0)) {
        if t - prev > EPS_PARAM {
            let mid = 0.5 * (prev + t);
            if point_in_polygon(e.point_at(mid), p) {
                return Some(mid);
            }
        }
        prev = t;
    }
    None
}

/// Whether `e` passes through the interior of `p`. Grazing contact (touching
/// a corner or running along an edge) does not count.
pub fn line_intersects_polygon(e: &Segment2, p: &Polygon) -> bool {
    first_interior_param(e, p).is_some()
}

/// The polygon whose interior `e` enters first, measured from `e.a`. Ties
/// go to the smaller id.
pub fn first_intersected_polygon(e: &Segment2, map: &PolygonMap) -> Option<PolygonId> {
    let mut best: Option<(f64, PolygonId)> = None;
    for p in map.polygons() {
        if let Some(t) = first_interior_param(e, p) {
            if best.is_none_or(|(bt, _)| t < bt) {
                best = Some((t, p.id()));
            }
        }
    }
    best.map(|(_, id)| id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Aabb;

    fn poly(id: u32, raw: &[(f64, f64)]) -> Polygon {
        Polygon::new(PolygonId(id), raw.iter().map(|&(x, y)| Point2::new(x, y)).collect()).unwrap()
    }

    fn seg(ax: f64, ay: f64, bx: f64, by: f64) -> Segment2 {
        Segment2::new(Point2::new(ax, ay), Point2::new(bx, by)).unwrap()
    }

    fn square2() -> Polygon {
        poly(1, &[(0.0, 0.0), (2.0, 0.0), (2.0, 2.0), (0.0, 2.0)])
    }

    fn unit_square() -> Polygon {
        poly(1, &[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])
    }

    #[test]
    fn convex_corner_examples() {
        let sq = unit_square();
        assert!((0..4).all(|i| is_convex_corner(&sq, i)));
        let l = poly(2, &[(0.0, 0.0), (2.0, 0.0), (2.0, 2.0), (1.0, 2.0), (1.0, 1.0), (0.0, 1.0)]);
        assert!(!is_convex_corner(&l, 4));
        assert_eq!((0..6).filter(|&i| is_convex_corner(&l, i)).count(), 5);
        let tri = poly(3, &[(0.0, 0.0), (3.0, 0.0), (0.0, 2.0)]);
        assert!((0..3).all(|i| is_convex_corner(&tri, i)));
    }

    #[test]
    fn collinear_corner_is_not_convex() {
        let p = poly(1, &[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (2.0, 2.0), (0.0, 2.0)]);
        assert!(!is_convex_corner(&p, 1));
    }

    #[test]
    fn tangential_examples() {
        let sq = square2();
        // along the diagonal the extension runs into the square
        let e = seg(-2.0, -2.0, 0.0, 0.0);
        assert!(!is_tangential(&e, &sq, 0).unwrap());
        // this one leaves below it: both neighbours on the left
        let e = seg(-2.0, 1.0, 0.0, 0.0);
        assert!(is_tangential(&e, &sq, 0).unwrap());
        // neighbour (2,0) on the supporting line
        let e = seg(-3.0, 0.0, 0.0, 0.0);
        assert!(is_tangential(&e, &sq, 0).unwrap());
    }

    #[test]
    fn tangential_requires_anchor() {
        let sq = square2();
        let e = seg(-2.0, -2.0, 0.5, 0.0);
        assert!(matches!(
            is_tangential(&e, &sq, 0),
            Err(GeometryError::NotAnchored { .. })
        ));
    }

    #[test]
    fn point_in_polygon_examples() {
        let sq = unit_square();
        assert!(point_in_polygon(Point2::new(0.5, 0.5), &sq));
        assert!(!point_in_polygon(Point2::new(5.0, 5.0), &sq));
        assert!(!point_in_polygon(Point2::new(0.5, 0.0), &sq));
        assert!(!point_in_polygon(Point2::new(1.0, 1.0), &sq));
    }

    #[test]
    fn segment_intersection_examples() {
        let sq = square2();
        let ts = segment_intersections(&seg(-1.0, 0.5, 3.0, 0.5), &sq);
        assert_eq!(ts.len(), 2);
        assert!((ts[0] - 0.25).abs() < 1e-12 && (ts[1] - 0.75).abs() < 1e-12);
        assert!(segment_intersections(&seg(3.0, 3.0, 5.0, 4.0), &sq).is_empty());
        let ts = segment_intersections(&seg(2.0, 2.0, 4.0, 3.0), &sq);
        assert_eq!(ts, vec![0.0]);
    }

    #[test]
    fn segment_through_corner_is_deduplicated() {
        // passes exactly through (0,0), shared by two edges
        let ts = segment_intersections(&seg(-1.0, 1.0, 1.0, -1.0), &square2());
        assert_eq!(ts, vec![0.5]);
    }

    #[test]
    fn line_intersection_examples() {
        let sq = square2();
        assert!(line_intersects_polygon(&seg(-1.0, 0.5, 3.0, 0.5), &sq));
        assert!(!line_intersects_polygon(&seg(-1.0, 1.0, 1.0, -1.0), &sq));
        // along an edge, corner to corner
        assert!(!line_intersects_polygon(&seg(0.0, 0.0, 2.0, 0.0), &sq));
        // along an edge, overshooting both corners
        assert!(!line_intersects_polygon(&seg(-1.0, 2.0, 3.0, 2.0), &sq));
        // diagonal between opposite corners
        assert!(line_intersects_polygon(&seg(0.0, 0.0, 2.0, 2.0), &sq));
        // starts inside
        assert!(line_intersects_polygon(&seg(1.0, 1.0, 5.0, 1.0), &sq));
    }

    #[test]
    fn reflex_notch_chord_leaves_interior() {
        // chord across the notch of an L touches two convex corners and the
        // reflex corner is behind it
        let l = poly(2, &[(0.0, 0.0), (2.0, 0.0), (2.0, 2.0), (1.0, 2.0), (1.0, 1.0), (0.0, 1.0)]);
        assert!(!line_intersects_polygon(&seg(1.0, 2.0, 0.0, 1.0), &l));
        assert!(line_intersects_polygon(&seg(2.0, 2.0, 0.0, 0.0), &l));
    }

    #[test]
    fn first_intersected_prefers_earliest() {
        let a = poly(5, &[(4.0, -1.0), (6.0, -1.0), (6.0, 1.0), (4.0, 1.0)]);
        let b = poly(2, &[(8.0, -1.0), (9.0, -1.0), (9.0, 1.0), (8.0, 1.0)]);
        let bounds = Aabb::new(Point2::new(-10.0, -10.0), Point2::new(20.0, 20.0)).unwrap();
        let map = PolygonMap::new(bounds, vec![a.clone(), b.clone()]).unwrap();
        let e = seg(0.0, 0.0, 10.0, 0.0);
        assert_eq!(first_intersected_polygon(&e, &map), Some(PolygonId(5)));
        let rev = seg(10.0, 0.0, 0.0, 0.0);
        assert_eq!(first_intersected_polygon(&rev, &map), Some(PolygonId(2)));
        let only = PolygonMap::new(bounds, vec![b]).unwrap();
        assert_eq!(first_intersected_polygon(&e, &only), Some(PolygonId(2)));
        let empty = PolygonMap::new(bounds, vec![]).unwrap();
        assert_eq!(first_intersected_polygon(&e, &empty), None);
    }
}
