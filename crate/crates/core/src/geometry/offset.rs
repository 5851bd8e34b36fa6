use super::Polygon;
use crate::error::GeometryError;

/// Grows `p` outward by `radius` using miter joins.
///
/// Each edge is shifted along its outward normal and adjacent shifted lines
/// are intersected. A convex corner whose miter point would land more than
/// `2 * radius` from the original vertex is squared off instead: the corner
/// is replaced by two points on the line perpendicular to the bisector at
/// distance `radius`, so the result still contains the full offset disk.
///
/// The output is re-validated; offsetting a narrow notch shut yields a
/// self-intersection error.
pub fn inflate_polygon(p: &Polygon, radius: f64) -> Result<Polygon, GeometryError> {
    if !radius.is_finite() || radius < 0.0 {
        return Err(GeometryError::InvalidRadius(radius));
    }
    if radius == 0.0 {
        return Ok(p.clone());
    }
    let n = p.len();
    let miter_limit = 2.0 * radius;
    let mut out = Vec::with_capacity(n + 4);
    for i in 0..n {
        let (prev, v, next) = (p.prev(i), p.vertex(i), p.next(i));
        let d_in = (v - prev).normalized().expect("distinct vertices");
        let d_out = (next - v).normalized().expect("distinct vertices");
        // outward normal of a CCW ring points to the right of travel
        let n_in = -d_in.perp();
        let n_out = -d_out.perp();
        let bisector = n_in + n_out;
        let cos_half = (0.5 * (1.0 + n_in.dot(n_out))).max(0.0).sqrt();
        let convex = d_in.cross(d_out) >= 0.0;
        if convex && (cos_half <= 1e-12 || radius / cos_half > miter_limit) {
            // square cap: the two offset edges are cut by the line at
            // distance `radius` perpendicular to the bisector
            let sin_half = (1.0 - cos_half * cos_half).sqrt();
            let run = radius * (1.0 - cos_half) / sin_half;
            out.push(v + n_in * radius + d_in * run);
            out.push(v + n_out * radius - d_out * run);
        } else {
            let dir = bisector.normalized().expect("non-opposite normals");
            out.push(v + dir * (radius / cos_half));
        }
    }
    Polygon::new(p.id(), out)
}
