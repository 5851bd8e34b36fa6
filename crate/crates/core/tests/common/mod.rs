#![allow(dead_code)]

use polynav::{Point2, Polygon, PolygonId};
use proptest::prelude::*;

/// Star-shaped polygon around `center` from sorted angles and radii.
pub fn star(id: u32, center: Point2, parts: &[(f64, f64)]) -> Option<Polygon> {
    let mut parts = parts.to_vec();
    parts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let vertices = parts.iter().map(|&(a, r)| center + Point2::new(a.cos(), a.sin()) * r).collect();
    Polygon::new(PolygonId(id), vertices).ok()
}

pub fn star_strategy() -> impl Strategy<Value = Polygon> {
    prop::collection::vec((0.0..std::f64::consts::TAU, 0.3f64..2.0), 3..=10)
        .prop_filter_map("degenerate ring", |parts| star(1, Point2::new(0.0, 0.0), &parts))
}

pub fn point_strategy(extent: f64) -> impl Strategy<Value = Point2> {
    (-extent..extent, -extent..extent).prop_map(|(x, y)| Point2::new(x, y))
}

/// Winding-number membership written independently of the library.
pub fn winding_inside(q: Point2, p: &Polygon) -> bool {
    let v = p.vertices();
    let mut winding = 0i32;
    for i in 0..v.len() {
        let (a, b) = (v[i], v[(i + 1) % v.len()]);
        let side = (b.x - a.x) * (q.y - a.y) - (q.x - a.x) * (b.y - a.y);
        if a.y <= q.y {
            if b.y > q.y && side > 0.0 {
                winding += 1;
            }
        } else if b.y <= q.y && side < 0.0 {
            winding -= 1;
        }
    }
    winding != 0
}

pub fn boundary_distance(q: Point2, p: &Polygon) -> f64 {
    p.edges().map(|(a, b)| polynav::geometry::point_segment_distance(q, a, b)).fold(f64::INFINITY, f64::min)
}
