//! Seeded random maps of disjoint star-shaped polygons.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{Aabb, Point2, Polygon, PolygonId};
use crate::map::PolygonMap;

#[derive(Debug, Clone, PartialEq)]
pub struct RandomMapConfig {
    pub bounds: Aabb,
    pub polygons: (usize, usize),
    pub vertices: (usize, usize),
    /// Outer radius range of each star polygon.
    pub radius: (f64, f64),
    /// Minimum gap between the bounding circles of two polygons.
    pub gap: f64,
}

impl Default for RandomMapConfig {
    fn default() -> Self {
        Self {
            bounds: Aabb { min: Point2::new(0.0, 0.0), max: Point2::new(20.0, 20.0) },
            polygons: (5, 30),
            vertices: (3, 10),
            radius: (0.4, 1.8),
            gap: 0.05,
        }
    }
}

/// A random map with a random start and target outside every obstacle.
#[derive(Debug, Clone)]
pub struct RandomInstance {
    pub seed: u64,
    pub map: PolygonMap,
    pub start: Point2,
    pub target: Point2,
}

/// Builds an instance deterministically from `seed`.
///
/// Polygons are star-shaped around their centre (sorted angles, random
/// radii), so they are simple and often non-convex. Bounding circles are
/// kept apart, which makes the polygons pairwise disjoint. Placement gives up
/// on a polygon after a bounded number of attempts, so dense requests may
/// come back with fewer polygons than asked for.
pub fn random_instance(seed: u64, cfg: &RandomMapConfig) -> RandomInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let wanted = rng.gen_range(cfg.polygons.0..=cfg.polygons.1);
    let b = cfg.bounds;
    let mut circles: Vec<(Point2, f64)> = Vec::new();
    let mut polygons = Vec::new();
    let mut attempts = 0;
    while polygons.len() < wanted && attempts < 2000 {
        attempts += 1;
        let r = rng.gen_range(cfg.radius.0..=cfg.radius.1);
        if b.width() <= 2.0 * r || b.height() <= 2.0 * r {
            continue;
        }
        let c = Point2::new(
            rng.gen_range(b.min.x + r..b.max.x - r),
            rng.gen_range(b.min.y + r..b.max.y - r),
        );
        if circles.iter().any(|&(o, ro)| o.distance(c) < r + ro + cfg.gap) {
            continue;
        }
        let n = rng.gen_range(cfg.vertices.0..=cfg.vertices.1);
        let mut angles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
        angles.sort_by(f64::total_cmp);
        let vertices: Vec<Point2> = angles
            .iter()
            .map(|&a| {
                let rr = r * rng.gen_range(0.35..=1.0);
                c + Point2::new(a.cos(), a.sin()) * rr
            })
            .collect();
        let id = PolygonId(polygons.len() as u32 + 1);
        if let Ok(p) = Polygon::new(id, vertices) {
            circles.push((c, r));
            polygons.push(p);
        }
    }
    let map = PolygonMap::new(b, polygons).expect("disjoint by construction");
    let free_point = |rng: &mut ChaCha8Rng| loop {
        let p = Point2::new(rng.gen_range(b.min.x..=b.max.x), rng.gen_range(b.min.y..=b.max.y));
        if map.point_blocked(p).is_none() {
            return p;
        }
    };
    let start = free_point(&mut rng);
    let target = free_point(&mut rng);
    RandomInstance { seed, map, start, target }
}
