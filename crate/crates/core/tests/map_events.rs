mod common;

use polynav::map::{apply_event, path_collides};
use polynav::random_map::{random_instance, RandomMapConfig};
use polynav::{MapEvent, MapEventKind, Path, Point2, Polygon, PolygonId};
use proptest::prelude::*;

fn event(kind: MapEventKind) -> MapEvent {
    MapEvent { time: 0.0, kind }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn disappear_then_appear_restores(seed in 0u64..10_000, pick in 0usize..30) {
        let m = random_instance(seed, &RandomMapConfig::default()).map;
        let p = m.polygons().nth(pick % m.len()).unwrap().clone();
        let gone = apply_event(&m, &event(MapEventKind::Disappear(p.id()))).unwrap();
        let back = apply_event(&gone, &event(MapEventKind::Appear(p))).unwrap();
        prop_assert!(back.same_geometry(&m));
        prop_assert_eq!(back.version(), m.version() + 2);
    }

    #[test]
    fn move_then_move_back_restores(seed in 0u64..10_000, pick in 0usize..30, dx in -0.04f64..0.04, dy in -0.04f64..0.04) {
        let m = random_instance(seed, &RandomMapConfig::default()).map;
        let id = m.polygons().nth(pick % m.len()).unwrap().id();
        let by = Point2::new(dx, dy);
        // a small move keeps the polygons apart, so it must be accepted
        let moved = apply_event(&m, &event(MapEventKind::Move { id, by })).unwrap();
        let back = apply_event(&moved, &event(MapEventKind::Move { id, by: -by })).unwrap();
        for (a, b) in back.polygons().zip(m.polygons()) {
            for (u, v) in a.vertices().iter().zip(b.vertices()) {
                prop_assert!(u.distance(*v) < 1e-12);
            }
        }
    }

    #[test]
    fn adding_a_disjoint_obstacle_keeps_path_clear(seed in 0u64..10_000, cx in 0.0f64..20.0, cy in 0.0f64..20.0, r in 0.1f64..1.0) {
        let inst = random_instance(seed, &RandomMapConfig::default());
        let Ok(out) = polynav::plan(&inst.map, inst.start, inst.target) else { return Ok(()) };
        prop_assert!(!path_collides(&inst.map, &out.path));
        let square = Polygon::new(PolygonId(999), vec![
            Point2::new(cx - r, cy - r), Point2::new(cx + r, cy - r),
            Point2::new(cx + r, cy + r), Point2::new(cx - r, cy + r),
        ]).unwrap();
        let b = square.bounds();
        let touches_path = out.path.waypoints().windows(2).any(|w| b.expanded(1e-6).intersects_segment(w[0], w[1]));
        prop_assume!(!touches_path);
        let Ok(bigger) = apply_event(&inst.map, &event(MapEventKind::Appear(square))) else { return Ok(()) };
        prop_assert!(!path_collides(&bigger, &out.path));
    }
}

#[test]
fn single_point_path_never_collides_outside() {
    let m = random_instance(1, &RandomMapConfig::default()).map;
    let p = Path::new(vec![Point2::new(-1.0, -1.0)]).unwrap();
    assert!(!path_collides(&m, &p));
}
