use polynav::baseline::{build_full_visibility_graph, default_resolution, grid_astar, oracle_shortest_path, rasterize};
use polynav::map::{apply_event, path_collides};
use polynav::minimal_construct::{VertexId, VertexOrigin};
use polynav::random_map::{random_instance, RandomMapConfig};
use polynav::{plan, MapEvent, MapEventKind, PlanError};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn matches_full_visibility_graph(seed in 0u64..1_000_000) {
        let inst = random_instance(seed, &RandomMapConfig::default());
        let mc = plan(&inst.map, inst.start, inst.target);
        let oracle = oracle_shortest_path(&inst.map, inst.start, inst.target);
        match (mc, oracle) {
            (Ok(out), Ok(best)) => prop_assert!((out.path.length() - best.length()).abs() <= 1e-6),
            (Err(PlanError::NoPath { .. }), Err(PlanError::NoPath { .. })) => {}
            (a, b) => prop_assert!(false, "lazy {:?} vs full {:?}", a.map(|o| o.path), b),
        }
    }

    #[test]
    fn paths_are_collision_free(seed in 0u64..1_000_000) {
        let inst = random_instance(seed, &RandomMapConfig::default());
        if let Ok(out) = plan(&inst.map, inst.start, inst.target) {
            prop_assert!(!path_collides(&inst.map, &out.path));
        }
    }

    #[test]
    fn work_is_bounded_by_the_full_graph(seed in 0u64..1_000_000) {
        let inst = random_instance(seed, &RandomMapConfig::default());
        let Ok(out) = plan(&inst.map, inst.start, inst.target) else { return Ok(()) };
        let full = build_full_visibility_graph(&inst.map, inst.start, inst.target);
        let c = out.counters();
        prop_assert!(c.intersection_tests <= c.queue_pops);
        prop_assert!(c.edges_added <= full.edge_count() as u64);
        prop_assert!(out.graph.vertices().len() <= full.vertex_count());
    }

    #[test]
    fn waypoints_are_endpoints_and_convex_corners(seed in 0u64..1_000_000) {
        let inst = random_instance(seed, &RandomMapConfig::default());
        let Ok(out) = plan(&inst.map, inst.start, inst.target) else { return Ok(()) };
        let w = out.path.waypoints();
        prop_assert_eq!(w[0], inst.start);
        prop_assert_eq!(*w.last().unwrap(), inst.target);
        for &q in &w[1..w.len() - 1] {
            let corner = inst.map.polygons().any(|p| p.convex_corners().any(|i| p.vertex(i) == q));
            prop_assert!(corner, "{} is not a convex corner", q);
        }
        for v in out.graph.vertices() {
            if let VertexOrigin::Corner { polygon, index } = v.origin {
                let p = inst.map.polygon(polygon).unwrap();
                prop_assert!(p.is_convex(index));
            }
        }
    }

    #[test]
    fn cost_increases_along_parent_chain(seed in 0u64..1_000_000) {
        let inst = random_instance(seed, &RandomMapConfig::default());
        let Ok(out) = plan(&inst.map, inst.start, inst.target) else { return Ok(()) };
        let g = &out.graph;
        let mut v = VertexId(1);
        prop_assert_eq!(g.vertex(v).origin, VertexOrigin::Target);
        while let Some(parent) = g.vertex(v).parent {
            prop_assert!(g.vertex(parent).g < g.vertex(v).g);
            v = parent;
        }
        prop_assert_eq!(g.vertex(v).origin, VertexOrigin::Start);
        prop_assert!((g.vertex(VertexId(1)).g - out.path.length()).abs() < 1e-9);
    }

    #[test]
    fn removing_an_obstacle_never_lengthens(seed in 0u64..1_000_000, pick in 0usize..30) {
        let inst = random_instance(seed, &RandomMapConfig::default());
        let Ok(before) = oracle_shortest_path(&inst.map, inst.start, inst.target) else { return Ok(()) };
        let id = inst.map.polygons().nth(pick % inst.map.len()).unwrap().id();
        let smaller = apply_event(&inst.map, &MapEvent { time: 0.0, kind: MapEventKind::Disappear(id) }).unwrap();
        let after = oracle_shortest_path(&smaller, inst.start, inst.target).unwrap();
        prop_assert!(after.length() <= before.length() + 1e-9);
        let lazy = plan(&smaller, inst.start, inst.target).unwrap();
        prop_assert!(lazy.path.length() <= before.length() + 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn grid_paths_are_no_shorter_than_optimal(seed in 0u64..1_000_000) {
        let inst = random_instance(seed, &RandomMapConfig::default());
        let Ok(best) = oracle_shortest_path(&inst.map, inst.start, inst.target) else { return Ok(()) };
        let grid = rasterize(&inst.map, default_resolution(&inst.map)).unwrap();
        // endpoints in conservatively blocked cells are a legitimate grid failure
        let Ok(g) = grid_astar(&grid, inst.start, inst.target) else { return Ok(()) };
        prop_assert!(g.path.length() >= best.length() - 1e-9);
        prop_assert!(!path_collides(&inst.map, &g.path));
    }
}
