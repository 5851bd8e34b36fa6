use polynav::map::path_collides;
use polynav::random_map::{random_instance, RandomMapConfig};
use polynav::simulation::{
    run_scenario, PlannerKind, ReplanRecord, ReplanTrigger, RunStatus, ScenarioScript, SimulationConfig,
    SimulationRun,
};
use polynav::simulation::PlanTiming;
use polynav::{Aabb, MapEvent, MapEventKind, Point2, Polygon, PolygonId, PolygonMap};
use proptest::prelude::*;

fn square(id: u32, x: f64, y: f64, side: f64) -> Polygon {
    Polygon::new(
        PolygonId(id),
        vec![Point2::new(x, y), Point2::new(x + side, y), Point2::new(x + side, y + side), Point2::new(x, y + side)],
    )
    .unwrap()
}

fn without_timing(run: &SimulationRun) -> Vec<ReplanRecord> {
    run.replans.iter().map(|r| ReplanRecord { timing: PlanTiming::default(), ..r.clone() }).collect()
}

fn corridor() -> (PolygonMap, ScenarioScript) {
    let bounds = Aabb { min: Point2::new(0.0, 0.0), max: Point2::new(30.0, 20.0) };
    let map = PolygonMap::new(bounds, vec![square(1, 6.0, 4.0, 3.0), square(2, 20.0, 12.0, 3.0)]).unwrap();
    let script = ScenarioScript::new(vec![
        MapEvent { time: 3.0, kind: MapEventKind::Appear(square(3, 13.0, 8.5, 3.0)) },
        MapEvent { time: 6.0, kind: MapEventKind::Disappear(PolygonId(1)) },
        MapEvent { time: 9.0, kind: MapEventKind::Move { id: PolygonId(2), by: Point2::new(0.0, -1.0) } },
    ])
    .unwrap();
    (map, script)
}

#[test]
fn runs_are_deterministic() {
    let (map, script) = corridor();
    let cfg = SimulationConfig::default();
    let (s, t) = (Point2::new(2.0, 10.0), Point2::new(28.0, 10.0));
    for planner in [PlannerKind::MinimalConstruct, PlannerKind::GridAStar, PlannerKind::VisibilityGraph] {
        let a = run_scenario("corridor", &map, &script, s, t, planner, &cfg).unwrap();
        let b = run_scenario("corridor", &map, &script, s, t, planner, &cfg).unwrap();
        assert_eq!(a.status, RunStatus::GoalReached);
        assert_eq!(without_timing(&a), without_timing(&b));
        assert_eq!(a.ticks, b.ticks);
        assert_eq!(a.paths, b.paths);
    }
}

#[test]
fn replans_only_when_needed() {
    let (map, script) = corridor();
    let cfg = SimulationConfig::default();
    let run = run_scenario("corridor", &map, &script, Point2::new(2.0, 10.0), Point2::new(28.0, 10.0),
        PlannerKind::MinimalConstruct, &cfg).unwrap();
    assert_eq!(run.replans[0].trigger, ReplanTrigger::Initial);
    assert!(run.plan_calls() <= 1 + script.events().len());
    for w in run.replans.windows(2) {
        let (prev, cur) = (&w[0], &w[1]);
        match cur.trigger {
            ReplanTrigger::MapChanged | ReplanTrigger::MapChangedAndCollision => {
                assert_ne!(prev.map_version, cur.map_version)
            }
            ReplanTrigger::PathCollision => {
                let map = run.map_at(cur.map_version).unwrap();
                let old = &run.paths[prev.path_index.unwrap()];
                assert!(path_collides(&map.inflated(run.clearance).unwrap(), old) || path_collides(map, old));
            }
            ReplanTrigger::Initial => panic!("second initial plan"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn static_random_maps_plan_once(seed in 0u64..100_000) {
        let cfg_map = RandomMapConfig { polygons: (3, 10), ..RandomMapConfig::default() };
        let inst = random_instance(seed, &cfg_map);
        let cfg = SimulationConfig::default();
        let Ok(run) = run_scenario("random", &inst.map, &ScenarioScript::default(), inst.start, inst.target,
            PlannerKind::MinimalConstruct, &cfg) else { return Ok(()) };
        prop_assert_eq!(run.plan_calls(), 1);
        if run.status == RunStatus::GoalReached {
            for tick in &run.ticks {
                prop_assert!(inst.map.point_blocked(tick.state.position).is_none());
            }
        }
    }
}
