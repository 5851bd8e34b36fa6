//! Pure-pursuit path tracking on a unicycle.

use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::TrackingError;
use crate::geometry::Point2;
use crate::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobotState {
    pub position: Point2,
    /// Radians in `(-pi, pi]`.
    pub heading: f64,
    pub speed: f64,
}

impl RobotState {
    pub fn new(position: Point2, heading: f64, speed: f64) -> Self {
        Self { position, heading: normalize_angle(heading), speed }
    }
}

/// Wraps an angle into `(-pi, pi]`.
pub fn normalize_angle(a: f64) -> f64 {
    let mut r = a.rem_euclid(2.0 * PI);
    if r > PI {
        r -= 2.0 * PI;
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PursuitConfig {
    pub lookahead_base: f64,
    /// Seconds: lookahead grows by this much per unit of speed.
    pub lookahead_speed_gain: f64,
    pub lookahead_min: f64,
    pub lookahead_max: f64,
    pub cruise_speed: f64,
    /// Speed is divided by `1 + gain * |curvature|`.
    pub curvature_slowdown_gain: f64,
    pub goal_tolerance: f64,
    /// Radians per second.
    pub max_turn_rate: f64,
    /// Integration step, seconds.
    pub dt: f64,
}

impl Default for PursuitConfig {
    fn default() -> Self {
        Self {
            lookahead_base: 1.0,
            lookahead_speed_gain: 0.5,
            lookahead_min: 0.5,
            lookahead_max: 3.0,
            cruise_speed: 1.0,
            curvature_slowdown_gain: 2.0,
            goal_tolerance: 0.25,
            max_turn_rate: 2.0,
            dt: 0.05,
        }
    }
}

impl PursuitConfig {
    pub fn validate(&self) -> Result<(), TrackingError> {
        let finite = [
            self.lookahead_base,
            self.lookahead_speed_gain,
            self.lookahead_min,
            self.lookahead_max,
            self.cruise_speed,
            self.curvature_slowdown_gain,
            self.goal_tolerance,
            self.max_turn_rate,
            self.dt,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(TrackingError::InvalidConfig("values must be finite"));
        }
        if !(self.lookahead_min > 0.0 && self.lookahead_min <= self.lookahead_max) {
            return Err(TrackingError::InvalidConfig("need 0 < lookahead_min <= lookahead_max"));
        }
        if self.cruise_speed <= 0.0 {
            return Err(TrackingError::InvalidConfig("cruise_speed must be positive"));
        }
        if self.goal_tolerance <= 0.0 {
            return Err(TrackingError::InvalidConfig("goal_tolerance must be positive"));
        }
        if self.max_turn_rate <= 0.0 || self.dt <= 0.0 {
            return Err(TrackingError::InvalidConfig("max_turn_rate and dt must be positive"));
        }
        if self.curvature_slowdown_gain < 0.0 || self.lookahead_speed_gain < 0.0 {
            return Err(TrackingError::InvalidConfig("gains must be non-negative"));
        }
        Ok(())
    }

    /// `base + gain * speed`, clamped to `[min, max]`.
    pub fn lookahead(&self, speed: f64) -> f64 {
        (self.lookahead_base + self.lookahead_speed_gain * speed.abs())
            .clamp(self.lookahead_min, self.lookahead_max)
    }
}

/// Velocity command for one step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Command {
    pub turn_rate: f64,
    pub speed: f64,
}

/// First point ahead on `path` at distance `lookahead` from the robot.
///
/// Only the part of the path at arc length `>= progress` is considered. If
/// the circle does not cross that part, the point `lookahead` further along
/// from `progress` is used, clamped to the final waypoint. Returns the point
/// and its arc length.
pub fn lookahead_point(
    path: &Path,
    position: Point2,
    progress: f64,
    lookahead: f64,
) -> (Point2, f64) {
    let pts = path.waypoints();
    let arcs = path.arc_lengths();
    let progress = progress.clamp(0.0, path.length());
    for i in path.segment_at(progress)..path.segments() {
        let (a, b) = (pts[i], pts[i + 1]);
        let len = arcs[i + 1] - arcs[i];
        if len <= 0.0 {
            continue;
        }
        let d = (b - a) * (1.0 / len);
        let f = a - position;
        // |f + u d|^2 = L^2 with unit d, u in arc units along the segment
        let half_b = f.dot(d);
        let c = f.dot(f) - lookahead * lookahead;
        let disc = half_b * half_b - c;
        if disc < 0.0 {
            continue;
        }
        let root = disc.sqrt();
        let lo_u = (progress - arcs[i]).max(0.0);
        for u in [-half_b - root, -half_b + root] {
            if u >= lo_u && u <= len {
                return (a + d * u, arcs[i] + u);
            }
        }
    }
    let s = (progress + lookahead).min(path.length());
    (path.point_at(s), s)
}

/// Pure-pursuit steering toward `goal`.
///
/// Curvature is `2 sin(alpha) / L` for bearing `alpha` and distance `L`;
/// turn rate is curvature times the current speed, clamped. A goal behind the
/// robot (`|alpha| > pi/2`) saturates the turn rate toward it. The commanded
/// speed drops with curvature.
pub fn pursuit_command(state: &RobotState, goal: Point2, cfg: &PursuitConfig) -> Command {
    let delta = goal - state.position;
    let dist = delta.norm();
    if dist == 0.0 {
        return Command { turn_rate: 0.0, speed: 0.0 };
    }
    let alpha = normalize_angle(delta.y.atan2(delta.x) - state.heading);
    let (curvature, turn_rate) = if alpha.abs() > FRAC_PI_2 {
        let k = 2.0 / dist;
        let sign = if alpha >= 0.0 { 1.0 } else { -1.0 };
        (sign * k, sign * cfg.max_turn_rate)
    } else {
        let k = 2.0 * alpha.sin() / dist;
        (k, (k * state.speed).clamp(-cfg.max_turn_rate, cfg.max_turn_rate))
    };
    let speed = cfg.cruise_speed / (1.0 + cfg.curvature_slowdown_gain * curvature.abs());
    Command { turn_rate, speed }
}

/// Unicycle integration: rotate first, then advance along the new heading.
pub fn step_kinematics(state: &RobotState, cmd: Command, dt: f64) -> RobotState {
    let heading = normalize_angle(state.heading + cmd.turn_rate * dt);
    let position = state.position + Point2::new(heading.cos(), heading.sin()) * (cmd.speed * dt);
    RobotState { position, heading, speed: cmd.speed }
}

/// Follows one path, remembering how far along it the robot has got so the
/// lookahead never moves backwards.
#[derive(Debug, Clone)]
pub struct PathTracker {
    path: Path,
    progress: f64,
    lookahead_arc: f64,
}

impl PathTracker {
    pub fn new(path: Path) -> Result<Self, TrackingError> {
        if path.waypoints().is_empty() {
            return Err(TrackingError::EmptyPath);
        }
        Ok(Self { path, progress: 0.0, lookahead_arc: 0.0 })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Arc length of the robot's projection on the path.
    pub fn progress(&self) -> f64 {
        self.progress
    }

    /// Arc length of the last lookahead point.
    pub fn lookahead_arc(&self) -> f64 {
        self.lookahead_arc
    }

    /// Advances the projection (searching only a window ahead so a path
    /// that doubles back is not skipped) and returns the lookahead point.
    pub fn update(&mut self, state: &RobotState, cfg: &PursuitConfig) -> Point2 {
        let window = self.progress + 2.0 * cfg.lookahead_max + state.speed.abs() * cfg.dt;
        let (s, _) = self.path.project_within(state.position, self.progress, window);
        self.progress = self.progress.max(s);
        let (p, arc) =
            lookahead_point(&self.path, state.position, self.progress, cfg.lookahead(state.speed));
        self.lookahead_arc = self.lookahead_arc.max(arc);
        p
    }

    /// The untraversed part of the path.
    pub fn remaining(&self) -> Path {
        self.path.suffix_from(self.progress)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn straight(len: f64) -> Path {
        Path::new(vec![Point2::new(0.0, 0.0), Point2::new(len, 0.0)]).unwrap()
    }

    #[test]
    fn lookahead_on_straight_path() {
        let (p, s) = lookahead_point(&straight(10.0), Point2::new(0.0, 0.0), 0.0, 1.0);
        assert!((p.x - 1.0).abs() < 1e-12 && p.y.abs() < 1e-12);
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lookahead_clamps_to_end() {
        let (p, _) = lookahead_point(&straight(10.0), Point2::new(9.5, 0.0), 9.5, 1.0);
        assert_eq!(p, Point2::new(10.0, 0.0));
    }

    #[test]
    fn lookahead_with_lateral_offset() {
        let (p, _) = lookahead_point(&straight(10.0), Point2::new(3.0, 0.5), 3.0, 1.0);
        assert!((p.x - (3.0 + 0.75f64.sqrt())).abs() < 1e-12);
        assert!(p.y.abs() < 1e-12);
    }

    #[test]
    fn command_examples() {
        let cfg = PursuitConfig::default();
        let ahead = pursuit_command(&RobotState::new(Point2::new(0.0, 0.0), 0.0, 1.0), Point2::new(2.0, 0.0), &cfg);
        assert_eq!(ahead.turn_rate, 0.0);
        assert_eq!(ahead.speed, cfg.cruise_speed);

        let side = pursuit_command(&RobotState::new(Point2::new(0.0, 0.0), 0.0, 1.0), Point2::new(0.0, 2.0), &cfg);
        assert!((side.turn_rate - 1.0).abs() < 1e-12);
        assert!((side.speed - cfg.cruise_speed / 3.0).abs() < 1e-12);

        let behind = pursuit_command(&RobotState::new(Point2::new(0.0, 0.0), 0.0, 1.0), Point2::new(-2.0, 0.0), &cfg);
        assert_eq!(behind.turn_rate.abs(), cfg.max_turn_rate);

        let here = pursuit_command(&RobotState::new(Point2::new(1.0, 1.0), 0.0, 1.0), Point2::new(1.0, 1.0), &cfg);
        assert_eq!(here, Command { turn_rate: 0.0, speed: 0.0 });
    }

    #[test]
    fn kinematics_examples() {
        let s = RobotState::new(Point2::new(0.0, 0.0), 0.0, 0.0);
        let n = step_kinematics(&s, Command { turn_rate: 0.0, speed: 2.0 }, 0.5);
        assert_eq!(n.position, Point2::new(1.0, 0.0));
        assert_eq!(n.speed, 2.0);

        let dt = 0.05;
        let r = step_kinematics(&s, Command { turn_rate: FRAC_PI_2 / dt, speed: 0.0 }, dt);
        assert!((r.heading - FRAC_PI_2).abs() < 1e-12);

        let a = step_kinematics(&s, Command { turn_rate: 1.3, speed: 1.0 }, dt);
        let b = step_kinematics(&a, Command { turn_rate: -1.3, speed: 1.0 }, dt);
        assert!((b.heading - s.heading).abs() < 1e-12);
    }

    #[test]
    fn angle_normalization_range() {
        assert_eq!(normalize_angle(PI), PI);
        assert_eq!(normalize_angle(-PI), PI);
        assert!((normalize_angle(3.0 * PI + 0.1) - (-PI + 0.1)).abs() < 1e-12);
    }

    #[test]
    fn config_validation() {
        assert!(PursuitConfig::default().validate().is_ok());
        let bad = PursuitConfig { lookahead_min: 4.0, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = PursuitConfig { cruise_speed: 0.0, ..Default::default() };
        assert!(bad.validate().is_err());
    }
}
