use thiserror::Error;

use crate::geometry::{Point2, PolygonId};
use crate::map::Violation;
use crate::minimal_construct::SearchCounters;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("non-finite coordinate ({x}, {y})")]
    NonFinite { x: f64, y: f64 },
    #[error("zero-length segment at {0}")]
    DegenerateSegment(Point2),
    #[error("invalid bounds: min {min} max {max}")]
    InvalidBounds { min: Point2, max: Point2 },
    #[error("polygon {id} has {count} vertices, need at least 3")]
    TooFewVertices { id: PolygonId, count: usize },
    #[error("polygon {id} repeats vertex {index}")]
    RepeatedVertex { id: PolygonId, index: usize },
    #[error("polygon {0} has zero area")]
    ZeroArea(PolygonId),
    #[error("polygon {0} is self-intersecting")]
    SelfIntersecting(PolygonId),
    #[error("edge does not end at corner {index} of polygon {polygon}")]
    NotAnchored { polygon: PolygonId, index: usize },
    #[error("invalid inflation radius {0}")]
    InvalidRadius(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MapError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("map is invalid: {}", format_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("no polygon with id {0}")]
    UnknownPolygon(PolygonId),
    #[error("polygon id {0} already present")]
    DuplicatePolygon(PolygonId),
    #[error("non-finite displacement ({}, {})", .0.x, .0.y)]
    NonFiniteDisplacement(Point2),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PathError {
    #[error("a path needs at least one waypoint")]
    Empty,
    #[error("non-finite waypoint {0}")]
    NonFinite(Point2),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlanError {
    #[error("search failed: no path exists")]
    NoPath { counters: SearchCounters },
    #[error("invalid query: {0}")]
    InvalidQuery(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("grid resolution must be positive and finite, got {0}")]
    InvalidResolution(f64),
    #[error("start or goal cell is occupied")]
    StartOrGoalOccupied,
    #[error("start or goal lies outside the grid")]
    OutsideGrid,
    #[error("search failed: no path exists")]
    NoPath,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TrackingError {
    #[error("cannot track an empty path")]
    EmptyPath,
    #[error("invalid pursuit configuration: {0}")]
    InvalidConfig(&'static str),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("events are not sorted by time (event {0})")]
    Unsorted(usize),
    #[error("event {index} at t={time} is invalid: {source}")]
    BadEvent {
        index: usize,
        time: f64,
        #[source]
        source: MapError,
    },
    #[error("invalid simulation setting: {0}")]
    InvalidSetting(&'static str),
    #[error(transparent)]
    Tracking(#[from] TrackingError),
    #[error("initial map: {0}")]
    Map(#[from] MapError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CompareError {
    #[error("need at least two runs to compare")]
    TooFewRuns,
    #[error("runs are from different scenarios: {0:?} vs {1:?}")]
    MismatchedScenarios(String, String),
}
