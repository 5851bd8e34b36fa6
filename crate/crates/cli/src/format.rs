//! TOML map and scenario files.
//!
//! A map file:
//!
//! ```toml
//! robot_radius = 0.3
//! inflated = false
//!
//! [bounds]
//! min = [0.0, 0.0]
//! max = [30.0, 20.0]
//!
//! [[polygon]]
//! id = 1
//! vertices = [[4.0, 4.0], [6.0, 4.0], [6.0, 6.0], [4.0, 6.0]]
//! ```
//!
//! Polygons are grown by `robot_radius` at load unless `inflated` is set.
//! Bounds grow by the same amount. A scenario file points at a map (relative
//! to the scenario file) and adds a query, settings and timed events; see
//! `fixtures/README.md`.

use std::fs;
use std::path::{Path as FsPath, PathBuf};

use polynav::geometry::inflate_polygon;
use polynav::simulation::{PlannerKind, ScenarioScript, SimulationConfig};
use polynav::{Aabb, GeometryError, MapError, MapEvent, MapEventKind, Point2, Polygon, PolygonId, PolygonMap};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}:{line}:{column}: {message}", path.display())]
    Parse { path: PathBuf, line: usize, column: usize, message: String },
    #[error("{}: {source}", path.display())]
    Geometry { path: PathBuf, source: GeometryError },
    #[error("{}: {source}", path.display())]
    Map { path: PathBuf, source: MapError },
    #[error("{}: {message}", path.display())]
    Invalid { path: PathBuf, message: String },
}

impl FormatError {
    /// True for errors that come from well-formed files describing invalid
    /// geometry, as opposed to unreadable or malformed files.
    pub fn is_validation(&self) -> bool {
        matches!(self, FormatError::Geometry { .. } | FormatError::Map { .. } | FormatError::Invalid { .. })
    }
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn parse_toml<T: for<'de> Deserialize<'de>>(text: &str, path: &FsPath) -> Result<T, FormatError> {
    toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((0, 0), |s| line_column(text, s.start));
        FormatError::Parse { path: path.to_path_buf(), line, column, message: e.message().to_string() }
    })
}

fn read(path: &FsPath) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|source| FormatError::Io { path: path.to_path_buf(), source })
}

fn point(p: [f64; 2]) -> Point2 {
    Point2::new(p[0], p[1])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsSpec {
    pub min: [f64; 2],
    pub max: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolygonSpec {
    pub id: u32,
    pub vertices: Vec<[f64; 2]>,
}

impl PolygonSpec {
    fn to_polygon(&self) -> Result<Polygon, GeometryError> {
        let vertices = self
            .vertices
            .iter()
            .map(|&[x, y]| Point2::try_new(x, y))
            .collect::<Result<Vec<_>, _>>()?;
        Polygon::new(PolygonId(self.id), vertices)
    }

    fn from_polygon(p: &Polygon) -> Self {
        Self { id: p.id().0, vertices: p.vertices().iter().map(|v| [v.x, v.y]).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    #[serde(default)]
    pub robot_radius: f64,
    /// Set when the stored geometry already includes the robot radius.
    #[serde(default)]
    pub inflated: bool,
    pub bounds: BoundsSpec,
    #[serde(default, rename = "polygon")]
    pub polygons: Vec<PolygonSpec>,
}

impl MapFile {
    pub fn parse(text: &str, path: &FsPath) -> Result<Self, FormatError> {
        parse_toml(text, path)
    }

    /// Builds the validated, inflated map.
    pub fn to_map(&self, path: &FsPath) -> Result<PolygonMap, FormatError> {
        let geom = |source| FormatError::Geometry { path: path.to_path_buf(), source };
        let map_err = |source| FormatError::Map { path: path.to_path_buf(), source };
        if !(self.robot_radius.is_finite() && self.robot_radius >= 0.0) {
            return Err(geom(GeometryError::InvalidRadius(self.robot_radius)));
        }
        let bounds = Aabb::new(point(self.bounds.min), point(self.bounds.max)).map_err(geom)?;
        let polygons = self.polygons.iter().map(PolygonSpec::to_polygon).collect::<Result<Vec<_>, _>>().map_err(geom)?;
        let map = PolygonMap::new(bounds, polygons).map_err(map_err)?;
        if self.inflated || self.robot_radius == 0.0 {
            Ok(map)
        } else {
            map.inflated(self.robot_radius).map_err(map_err)
        }
    }

    /// Stores an already inflated map so that loading it again does not
    /// grow it a second time.
    pub fn from_inflated_map(map: &PolygonMap, robot_radius: f64) -> Self {
        let b = map.bounds();
        Self {
            robot_radius,
            inflated: true,
            bounds: BoundsSpec { min: [b.min.x, b.min.y], max: [b.max.x, b.max.y] },
            polygons: map.polygons().map(PolygonSpec::from_polygon).collect(),
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("plain data serializes")
    }
}

/// A map loaded from disk together with the radius it was grown by.
#[derive(Debug, Clone)]
pub struct LoadedMap {
    pub map: PolygonMap,
    pub robot_radius: f64,
}

pub fn load_map(path: &FsPath) -> Result<LoadedMap, FormatError> {
    let text = read(path)?;
    let file = MapFile::parse(&text, path)?;
    Ok(LoadedMap { map: file.to_map(path)?, robot_radius: file.robot_radius })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum EventSpec {
    Appear { time: f64, id: u32, vertices: Vec<[f64; 2]> },
    Disappear { time: f64, id: u32 },
    Move { time: f64, id: u32, by: [f64; 2] },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: Option<String>,
    /// Map file, relative to the scenario file.
    pub map: PathBuf,
    pub start: [f64; 2],
    pub target: [f64; 2],
    /// `mc`, `grid` or `oracle`.
    pub planner: Option<String>,
    #[serde(default)]
    pub simulation: SimulationConfig,
    #[serde(default, rename = "event")]
    pub events: Vec<EventSpec>,
}

pub fn parse_planner(name: &str) -> Option<PlannerKind> {
    match name {
        "mc" => Some(PlannerKind::MinimalConstruct),
        "grid" => Some(PlannerKind::GridAStar),
        "oracle" => Some(PlannerKind::VisibilityGraph),
        _ => None,
    }
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub map_path: PathBuf,
    pub map: PolygonMap,
    pub robot_radius: f64,
    pub start: Point2,
    pub target: Point2,
    pub planner: Option<PlannerKind>,
    pub config: SimulationConfig,
    pub script: ScenarioScript,
}

pub fn load_scenario(path: &FsPath) -> Result<Scenario, FormatError> {
    let text = read(path)?;
    let file: ScenarioFile = parse_toml(&text, path)?;
    let invalid = |message: String| FormatError::Invalid { path: path.to_path_buf(), message };
    let map_path = path.parent().unwrap_or(FsPath::new(".")).join(&file.map);
    let loaded = load_map(&map_path)?;
    let planner = match &file.planner {
        Some(p) => Some(parse_planner(p).ok_or_else(|| invalid(format!("unknown planner `{p}`")))?),
        None => None,
    };
    let mut events = Vec::with_capacity(file.events.len());
    for e in &file.events {
        let (time, kind) = match e {
            EventSpec::Appear { time, id, vertices } => {
                let raw = PolygonSpec { id: *id, vertices: vertices.clone() }
                    .to_polygon()
                    .map_err(|source| FormatError::Geometry { path: path.to_path_buf(), source })?;
                let grown = inflate_polygon(&raw, loaded.robot_radius)
                    .map_err(|source| FormatError::Geometry { path: path.to_path_buf(), source })?;
                (*time, MapEventKind::Appear(grown))
            }
            EventSpec::Disappear { time, id } => (*time, MapEventKind::Disappear(PolygonId(*id))),
            EventSpec::Move { time, id, by } => (*time, MapEventKind::Move { id: PolygonId(*id), by: point(*by) }),
        };
        events.push(MapEvent { time, kind });
    }
    let script = ScenarioScript::new(events).map_err(|e| invalid(e.to_string()))?;
    script.dry_run(&loaded.map).map_err(|e| invalid(e.to_string()))?;
    let start = Point2::try_new(file.start[0], file.start[1]).map_err(|e| invalid(e.to_string()))?;
    let target = Point2::try_new(file.target[0], file.target[1]).map_err(|e| invalid(e.to_string()))?;
    let name = file
        .name
        .clone()
        .or_else(|| path.file_stem().map(|s| s.to_string_lossy().trim_end_matches(".scenario").to_string()))
        .unwrap_or_else(|| "scenario".to_string());
    Ok(Scenario {
        name,
        map_path,
        map: loaded.map,
        robot_radius: loaded.robot_radius,
        start,
        target,
        planner,
        config: file.simulation,
        script,
    })
}
