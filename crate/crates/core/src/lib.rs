//! Shortest paths in dynamically changing polygonal maps.
//!
//! The centrepiece is [`minimal_construct::plan`], a lazy A* search that
//! builds only the part of the visibility graph it needs. Around it:
//!
//! - [`geometry`]: predicates (orientation, tangency, point-in-polygon, the
//!   midpoint segment/polygon test) and miter inflation.
//! - [`map`]: the obstacle set, change events and validation.
//! - [`baseline`]: the full visibility graph (the optimality oracle) and a
//!   rasterized 8-connected grid A*.
//! - [`tracking`]: a pure-pursuit tracker over a unicycle model.
//! - [`simulation`]: the replanning loop that ties it all together.
//! - [`random_map`]: seeded generator for property tests and benchmarks.

pub mod baseline;
pub mod error;
pub mod geometry;
pub mod map;
pub mod minimal_construct;
pub mod path;
pub mod random_map;
pub mod simulation;
pub mod tracking;

pub use error::{GeometryError, GridError, MapError, PathError, PlanError};
pub use geometry::{Aabb, Point2, Polygon, PolygonId, Segment2};
pub use map::{MapEvent, MapEventKind, PolygonMap};
pub use minimal_construct::{plan, PlanOutcome, SearchCounters, SearchGraph};
pub use path::Path;
