//! The comparison planners: the full visibility graph (also the optimality
//! oracle for the lazy search) and A* on a rasterized occupancy grid.

mod grid;
mod visibility;

pub use grid::{default_resolution, grid_astar, rasterize, GridMap, GridPlan, DEFAULT_CELLS_PER_EXTENT};
pub use visibility::{build_full_visibility_graph, oracle_shortest_path, VisibilityGraph};
