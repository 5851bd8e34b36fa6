use std::collections::BinaryHeap;

use crate::error::GridError;
use crate::geometry::{orientation, point_in_polygon, Aabb, Orientation, Point2};
use crate::map::PolygonMap;
use crate::path::Path;

/// Cells along the longer side of the map when no resolution is given.
pub const DEFAULT_CELLS_PER_EXTENT: f64 = 200.0;

/// Square-celled occupancy grid covering the map bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct GridMap {
    pub resolution: f64,
    pub width: usize,
    pub height: usize,
    pub origin: Point2,
    occupancy: Vec<bool>,
}

impl GridMap {
    pub fn is_occupied(&self, ix: usize, iy: usize) -> bool {
        self.occupancy[iy * self.width + ix]
    }

    pub fn occupied_count(&self) -> usize {
        self.occupancy.iter().filter(|&&o| o).count()
    }

    pub fn cell_count(&self) -> usize {
        self.occupancy.len()
    }

    pub fn cell_rect(&self, ix: usize, iy: usize) -> Aabb {
        let min = Point2::new(
            self.origin.x + ix as f64 * self.resolution,
            self.origin.y + iy as f64 * self.resolution,
        );
        Aabb { min, max: Point2::new(min.x + self.resolution, min.y + self.resolution) }
    }

    pub fn cell_center(&self, ix: usize, iy: usize) -> Point2 {
        Point2::new(
            self.origin.x + (ix as f64 + 0.5) * self.resolution,
            self.origin.y + (iy as f64 + 0.5) * self.resolution,
        )
    }

    /// Cell containing `p`; points on the far edge of the grid map to the
    /// last cell.
    pub fn cell_of(&self, p: Point2) -> Option<(usize, usize)> {
        let fx = (p.x - self.origin.x) / self.resolution;
        let fy = (p.y - self.origin.y) / self.resolution;
        if !(fx >= 0.0 && fy >= 0.0) {
            return None;
        }
        let (ix, iy) = (fx.floor() as usize, fy.floor() as usize);
        let ix = if ix == self.width && fx <= self.width as f64 { ix - 1 } else { ix };
        let iy = if iy == self.height && fy <= self.height as f64 { iy - 1 } else { iy };
        (ix < self.width && iy < self.height).then_some((ix, iy))
    }
}

/// Resolution giving [`DEFAULT_CELLS_PER_EXTENT`] cells along the longer side.
pub fn default_resolution(map: &PolygonMap) -> f64 {
    map.bounds().extent().max(f64::MIN_POSITIVE) / DEFAULT_CELLS_PER_EXTENT
}

fn cells_along(length: f64, resolution: f64) -> usize {
    // tolerate rounding in length / resolution (e.g. 20 / 0.1)
    (((length / resolution) - 1e-9).ceil() as usize).max(1)
}

/// Conservative rasterization: a cell is occupied if its closed rectangle
/// touches an obstacle edge or its centre lies inside an obstacle.
pub fn rasterize(map: &PolygonMap, resolution: f64) -> Result<GridMap, GridError> {
    if !(resolution.is_finite() && resolution > 0.0) {
        return Err(GridError::InvalidResolution(resolution));
    }
    let b = map.bounds();
    let width = cells_along(b.width(), resolution);
    let height = cells_along(b.height(), resolution);
    let mut grid = GridMap {
        resolution,
        width,
        height,
        origin: b.min,
        occupancy: vec![false; width * height],
    };
    let clamp_index = |v: f64, n: usize| -> usize { (v.floor().max(0.0) as usize).min(n - 1) };
    for poly in map.polygons() {
        let pb = poly.bounds();
        let x0 = clamp_index((pb.min.x - b.min.x) / resolution - 1.0, width);
        let x1 = clamp_index((pb.max.x - b.min.x) / resolution + 1.0, width);
        let y0 = clamp_index((pb.min.y - b.min.y) / resolution - 1.0, height);
        let y1 = clamp_index((pb.max.y - b.min.y) / resolution + 1.0, height);
        for iy in y0..=y1 {
            for ix in x0..=x1 {
                let idx = iy * width + ix;
                if grid.occupancy[idx] {
                    continue;
                }
                let rect = grid.cell_rect(ix, iy);
                if !rect.intersects(pb) {
                    continue;
                }
                let hit = poly.edges().any(|(u, v)| rect.intersects_segment(u, v))
                    || point_in_polygon(rect.center(), poly);
                grid.occupancy[idx] = hit;
            }
        }
    }
    Ok(grid)
}

/// Result of a grid search.
#[derive(Debug, Clone, PartialEq)]
pub struct GridPlan {
    pub path: Path,
    /// Cells taken off the open list.
    pub expanded: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Node {
    f: f64,
    g: f64,
    seq: u64,
    cell: usize,
}

impl Eq for Node {}

impl Ord for Node {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        other
            .f
            .total_cmp(&self.f)
            .then_with(|| self.g.total_cmp(&other.g))
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// 8-connected A* with the octile heuristic. Diagonal moves are allowed
/// only when both orthogonal cells they pass between are free.
///
/// The path starts at `s`, runs through cell centres, ends at `t`, and has
/// collinear runs merged.
pub fn grid_astar(grid: &GridMap, s: Point2, t: Point2) -> Result<GridPlan, GridError> {
    let (sx, sy) = grid.cell_of(s).ok_or(GridError::OutsideGrid)?;
    let (tx, ty) = grid.cell_of(t).ok_or(GridError::OutsideGrid)?;
    if grid.is_occupied(sx, sy) || grid.is_occupied(tx, ty) {
        return Err(GridError::StartOrGoalOccupied);
    }
    let (w, h) = (grid.width, grid.height);
    let res = grid.resolution;
    let diag = res * std::f64::consts::SQRT_2;
    let octile = |ix: usize, iy: usize| {
        let dx = ix.abs_diff(tx) as f64;
        let dy = iy.abs_diff(ty) as f64;
        res * (dx.max(dy) + (std::f64::consts::SQRT_2 - 1.0) * dx.min(dy))
    };
    let start = sy * w + sx;
    let goal = ty * w + tx;
    let mut g = vec![f64::INFINITY; w * h];
    let mut parent = vec![usize::MAX; w * h];
    let mut closed = vec![false; w * h];
    let mut open = BinaryHeap::new();
    let mut seq = 0u64;
    let mut expanded = 0u64;
    g[start] = 0.0;
    open.push(Node { f: octile(sx, sy), g: 0.0, seq, cell: start });
    while let Some(node) = open.pop() {
        if closed[node.cell] {
            continue;
        }
        closed[node.cell] = true;
        expanded += 1;
        if node.cell == goal {
            break;
        }
        let (cx, cy) = ((node.cell % w) as isize, (node.cell / w) as isize);
        for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)] {
            let (nx, ny) = (cx + dx, cy + dy);
            if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
                continue;
            }
            let (nx, ny) = (nx as usize, ny as usize);
            if grid.is_occupied(nx, ny) {
                continue;
            }
            let step = if dx != 0 && dy != 0 {
                if grid.is_occupied(nx, cy as usize) || grid.is_occupied(cx as usize, ny) {
                    continue;
                }
                diag
            } else {
                res
            };
            let n = ny * w + nx;
            if closed[n] {
                continue;
            }
            let ng = node.g + step;
            if ng < g[n] {
                g[n] = ng;
                parent[n] = node.cell;
                seq += 1;
                open.push(Node { f: ng + octile(nx, ny), g: ng, seq, cell: n });
            }
        }
    }
    if !closed[goal] {
        return Err(GridError::NoPath);
    }
    let mut cells = vec![goal];
    while let Some(&c) = cells.last() {
        if c == start {
            break;
        }
        cells.push(parent[c]);
    }
    cells.reverse();
    let mut points = Vec::with_capacity(cells.len() + 2);
    points.push(s);
    points.extend(cells.iter().map(|&c| grid.cell_center(c % w, c / w)));
    points.push(t);
    let path = Path::new(merge_collinear(points)).expect("finite");
    Ok(GridPlan { path, expanded })
}

/// Drops repeated points and interior points that continue straight on.
fn merge_collinear(points: Vec<Point2>) -> Vec<Point2> {
    let mut out: Vec<Point2> = Vec::with_capacity(points.len());
    for p in points {
        if out.last() == Some(&p) {
            continue;
        }
        while out.len() >= 2 {
            let (a, b) = (out[out.len() - 2], out[out.len() - 1]);
            if orientation(a, b, p) == Orientation::Collinear && (b - a).dot(p - b) > 0.0 {
                out.pop();
            } else {
                break;
            }
        }
        out.push(p);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Polygon, PolygonId};

    fn bounds(w: f64, h: f64) -> Aabb {
        Aabb::new(Point2::new(0.0, 0.0), Point2::new(w, h)).unwrap()
    }

    fn square(id: u32, x: f64, y: f64, side: f64) -> Polygon {
        Polygon::new(
            PolygonId(id),
            vec![
                Point2::new(x, y),
                Point2::new(x + side, y),
                Point2::new(x + side, y + side),
                Point2::new(x, y + side),
            ],
        )
        .unwrap()
    }

    #[test]
    fn empty_map_is_free() {
        let map = PolygonMap::new(bounds(10.0, 10.0), vec![]).unwrap();
        let g = rasterize(&map, 1.0).unwrap();
        assert_eq!(g.cell_count(), 100);
        assert_eq!(g.occupied_count(), 0);
    }

    #[test]
    fn square_rasterizes_conservatively() {
        // square over cells 2..=3 in both axes; closed-rectangle contact also
        // takes the ring of cells sharing its boundary: indices 1..=4
        let map = PolygonMap::new(bounds(8.0, 8.0), vec![square(1, 2.0, 2.0, 2.0)]).unwrap();
        let g = rasterize(&map, 1.0).unwrap();
        assert_eq!(g.occupied_count(), 16);
        for iy in 0..8 {
            for ix in 0..8 {
                let expect = (1..=4).contains(&ix) && (1..=4).contains(&iy);
                assert_eq!(g.is_occupied(ix, iy), expect, "cell {ix},{iy}");
            }
        }
    }

    #[test]
    fn halving_resolution_quadruples_cells() {
        let map = PolygonMap::new(bounds(20.0, 20.0), vec![]).unwrap();
        let a = rasterize(&map, 0.2).unwrap();
        let b = rasterize(&map, 0.1).unwrap();
        assert_eq!(b.cell_count(), 4 * a.cell_count());
        assert_eq!(b.width, 200);
        assert!(rasterize(&map, 0.0).is_err());
    }

    #[test]
    fn straight_corridor_merges_to_one_segment() {
        let map = PolygonMap::new(bounds(10.0, 3.0), vec![]).unwrap();
        let g = rasterize(&map, 1.0).unwrap();
        let plan = grid_astar(&g, Point2::new(0.5, 1.5), Point2::new(9.5, 1.5)).unwrap();
        assert_eq!(plan.path.waypoints().len(), 2);
        assert!((plan.path.length() - 9.0).abs() < 1e-12);
    }

    #[test]
    fn diagonal_run_has_octile_length() {
        let map = PolygonMap::new(bounds(10.0, 10.0), vec![]).unwrap();
        let g = rasterize(&map, 0.5).unwrap();
        let k = 6.0;
        let plan = grid_astar(&g, Point2::new(0.25, 0.25), Point2::new(0.25 + k * 0.5, 0.25 + k * 0.5)).unwrap();
        assert!((plan.path.length() - k * 0.5 * std::f64::consts::SQRT_2).abs() < 1e-9);
        assert_eq!(plan.path.segments(), 1);
    }

    #[test]
    fn no_corner_cutting() {
        // two blocks meeting diagonally leave only a corner-to-corner gap
        let map = PolygonMap::new(
            bounds(4.0, 4.0),
            vec![square(1, 0.0, 2.2, 1.8), square(2, 2.2, 0.0, 1.8)],
        )
        .unwrap();
        let g = rasterize(&map, 1.0).unwrap();
        assert!(g.is_occupied(1, 2) && g.is_occupied(2, 1));
        let err = grid_astar(&g, Point2::new(0.5, 0.5), Point2::new(3.5, 3.5)).unwrap_err();
        assert_eq!(err, GridError::NoPath);
    }

    #[test]
    fn occupied_endpoint_rejected() {
        let map = PolygonMap::new(bounds(8.0, 8.0), vec![square(1, 2.0, 2.0, 2.0)]).unwrap();
        let g = rasterize(&map, 1.0).unwrap();
        assert_eq!(
            grid_astar(&g, Point2::new(1.5, 1.5), Point2::new(7.5, 7.5)).unwrap_err(),
            GridError::StartOrGoalOccupied
        );
    }

    #[test]
    fn grid_path_is_never_shorter_than_exact() {
        let map = PolygonMap::new(
            bounds(20.0, 10.0),
            vec![square(1, 8.0, 3.0, 4.0)],
        )
        .unwrap();
        let s = Point2::new(2.0, 5.0);
        let t = Point2::new(18.0, 5.0);
        let exact = crate::minimal_construct::plan(&map, s, t).unwrap().path.length();
        let g = rasterize(&map, default_resolution(&map)).unwrap();
        let grid = grid_astar(&g, s, t).unwrap();
        assert!(grid.path.length() >= exact - 1e-9);
        assert!(grid.path.segments() >= 3);
    }
}
