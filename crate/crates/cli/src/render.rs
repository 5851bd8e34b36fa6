//! Deterministic SVG output.
//!
//! Coordinates are written with a fixed number of decimals so identical
//! scenes produce identical bytes. Path metadata (label, length, segment
//! count) is embedded as attributes for inspection without rasterizing.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path as FsPath;

use polynav::simulation::PlannerKind;
use polynav::{Path, Point2, PolygonMap};

const WIDTH_PX: f64 = 800.0;

#[derive(Debug, Clone)]
pub struct LabeledPath {
    pub planner: PlannerKind,
    pub path: Path,
}

#[derive(Debug, Clone, Default)]
pub struct Scene<'a> {
    pub title: String,
    pub map: Option<&'a PolygonMap>,
    /// Thin grey edges, e.g. the explored search graph.
    pub graph_edges: Vec<(Point2, Point2)>,
    pub paths: Vec<LabeledPath>,
    pub start: Option<Point2>,
    pub target: Option<Point2>,
    /// Driven trajectory, drawn dashed.
    pub trajectory: Vec<Point2>,
    pub robot: Option<Point2>,
}

pub fn stroke_color(planner: PlannerKind) -> &'static str {
    match planner {
        PlannerKind::MinimalConstruct => "#d62728",
        PlannerKind::GridAStar => "#1f77b4",
        PlannerKind::VisibilityGraph => "#2ca02c",
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn points_attr(points: impl IntoIterator<Item = Point2>, top: f64) -> String {
    let mut out = String::new();
    for (i, p) in points.into_iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{:.4},{:.4}", p.x, top - p.y + 0.0);
    }
    out
}

pub fn render_svg(scene: &Scene<'_>) -> String {
    let bounds = scene.map.map(|m| *m.bounds()).unwrap_or_else(|| {
        let mut pts: Vec<Point2> = scene.paths.iter().flat_map(|p| p.path.waypoints().to_vec()).collect();
        pts.extend(scene.start);
        pts.extend(scene.target);
        polynav::Aabb::from_points(pts)
            .map(|b| b.expanded(1.0))
            .unwrap_or(polynav::Aabb { min: Point2::new(0.0, 0.0), max: Point2::new(1.0, 1.0) })
    });
    let (w, h) = (bounds.width().max(1e-9), bounds.height().max(1e-9));
    let top = bounds.max.y + bounds.min.y;
    let unit = w.max(h) / 200.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" viewBox="{:.4} {:.4} {:.4} {:.4}">"#,
        WIDTH_PX,
        WIDTH_PX * h / w,
        bounds.min.x,
        bounds.min.y,
        w,
        h
    );
    let _ = writeln!(s, "<title>{}</title>", escape(&scene.title));
    let _ = writeln!(
        s,
        r##"<rect class="bounds" x="{:.4}" y="{:.4}" width="{:.4}" height="{:.4}" fill="#ffffff" stroke="#000000" stroke-width="{:.4}"/>"##,
        bounds.min.x,
        bounds.min.y,
        w,
        h,
        unit * 0.5
    );
    if let Some(map) = scene.map {
        let _ = writeln!(s, r#"<g class="obstacles">"#);
        for p in map.polygons() {
            let _ = writeln!(
                s,
                r##"<polygon data-id="{}" points="{}" fill="#333333"/>"##,
                p.id().0,
                points_attr(p.vertices().iter().copied(), top)
            );
        }
        let _ = writeln!(s, "</g>");
    }
    if !scene.graph_edges.is_empty() {
        let _ = writeln!(s, r##"<g class="graph" stroke="#aaaaaa" stroke-width="{:.4}">"##, unit * 0.3);
        for &(a, b) in &scene.graph_edges {
            let _ = writeln!(
                s,
                r#"<line x1="{:.4}" y1="{:.4}" x2="{:.4}" y2="{:.4}"/>"#,
                a.x,
                top - a.y + 0.0,
                b.x,
                top - b.y + 0.0
            );
        }
        let _ = writeln!(s, "</g>");
    }
    if scene.trajectory.len() > 1 {
        let _ = writeln!(
            s,
            r##"<polyline class="trajectory" points="{}" fill="none" stroke="#555555" stroke-width="{:.4}" stroke-dasharray="{:.4}"/>"##,
            points_attr(scene.trajectory.iter().copied(), top),
            unit * 0.6,
            unit * 2.0
        );
    }
    for lp in &scene.paths {
        let _ = writeln!(
            s,
            r#"<polyline class="path" data-planner="{}" data-length="{:.9}" data-segments="{}" points="{}" fill="none" stroke="{}" stroke-width="{:.4}"/>"#,
            lp.planner.short_name(),
            lp.path.length(),
            lp.path.segments(),
            points_attr(lp.path.waypoints().iter().copied(), top),
            stroke_color(lp.planner),
            unit
        );
    }
    let marker = |s: &mut String, class: &str, p: Point2, color: &str| {
        let _ = writeln!(
            s,
            r#"<circle class="marker {class}" cx="{:.4}" cy="{:.4}" r="{:.4}" fill="{color}"/>"#,
            p.x,
            top - p.y + 0.0,
            unit * 2.0
        );
    };
    if let Some(p) = scene.start {
        marker(&mut s, "start", p, "#2ca02c");
    }
    if let Some(p) = scene.target {
        marker(&mut s, "target", p, "#ff7f0e");
    }
    if let Some(p) = scene.robot {
        marker(&mut s, "robot", p, "#9467bd");
    }
    s.push_str("</svg>\n");
    s
}

pub fn write_svg(scene: &Scene<'_>, path: &FsPath) -> io::Result<()> {
    fs::write(path, render_svg(scene))
}

#[cfg(test)]
mod tests {
    use super::*;
    use polynav::Aabb;

    #[test]
    fn empty_map_one_path() {
        let map = PolygonMap::new(Aabb { min: Point2::new(0.0, 0.0), max: Point2::new(10.0, 10.0) }, vec![]).unwrap();
        let s = Point2::new(1.0, 1.0);
        let t = Point2::new(9.0, 1.0);
        let scene = Scene {
            title: "empty".into(),
            map: Some(&map),
            paths: vec![LabeledPath {
                planner: PlannerKind::MinimalConstruct,
                path: Path::new(vec![s, t]).unwrap(),
            }],
            start: Some(s),
            target: Some(t),
            ..Default::default()
        };
        let svg = render_svg(&scene);
        assert_eq!(svg.matches(r#"class="path""#).count(), 1);
        assert_eq!(svg.matches(r#"class="marker"#).count(), 2);
        assert_eq!(svg, render_svg(&scene));
    }

    #[test]
    fn y_axis_points_up() {
        let map = PolygonMap::new(Aabb { min: Point2::new(0.0, 0.0), max: Point2::new(10.0, 10.0) }, vec![]).unwrap();
        let scene = Scene { map: Some(&map), start: Some(Point2::new(1.0, 9.0)), ..Default::default() };
        assert!(render_svg(&scene).contains(r#"cx="1.0000" cy="1.0000""#));
    }
}
