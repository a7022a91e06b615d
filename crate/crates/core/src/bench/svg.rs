use std::fmt::Write;

use crate::environment::{Environment, Obstacle};
use crate::error::{PlanError, Result};
use crate::point::ConfigPoint;
use crate::tree::MotionTree;

const TREE_STROKES: [&str; 2] = ["#3b6fb6", "#c0392b"];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RenderOptions {
    /// Axis pair to project onto. Defaults to `(0, 1)` for two and three
    /// dimensions; required above that.
    pub projection: Option<[usize; 2]>,
    /// Width of the drawing in pixels.
    pub width: f64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            projection: None,
            width: 800.0,
        }
    }
}

struct Frame {
    axes: [usize; 2],
    min: [f64; 2],
    max_y: f64,
    scale: f64,
}

impl Frame {
    fn x(&self, p: &ConfigPoint) -> f64 {
        (p[self.axes[0]] - self.min[0]) * self.scale
    }

    fn y(&self, p: &ConfigPoint) -> f64 {
        (self.max_y - p[self.axes[1]]) * self.scale
    }
}

/// SVG 1.1 drawing of the obstacles, trees and best path. Every tree vertex
/// becomes one `circle` of class `vertex`.
pub fn render_svg(
    env: &Environment,
    trees: &[MotionTree],
    best_path: Option<&[ConfigPoint]>,
    options: &RenderOptions,
) -> Result<String> {
    let d = env.dim();
    let axes = match options.projection {
        Some(a) => a,
        None if d <= 3 => [0, 1],
        None => {
            return Err(PlanError::InvalidArgument(format!(
                "cannot render {d}-D scene without a projection"
            )))
        }
    };
    if axes[0] >= d || axes[1] >= d || axes[0] == axes[1] {
        return Err(PlanError::InvalidArgument(format!(
            "invalid projection axes {axes:?} for dimension {d}"
        )));
    }
    if !(options.width.is_finite() && options.width > 0.0) {
        return Err(PlanError::InvalidArgument("width must be positive".into()));
    }
    let b = env.bounds();
    let span_x = b.max[axes[0]] - b.min[axes[0]];
    let span_y = b.max[axes[1]] - b.min[axes[1]];
    let f = Frame {
        axes,
        min: [b.min[axes[0]], b.min[axes[1]]],
        max_y: b.max[axes[1]],
        scale: options.width / span_x,
    };
    let (w, h) = (options.width, span_y * f.scale);
    let unit = w / 400.0;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.3}" height="{h:.3}" viewBox="0 0 {w:.3} {h:.3}">"#
    );
    let _ = writeln!(
        s,
        r##"<rect class="bounds" x="0" y="0" width="{w:.3}" height="{h:.3}" fill="#ffffff" stroke="#000000"/>"##
    );

    let _ = writeln!(s, r##"<g class="obstacles" fill="#7f7f7f">"##);
    for o in env.obstacles() {
        match o {
            Obstacle::Box { min, max } => {
                let (x0, x1) = (f.x(min), f.x(max));
                let (y0, y1) = (f.y(max), f.y(min));
                let _ = writeln!(
                    s,
                    r#"<rect x="{x0:.3}" y="{y0:.3}" width="{:.3}" height="{:.3}"/>"#,
                    x1 - x0,
                    y1 - y0
                );
            }
            Obstacle::Sphere { center, radius } => {
                let _ = writeln!(
                    s,
                    r#"<circle cx="{:.3}" cy="{:.3}" r="{:.3}"/>"#,
                    f.x(center),
                    f.y(center),
                    radius * f.scale
                );
            }
        }
    }
    let _ = writeln!(s, "</g>");

    for (k, tree) in trees.iter().enumerate() {
        let stroke = TREE_STROKES[k % TREE_STROKES.len()];
        let _ = writeln!(
            s,
            r#"<g class="tree" id="tree-{k}" stroke="{stroke}" fill="{stroke}" stroke-width="{:.3}">"#,
            0.5 * unit
        );
        for v in 0..tree.len() {
            if let Some(p) = tree.parent(v) {
                let (a, c) = (tree.point(p), tree.point(v));
                let _ = writeln!(
                    s,
                    r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/>"#,
                    f.x(a),
                    f.y(a),
                    f.x(c),
                    f.y(c)
                );
            }
        }
        for p in tree.points() {
            let _ = writeln!(
                s,
                r#"<circle class="vertex" cx="{:.3}" cy="{:.3}" r="{:.3}"/>"#,
                f.x(p),
                f.y(p),
                unit
            );
        }
        let _ = writeln!(s, "</g>");
    }

    if let Some(path) = best_path {
        let pts: Vec<String> = path
            .iter()
            .map(|p| format!("{:.3},{:.3}", f.x(p), f.y(p)))
            .collect();
        let _ = writeln!(
            s,
            r##"<polyline class="path" fill="none" stroke="#1e8449" stroke-width="{:.3}" points="{}"/>"##,
            2.0 * unit,
            pts.join(" ")
        );
    }

    let (start, goal) = (env.start(), env.goal());
    let _ = writeln!(
        s,
        r##"<circle class="goal-region" cx="{:.3}" cy="{:.3}" r="{:.3}" fill="none" stroke="#1e8449"/>"##,
        f.x(goal),
        f.y(goal),
        env.goal_radius() * f.scale
    );
    for (class, p, color) in [("start", start, "#2471a3"), ("goal", goal, "#1e8449")] {
        let _ = writeln!(
            s,
            r#"<circle class="{class}" cx="{:.3}" cy="{:.3}" r="{:.3}" fill="{color}"/>"#,
            f.x(p),
            f.y(p),
            3.0 * unit
        );
    }
    let _ = writeln!(s, "</svg>");
    Ok(s)
}
