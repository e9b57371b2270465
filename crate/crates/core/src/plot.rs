//! SVG rendering of a system's phase portrait elements: switching lines,
//! singular points, a certified cycle and optionally a numerical trajectory.
//!
//! Output depends only on the inputs; coordinates are printed with fixed
//! precision so repeated runs produce identical bytes.

use std::fmt::Write as _;
use std::path::Path;

use crate::cycle::CycleCertificate;
use crate::error::PlotError;
use crate::model::{PiecewiseSystem, Point};

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Window {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self, PlotError> {
        let finite = [x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite());
        if !finite || x_min >= x_max || y_min >= y_max {
            return Err(PlotError::EmptyWindow {
                x_min,
                x_max,
                y_min,
                y_max,
            });
        }
        Ok(Self {
            x_min,
            x_max,
            y_min,
            y_max,
        })
    }

    /// Bounding box of the points, padded by 15% and always containing the
    /// switching lines.
    pub fn around(points: &[Point]) -> Self {
        let (mut x0, mut x1, mut y0, mut y1) = (-1.5f64, 1.5f64, -1.5f64, 1.5f64);
        for p in points.iter().filter(|p| p.x.is_finite() && p.y.is_finite()) {
            x0 = x0.min(p.x);
            x1 = x1.max(p.x);
            y0 = y0.min(p.y);
            y1 = y1.max(p.y);
        }
        let (px, py) = (0.15 * (x1 - x0), 0.15 * (y1 - y0));
        Self {
            x_min: x0 - px,
            x_max: x1 + px,
            y_min: y0 - py,
            y_max: y1 + py,
        }
    }

    fn contains(&self, p: Point) -> bool {
        self.x_min <= p.x && p.x <= self.x_max && self.y_min <= p.y && p.y <= self.y_max
    }

    fn screen(&self, p: Point) -> (f64, f64) {
        (
            (p.x - self.x_min) / (self.x_max - self.x_min) * WIDTH,
            (self.y_max - p.y) / (self.y_max - self.y_min) * HEIGHT,
        )
    }
}

#[derive(Debug, Clone, Default)]
pub struct PlotContent<'a> {
    pub cycle: Option<&'a CycleCertificate>,
    pub trajectory: Option<&'a [Point]>,
}

pub fn render_svg(
    system: &PiecewiseSystem,
    window: &Window,
    content: &PlotContent<'_>,
) -> Result<String, PlotError> {
    if content.trajectory.is_some_and(|t| t.is_empty()) {
        return Err(PlotError::EmptyPolyline);
    }
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="10" y="20" font-family="sans-serif" font-size="14">{} ({})</text>"#,
        system.configuration(),
        system.layout().name()
    );

    for &line in system.layout().lines() {
        let x = line.abscissa();
        if x < window.x_min || x > window.x_max {
            continue;
        }
        let (sx, _) = window.screen(Point::new(x, 0.0));
        let _ = writeln!(
            svg,
            r##"<line x1="{sx:.3}" y1="0" x2="{sx:.3}" y2="{HEIGHT}" stroke="#555" stroke-dasharray="6 4"/>"##
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="12">{} (x = {x})</text>"#,
            sx + 4.0,
            HEIGHT - 10.0,
            line.label()
        );
    }

    for zs in system.singular_points() {
        let p = zs.singularity.location;
        if !window.contains(p) {
            continue;
        }
        let (sx, sy) = window.screen(p);
        let fill = if zs.in_zone { "black" } else { "none" };
        let _ = writeln!(
            svg,
            r#"<circle cx="{sx:.3}" cy="{sy:.3}" r="4" fill="{fill}" stroke="black"/>"#
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="11">{}{}</text>"#,
            sx + 6.0,
            sy - 6.0,
            zs.singularity.kind.letter(),
            zs.zone
        );
    }

    if let Some(traj) = content.trajectory {
        let _ = writeln!(
            svg,
            r##"<polyline points="{}" fill="none" stroke="#1f77b4" stroke-width="1"/>"##,
            screen_points(window, traj)
        );
    }

    if let Some(cycle) = content.cycle {
        if cycle.polyline.is_empty() {
            return Err(PlotError::EmptyPolyline);
        }
        let mut d = String::new();
        for (i, &p) in cycle.polyline.iter().enumerate() {
            let (sx, sy) = window.screen(p);
            let _ = write!(d, "{}{sx:.3} {sy:.3} ", if i == 0 { "M" } else { "L" });
        }
        d.push('Z');
        let _ = writeln!(
            svg,
            r##"<path d="{d}" fill="none" stroke="#d62728" stroke-width="2"/>"##
        );
        let names = ["(1, y0)", "(1, y1)", "(-1, y2)", "(-1, y3)"];
        for (p, name) in cycle.corners.iter().zip(names) {
            let (sx, sy) = window.screen(*p);
            let _ = writeln!(
                svg,
                r##"<circle cx="{sx:.3}" cy="{sy:.3}" r="3" fill="#d62728"/>"##
            );
            let _ = writeln!(
                svg,
                r#"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="11">{name} = ({:.6}, {:.6})</text>"#,
                sx + 5.0,
                sy + 14.0,
                p.x,
                p.y
            );
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn screen_points(window: &Window, points: &[Point]) -> String {
    let mut out = String::new();
    for (i, &p) in points.iter().enumerate() {
        let (sx, sy) = window.screen(p);
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{sx:.3},{sy:.3}");
    }
    out
}

pub fn write_svg(path: &Path, svg: &str) -> Result<(), PlotError> {
    std::fs::write(path, svg)?;
    Ok(())
}
