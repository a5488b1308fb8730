//! Deterministic SVG rendering of city maps, tours and activation grids.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::hopfield::ActivationGrid;
use crate::instance::Instance;
use crate::tour::Tour;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 40.0;

fn header(out: &mut String, width: f64, height: f64) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = writeln!(
        out,
        r#"<rect x="0" y="0" width="{width:.0}" height="{height:.0}" fill="white"/>"#
    );
}

/// City markers with labels, plus the closed route when `tour` is given.
pub fn render_instance_svg(inst: &Instance, tour: Option<&Tour>) -> Result<String> {
    if let Some(t) = tour {
        if t.len() != inst.len() {
            return Err(Error::InvalidTour(format!(
                "tour visits {} cities but the instance has {}",
                t.len(),
                inst.len()
            )));
        }
    }
    let cities = inst.cities();
    let (mut min_x, mut max_x) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut min_y, mut max_y) = (f64::INFINITY, f64::NEG_INFINITY);
    for c in cities {
        min_x = min_x.min(c.x);
        max_x = max_x.max(c.x);
        min_y = min_y.min(c.y);
        max_y = max_y.max(c.y);
    }
    let span = (max_x - min_x).max(max_y - min_y).max(f64::EPSILON);
    let scale = (SIZE - 2.0 * MARGIN) / span;
    let project = |x: f64, y: f64| {
        (
            MARGIN + (x - min_x) * scale,
            SIZE - MARGIN - (y - min_y) * scale,
        )
    };

    let mut out = String::new();
    header(&mut out, SIZE, SIZE);
    let _ = writeln!(out, "<title>{}</title>", escape(inst.id()));
    if let Some(t) = tour {
        let points: Vec<String> = t
            .order()
            .iter()
            .map(|&i| {
                let (px, py) = project(cities[i].x, cities[i].y);
                format!("{px:.3},{py:.3}")
            })
            .collect();
        let _ = writeln!(
            out,
            r#"<polygon class="tour" points="{}" fill="none" stroke="steelblue" stroke-width="2"/>"#,
            points.join(" ")
        );
    }
    for c in cities {
        let (px, py) = project(c.x, c.y);
        let _ = writeln!(
            out,
            r#"<circle class="city" cx="{px:.3}" cy="{py:.3}" r="5" fill="crimson"/>"#
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="12">{}</text>"#,
            px + 7.0,
            py - 7.0,
            escape(&c.label)
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// `n×n` cells, filled where the unit is active. Rows are cities, columns positions.
pub fn render_grid_svg(g: &ActivationGrid, labels: Option<&[String]>) -> String {
    let n = g.n();
    let cell = ((SIZE - 2.0 * MARGIN) / n.max(1) as f64).floor().max(4.0);
    let side = 2.0 * MARGIN + cell * n as f64;
    let mut out = String::new();
    header(&mut out, side, side);
    for pos in 0..n {
        let _ = writeln!(
            out,
            r#"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#,
            MARGIN + (pos as f64 + 0.5) * cell,
            MARGIN - 8.0,
            pos + 1
        );
    }
    for city in 0..n {
        let label = labels
            .and_then(|l| l.get(city).cloned())
            .unwrap_or_else(|| city.to_string());
        let _ = writeln!(
            out,
            r#"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>"#,
            MARGIN - 6.0,
            MARGIN + (city as f64 + 0.5) * cell + 4.0,
            escape(&label)
        );
        for pos in 0..n {
            let on = g.get(city, pos) == 1;
            let _ = writeln!(
                out,
                r#"<rect class="{}" x="{:.3}" y="{:.3}" width="{cell:.3}" height="{cell:.3}" fill="{}" stroke="gray"/>"#,
                if on { "cell on" } else { "cell off" },
                MARGIN + pos as f64 * cell,
                MARGIN + city as f64 * cell,
                if on { "black" } else { "white" }
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}
