//! SVG drawing of a slice, in the spirit of the figure of `Bl_2 P^2`.
//!
//! Coordinates here are floating point and for display only.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::poly::rat::{to_f64, QVector};
use crate::sarkisov::{SarkisovLink, SliceSummary};

const SIZE: f64 = 800.0;
const MARGIN: f64 = 50.0;

struct Chart {
    min: (f64, f64),
    scale: f64,
}

impl Chart {
    fn fit(points: &[QVector]) -> Chart {
        let xs: Vec<(f64, f64)> = points.iter().map(|p| (to_f64(&p[0]), to_f64(&p[1]))).collect();
        let fold = |f: fn(f64, f64) -> f64, init: f64, g: fn(&(f64, f64)) -> f64| xs.iter().map(g).fold(init, f);
        let min = (fold(f64::min, f64::INFINITY, |p| p.0), fold(f64::min, f64::INFINITY, |p| p.1));
        let max = (fold(f64::max, f64::NEG_INFINITY, |p| p.0), fold(f64::max, f64::NEG_INFINITY, |p| p.1));
        let span = (max.0 - min.0).max(max.1 - min.1).max(1e-9);
        Chart {
            min,
            scale: (SIZE - 2.0 * MARGIN) / span,
        }
    }

    fn map(&self, p: &QVector) -> (f64, f64) {
        (
            MARGIN + (to_f64(&p[0]) - self.min.0) * self.scale,
            SIZE - MARGIN - (to_f64(&p[1]) - self.min.1) * self.scale,
        )
    }

    fn points(&self, ps: &[QVector]) -> String {
        ps.iter()
            .map(|p| {
                let (x, y) = self.map(p);
                format!("{x:.2},{y:.2}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn fill(fingerprint: &str) -> String {
    let hue = u32::from_str_radix(&fingerprint[..4.min(fingerprint.len())], 16).unwrap_or(0) % 360;
    format!("hsl({hue},55%,82%)")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Cells coloured and labelled by model, the traversed walls in red and
/// the link vertices marked with their types.
pub fn render(summary: &SliceSummary, links: &[SarkisovLink], names: &BTreeMap<String, String>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}" font-family="sans-serif">"#
    );
    let _ = writeln!(out, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    if summary.plane.dim() != 2 || summary.eff_region.is_empty() {
        let _ = writeln!(out, r#"<text x="20" y="40">slice is not two-dimensional</text>"#);
        out.push_str("</svg>\n");
        return out;
    }
    let chart = Chart::fit(&summary.eff_region);
    let label = |fp: &str| names.get(fp).cloned().unwrap_or_else(|| fp.to_string());
    for c in summary.cells.iter().filter(|c| c.dim == 2) {
        let _ = writeln!(
            out,
            r#"<polygon points="{}" fill="{}" stroke="black" stroke-width="1"/>"#,
            chart.points(&c.vertices),
            fill(&c.model)
        );
    }
    for c in summary.cells.iter().filter(|c| c.dim == 1 && c.vertices.len() == 2) {
        let stroke = if summary.arc_walls.contains(&c.parent) {
            r#"stroke="crimson" stroke-width="4""#
        } else {
            r#"stroke="black" stroke-width="1""#
        };
        let (a, b) = (chart.map(&c.vertices[0]), chart.map(&c.vertices[1]));
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" {stroke}/>"#,
            a.0, a.1, b.0, b.1
        );
    }
    let _ = writeln!(
        out,
        r#"<polygon points="{}" fill="none" stroke="grey" stroke-dasharray="6,4"/>"#,
        chart.points(&summary.eff_region)
    );
    for c in summary.cells.iter().filter(|c| c.dim == 2) {
        let n = c.vertices.len() as f64;
        let (sx, sy) = c.vertices.iter().map(|v| chart.map(v)).fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="13" text-anchor="middle">{}</text>"#,
            sx / n,
            sy / n,
            escape(&label(&c.model))
        );
    }
    for (i, l) in links.iter().enumerate() {
        if l.vertex.len() != 2 {
            continue;
        }
        let (x, y) = chart.map(&l.vertex);
        let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="6" fill="crimson"/>"#);
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="15" font-weight="bold">{}. {}</text>"#,
            x + 9.0,
            y - 9.0,
            i + 1,
            l.link_type
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demo;

    #[test]
    fn drawing_is_deterministic() {
        let d = demo::run("bl2p2", 2).unwrap();
        let s = d.factorization.slice.as_ref().unwrap();
        let a = render(s, &d.factorization.links, &BTreeMap::new());
        let b = render(s, &d.factorization.links, &BTreeMap::new());
        assert_eq!(a, b);
        assert_eq!(a.matches("<circle").count(), 5);
        assert!(a.contains("IVm"));
    }
}
