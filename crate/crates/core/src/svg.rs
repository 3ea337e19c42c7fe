//! Static SVG pictures of planar scenes.

use crate::error::{Error, Result};
use crate::geometry::{Polyhedron, Region, Row};
use crate::linalg::solve_square;
use crate::num::{from_f64, to_f64, Scalar};
use crate::report::{Outcome, Report};
use crate::scene::Scene;
use crate::verdict::Certificate;
use crate::vector::{neg, Vector};
use std::fmt::Write as _;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;

/// Grid used to draw oracle regions.
const ORACLE_DRAW_GRID: usize = 32;

/// World rectangle shown in the picture.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Window {
    /// A 4:3 window around the scene's points.
    pub fn around(scene: &Scene) -> Window {
        let pts: Vec<(f64, f64)> = scene.points.values().filter(|p| p.len() == 2).map(|p| (to_f64(&p[0]), to_f64(&p[1]))).collect();
        let (cx, cy) = if pts.is_empty() {
            (0.0, 0.0)
        } else {
            let n = pts.len() as f64;
            (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n)
        };
        let spread = pts.iter().map(|p| (p.0 - cx).abs().max((p.1 - cy).abs() * 4.0 / 3.0)).fold(0.0, f64::max);
        let hw = (spread + 1.0).max(2.0);
        Window { x0: cx - hw, x1: cx + hw, y0: cy - hw * 0.75, y1: cy + hw * 0.75 }
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        ((x - self.x0) / (self.x1 - self.x0) * WIDTH, HEIGHT - (y - self.y0) / (self.y1 - self.y0) * HEIGHT)
    }

    fn rows(&self) -> Vec<Row> {
        let r = |c: [i64; 2], b: f64| Row::new(c.iter().map(|&v| Scalar::from_integer(v.into())).collect(), from_f64(b).expect("finite window"));
        vec![r([1, 0], self.x1), r([-1, 0], -self.x0), r([0, 1], self.y1), r([0, -1], -self.y0)]
    }
}

/// Vertices of a bounded planar polygon in counter-clockwise order.
fn polygon(p: &Polyhedron) -> Vec<(f64, f64)> {
    let rows = &p.rows;
    let mut verts: Vec<Vector> = Vec::new();
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            let m = [rows[i].normal.clone(), rows[j].normal.clone()];
            if let Some(x) = solve_square(&m, &[rows[i].rhs.clone(), rows[j].rhs.clone()]) {
                if p.contains(&x) && !verts.contains(&x) {
                    verts.push(x);
                }
            }
        }
    }
    let pts: Vec<(f64, f64)> = verts.iter().map(|v| (to_f64(&v[0]), to_f64(&v[1]))).collect();
    if pts.is_empty() {
        return pts;
    }
    let n = pts.len() as f64;
    let (cx, cy) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let mut sorted = pts;
    sorted.sort_by(|a, b| (a.1 - cy).atan2(a.0 - cx).total_cmp(&(b.1 - cy).atan2(b.0 - cx)));
    sorted
}

fn pieces_for(r: &Region, anchor: Option<&Vector>) -> Vec<Polyhedron> {
    match r {
        Region::Exact { pieces, .. } => pieces.clone(),
        Region::Oracle(o) => {
            let at = anchor.cloned().unwrap_or_else(|| vec![Scalar::from_integer(0.into()); 2]);
            o.standin(&at, ORACLE_DRAW_GRID).0
        }
    }
}

const PALETTE: [&str; 4] = ["#3b6fb6", "#c0504d", "#4f9a5a", "#8064a2"];

fn arrow(out: &mut String, w: &Window, from: &[f64; 2], dir: &[f64; 2], class: &str) {
    let (x1, y1) = w.map(from[0], from[1]);
    let (x2, y2) = w.map(from[0] + dir[0], from[1] + dir[1]);
    let _ = writeln!(
        out,
        r#"<line class="{class}" x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" marker-end="url(#head)"/>"#
    );
}

fn f2(v: &[Scalar]) -> [f64; 2] {
    [to_f64(&v[0]), to_f64(&v[1])]
}

/// Scales a displacement so its longer coordinate is `len`.
fn visible(v: [f64; 2], len: f64) -> Option<[f64; 2]> {
    let m = v[0].abs().max(v[1].abs());
    (m > 0.0).then(|| [v[0] / m * len, v[1] / m * len])
}

/// Regions, reference points, and (from a report) shift witnesses and
/// dual vectors. Arrows are rescaled to a fixed visible length.
pub fn emit_svg(scene: &Scene, report: Option<&Report>, window: &Window) -> Result<String> {
    if scene.dim != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: scene.dim });
    }
    if !(window.x1 > window.x0 && window.y1 > window.y0) {
        return Err(Error::Input("empty window".into()));
    }
    let arrow_len = (window.x1 - window.x0) / 10.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, "<title>{}</title>", scene.name);
    let _ = writeln!(
        out,
        "<desc>world window [{:.3}, {:.3}] x [{:.3}, {:.3}] mapped to the {WIDTH}x{HEIGHT} viewport</desc>",
        window.x0, window.x1, window.y0, window.y1
    );
    out.push_str(concat!(
        "<defs><marker id=\"head\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"7\" markerHeight=\"7\" orient=\"auto\">",
        "<path d=\"M0,0 L10,5 L0,10 z\"/></marker></defs>\n",
        "<style>.shift{stroke:#222;stroke-width:2} .dual{stroke:#b8860b;stroke-width:2;stroke-dasharray:6 3} ",
        ".axis{stroke:#999;stroke-width:1} text{font:14px sans-serif}</style>\n",
        "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n"
    ));
    let (ox, oy) = window.map(0.0, 0.0);
    let _ = writeln!(out, r#"<line class="axis" x1="0" y1="{oy:.3}" x2="{WIDTH}" y2="{oy:.3}"/>"#);
    let _ = writeln!(out, r#"<line class="axis" x1="{ox:.3}" y1="0" x2="{ox:.3}" y2="{HEIGHT}"/>"#);
    let clip = window.rows();
    let anchor = scene.points.values().next();
    for (k, (name, region)) in scene.regions.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let _ = writeln!(out, r#"<g id="region-{name}" fill="{color}" fill-opacity="0.35" stroke="{color}">"#);
        for p in pieces_for(region, anchor) {
            let poly = polygon(&p.with_rows(&clip.iter().map(|r| (r.normal.clone(), r.rhs.clone())).collect::<Vec<_>>()));
            if poly.len() < 3 {
                continue;
            }
            let coords: Vec<String> = poly.iter().map(|&(x, y)| {
                let (u, v) = window.map(x, y);
                format!("{u:.3},{v:.3}")
            }).collect();
            let _ = writeln!(out, r#"<polygon points="{}"/>"#, coords.join(" "));
        }
        out.push_str("</g>\n");
    }
    if let Some(r) = report {
        out.push_str("<g id=\"certificates\">\n");
        for e in &r.entries {
            let pts = e.query.points.as_ref().and_then(|[a, b]| Some((scene.points.get(a)?, scene.points.get(b)?)));
            let Some((a, b)) = pts else { continue };
            let verdict = match &e.outcome {
                Outcome::Verdict { verdict } => Some(verdict),
                Outcome::Chain { report } => report.levels.first().map(|l| &l.verdict),
                _ => None,
            };
            match verdict.and_then(|v| v.certificate.as_ref()) {
                Some(Certificate::Shifts { witnesses, .. }) => {
                    if let Some(w) = witnesses.first() {
                        // The sets move by -u and -v.
                        if let Some(d) = visible(f2(&neg(&w.witness.u)), arrow_len) {
                            arrow(&mut out, window, &f2(a), &d, "shift");
                        }
                        if let Some(d) = visible(f2(&neg(&w.witness.v)), arrow_len) {
                            arrow(&mut out, window, &f2(b), &d, "shift");
                        }
                    }
                }
                Some(Certificate::Dual { pair }) => {
                    for (base, dir) in [(&pair.aprime, &pair.astar), (&pair.bprime, &pair.bstar)] {
                        if let Some(d) = visible(f2(dir), arrow_len) {
                            arrow(&mut out, window, &f2(base), &d, "dual");
                        }
                    }
                }
                _ => {}
            }
            if let Outcome::Zn { outcome: Some(z) } = &e.outcome {
                for (base, dir) in [(&z.aprime, z.astar.clone()), (&z.bprime, neg(&z.astar))] {
                    if let Some(d) = visible(f2(&dir), arrow_len) {
                        arrow(&mut out, window, &f2(base), &d, "dual");
                    }
                }
            }
        }
        out.push_str("</g>\n");
    }
    for (name, p) in &scene.points {
        let (x, y) = window.map(to_f64(&p[0]), to_f64(&p[1]));
        let _ = writeln!(out, r#"<circle cx="{x:.3}" cy="{y:.3}" r="4" fill="black"/>"#);
        let _ = writeln!(out, r#"<text x="{:.3}" y="{:.3}">{name}</text>"#, x + 6.0, y - 6.0);
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PolyhedralNorm;
    use std::collections::BTreeMap;

    fn scene(dim: usize) -> Scene {
        let mut regions = BTreeMap::new();
        regions.insert("A".to_string(), Region::single(Polyhedron::from_ints(dim, &[(&vec![1; dim], 0)])));
        Scene {
            name: "t".into(),
            note: String::new(),
            dim,
            norm: PolyhedralNorm::max(dim),
            regions,
            points: BTreeMap::new(),
            queries: Vec::new(),
        }
    }

    #[test]
    fn halfplane_is_clipped_to_the_window() {
        let s = scene(2);
        let w = Window { x0: -2.0, x1: 2.0, y0: -1.5, y1: 1.5 };
        let svg = emit_svg(&s, None, &w).unwrap();
        assert_eq!(svg.matches("<polygon").count(), 1);
        assert_eq!(svg, emit_svg(&s, None, &w).unwrap());
    }

    #[test]
    fn three_dimensional_scene_is_rejected() {
        let s = scene(3);
        assert!(emit_svg(&s, None, &Window::around(&s)).is_err());
    }
}
