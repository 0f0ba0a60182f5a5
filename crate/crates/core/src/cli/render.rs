//! Static SVG pictures of the fundamental domain.

use std::fmt::Write;

use crate::geom::Pt;
use crate::torusgraph::{ilen, Color, Embedding};

const SIZE: f64 = 600.0;
const PAD: f64 = 20.0;

fn sx(x: f64) -> f64 {
    PAD + x * SIZE
}

fn sy(y: f64) -> f64 {
    PAD + (1.0 - y) * SIZE
}

/// Integer translations `t` with `[lo, hi] + t` meeting the unit square.
fn translations(pts: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for &(x, y) in pts {
        x0 = x0.min(x);
        y0 = y0.min(y);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    let mut out = Vec::new();
    for tx in (-x1).ceil() as i64..=(1.0 - x0).floor() as i64 {
        for ty in (-y1).ceil() as i64..=(1.0 - y0).floor() as i64 {
            out.push((tx as f64, ty as f64));
        }
    }
    out
}

fn polyline(out: &mut String, pts: &[(f64, f64)], style: &str) {
    for (tx, ty) in translations(pts) {
        let coords: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x + tx), sy(y + ty))).collect();
        let _ = writeln!(out, r#"  <polyline points="{}" {style}/>"#, coords.join(" "));
    }
}

fn f(p: Pt) -> (f64, f64) {
    p.to_f64()
}

pub fn svg(e: &Embedding, strands: bool, labels: Option<(i64, i64)>) -> Result<String, String> {
    let g = e.graph();
    let m = e.map();
    let full = SIZE + 2.0 * PAD;
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{full}" height="{full}" viewBox="0 0 {full} {full}">"#);
    let _ = writeln!(s, r#"<defs><clipPath id="domain"><rect x="{PAD}" y="{PAD}" width="{SIZE}" height="{SIZE}"/></clipPath></defs>"#);
    let _ = writeln!(s, r##"<rect x="{PAD}" y="{PAD}" width="{SIZE}" height="{SIZE}" fill="#fafafa" stroke="#999" stroke-dasharray="4 3"/>"##);
    let _ = writeln!(s, r#"<g clip-path="url(#domain)">"#);
    for edge in &g.edges {
        let pts: Vec<(f64, f64)> = edge.polyline(g).into_iter().map(f).collect();
        polyline(&mut s, &pts, r##"fill="none" stroke="#333" stroke-width="2""##);
    }
    if strands {
        let offset = 0.012;
        for (k, st) in e.strands().iter().enumerate() {
            let hue = (k as f64 * 137.5) % 360.0;
            let mut off = (0.0, 0.0);
            let mut pts = Vec::new();
            for &d in &st.darts {
                let pl: Vec<(f64, f64)> = m.polyline(d).iter().map(|&p| f(p)).collect();
                let i = (pl.len() - 1) / 2;
                let (a, b) = (pl[i], pl[i + 1]);
                let (dx, dy) = (b.0 - a.0, b.1 - a.1);
                let len = dx.hypot(dy);
                let mid = ((a.0 + b.0) / 2.0 - dy / len * offset, (a.1 + b.1) / 2.0 + dx / len * offset);
                pts.push((mid.0 + off.0, mid.1 + off.1));
                let v = m.voltage(d);
                off = (off.0 + v.0 as f64, off.1 + v.1 as f64);
            }
            pts.push((pts[0].0 + off.0, pts[0].1 + off.1));
            let style = format!(r#"fill="none" stroke="hsl({hue:.0},70%,45%)" stroke-width="2.5" stroke-opacity="0.8""#);
            polyline(&mut s, &pts, &style);
        }
    }
    let _ = writeln!(s, "</g>");
    for v in &g.vertices {
        let (x, y) = f(v.pos);
        let fill = if v.color == Color::Black { "#000" } else { "#fff" };
        let _ = writeln!(s, r##"<circle cx="{:.2}" cy="{:.2}" r="5" fill="{fill}" stroke="#000" stroke-width="1.5"/>"##, sx(x), sy(y));
    }
    if let Some(dir) = labels {
        let weak = e.newton_polygon_weak();
        let want = ilen(dir) as i64;
        let edge = weak
            .vectors()
            .into_iter()
            .find(|v| {
                let l = ilen(*v) as i64;
                want > 0 && (v.0 / l, v.1 / l) == (dir.0 / want, dir.1 / want)
            })
            .ok_or_else(|| format!("no Newton polygon edge in direction {dir:?}"))?;
        let lab = e.e_region_labeling(edge).map_err(|err| err.to_string())?;
        let faces = e.faces();
        for (i, w) in faces.walks.iter().enumerate() {
            let poly = e.walk_polygon(w);
            let n = poly.len() as f64;
            let (cx, cy) = poly.iter().map(|&p| f(p)).fold((0.0, 0.0), |a, p| (a.0 + p.0 / n, a.1 + p.1 / n));
            let (cx, cy) = (cx.rem_euclid(1.0), cy.rem_euclid(1.0));
            let _ = writeln!(
                s,
                r##"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="14" fill="#a00" text-anchor="middle">{}</text>"##,
                sx(cx),
                sy(cy) + 5.0,
                lab.labels[i]
            );
        }
    }
    let _ = writeln!(s, "</svg>");
    Ok(s)
}
