//! Minimal deterministic SVG 1.1 writer.
//!
//! Coordinates are given in the mathematical orientation (y up) and flipped
//! on output. Numbers are printed with a fixed number of decimals so equal
//! inputs always give byte-identical documents.

use std::fmt::Write;

use crate::geometry::VecQ;

pub(crate) struct SvgDoc {
    min: (f64, f64),
    max: (f64, f64),
    body: String,
    /// Affine units per SVG user unit.
    pub unit: f64,
}

pub(crate) fn num(x: f64) -> String {
    let s = format!("{:.4}", x);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

impl SvgDoc {
    pub fn new(unit: f64) -> Self {
        SvgDoc { min: (f64::INFINITY, f64::INFINITY), max: (f64::NEG_INFINITY, f64::NEG_INFINITY), body: String::new(), unit }
    }

    fn see(&mut self, p: (f64, f64)) -> (f64, f64) {
        self.min = (self.min.0.min(p.0), self.min.1.min(p.1));
        self.max = (self.max.0.max(p.0), self.max.1.max(p.1));
        (p.0, -p.1)
    }

    pub fn point(v: &VecQ) -> (f64, f64) {
        let c = v.to_f64();
        (c[0], c[1])
    }

    pub fn polygon(&mut self, pts: &[(f64, f64)], class: &str, fill: &str) {
        let coords: Vec<String> = pts
            .iter()
            .map(|&p| {
                let (x, y) = self.see(p);
                format!("{},{}", num(x), num(y))
            })
            .collect();
        let w = num(0.01 * self.unit);
        writeln!(
            self.body,
            r#"  <polygon class="{class}" points="{}" fill="{fill}" stroke="black" stroke-width="{w}"/>"#,
            coords.join(" ")
        )
        .unwrap();
    }

    pub fn line(&mut self, a: (f64, f64), b: (f64, f64), class: &str, color: &str, dashed: bool) {
        let (x1, y1) = self.see(a);
        let (x2, y2) = self.see(b);
        let w = num(0.012 * self.unit);
        let dash = if dashed { format!(r#" stroke-dasharray="{},{}""#, num(0.03 * self.unit), num(0.02 * self.unit)) } else { String::new() };
        writeln!(
            self.body,
            r#"  <line class="{class}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="{color}" stroke-width="{w}"{dash}/>"#,
            num(x1),
            num(y1),
            num(x2),
            num(y2)
        )
        .unwrap();
    }

    pub fn cross(&mut self, at: (f64, f64)) {
        let r = 0.025 * self.unit;
        let (x, y) = self.see(at);
        let w = num(0.012 * self.unit);
        writeln!(
            self.body,
            r#"  <path class="node" d="M{},{} L{},{} M{},{} L{},{}" stroke="black" stroke-width="{w}"/>"#,
            num(x - r),
            num(y - r),
            num(x + r),
            num(y + r),
            num(x - r),
            num(y + r),
            num(x + r),
            num(y - r)
        )
        .unwrap();
    }

    pub fn dot(&mut self, at: (f64, f64), class: &str) {
        let (x, y) = self.see(at);
        writeln!(
            self.body,
            r#"  <circle class="{class}" cx="{}" cy="{}" r="{}" fill="black"/>"#,
            num(x),
            num(y),
            num(0.015 * self.unit)
        )
        .unwrap();
    }

    pub fn text(&mut self, at: (f64, f64), label: &str, color: &str) {
        let (x, y) = self.see(at);
        writeln!(
            self.body,
            r#"  <text x="{}" y="{}" font-size="{}" fill="{color}" font-family="serif">{}</text>"#,
            num(x),
            num(y),
            num(0.06 * self.unit),
            escape(label)
        )
        .unwrap();
    }

    pub fn finish(self) -> String {
        let pad = 0.1 * self.unit;
        let (x0, y0) = (self.min.0 - pad, -self.max.1 - pad);
        let (w, h) = (self.max.0 - self.min.0 + 2.0 * pad, self.max.1 - self.min.1 + 2.0 * pad);
        let mut out = String::new();
        writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
        writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{} {} {} {}">"#,
            num(x0),
            num(y0),
            num(w),
            num(h)
        )
        .unwrap();
        out.push_str(&self.body);
        out.push_str("</svg>\n");
        out
    }
}
