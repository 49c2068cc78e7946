//! SVG pictures of morphisms: one panel per term, left to right, each with its
//! coefficient. Bottom boundary points sit on the lower edge, top points on the
//! upper edge; every strand is a single cubic Bézier `<path>` and a vertex is a
//! triangle with one `<path>` per leg.

use std::fmt::Write;

use num_traits::Signed;

use crate::enhanced::{EnhancedDiagram, EnhancedMorphism};
use crate::error::{Error, Result};
use crate::scalars::{format_rational, Rational};

pub const RENDER_TERM_CAP: usize = 50;

const STEP: f64 = 30.0;
const LABEL: f64 = 44.0;
const PAD: f64 = 16.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 120.0;
const HEIGHT: f64 = 140.0;

/// Coefficients use a true minus sign.
pub fn coefficient_label(c: &Rational) -> String {
    if c.is_negative() {
        format!("−{}", format_rational(&-c))
    } else {
        format_rational(c)
    }
}

struct Panel<'a> {
    d: &'a EnhancedDiagram,
    left: f64,
}

impl Panel<'_> {
    fn columns(d: &EnhancedDiagram) -> usize {
        d.source().max(d.target()).max(1)
    }

    fn width(d: &EnhancedDiagram) -> f64 {
        LABEL + Self::columns(d) as f64 * STEP + PAD
    }

    fn point(&self, p: usize) -> (f64, f64) {
        let s = self.d.source();
        let (k, y) = if p < s { (p, BOTTOM) } else { (p - s, TOP) };
        (self.left + LABEL + STEP / 2.0 + k as f64 * STEP, y)
    }

    fn strand(&self, out: &mut String, a: (f64, f64), b: (f64, f64)) {
        let (c1, c2) = if a.1 == b.1 {
            // Cup or cap: bulge into the panel, deeper for wider arcs.
            let depth = 18.0 + 0.35 * (b.0 - a.0).abs();
            let dir = if a.1 == TOP { 1.0 } else { -1.0 };
            ((a.0, a.1 + dir * depth), (b.0, b.1 + dir * depth))
        } else {
            let mid = (a.1 + b.1) / 2.0;
            ((a.0, mid), (b.0, mid))
        };
        let _ = writeln!(
            out,
            r#"  <path d="M {:.1} {:.1} C {:.1} {:.1}, {:.1} {:.1}, {:.1} {:.1}" fill="none" stroke="black" stroke-width="1.5"/>"#,
            a.0, a.1, c1.0, c1.1, c2.0, c2.1, b.0, b.1
        );
    }

    fn draw(&self, out: &mut String, coeff: &Rational) {
        let _ = writeln!(
            out,
            r#"  <text x="{:.1}" y="{:.1}" font-family="serif" font-size="16" text-anchor="middle">{}</text>"#,
            self.left + LABEL / 2.0,
            (TOP + BOTTOM) / 2.0 + 5.0,
            coefficient_label(coeff)
        );
        for &(a, b) in self.d.pairs() {
            self.strand(out, self.point(a), self.point(b));
        }
        if let Some(legs) = self.d.delta_legs() {
            let xs: Vec<f64> = legs.iter().map(|&p| self.point(p).0).collect();
            let cx = xs.iter().sum::<f64>() / xs.len() as f64;
            let cy = (TOP + BOTTOM) / 2.0;
            let _ = writeln!(
                out,
                r#"  <polygon points="{:.1},{:.1} {:.1},{:.1} {:.1},{:.1}" fill="white" stroke="black" stroke-width="1.5"/>"#,
                cx - 12.0,
                cy - 6.0,
                cx + 12.0,
                cy - 6.0,
                cx,
                cy + 10.0
            );
            let n = legs.len() as f64;
            for (k, &p) in legs.iter().enumerate() {
                let end = self.point(p);
                let start = if end.1 == TOP {
                    (cx - 9.0 + 18.0 * (k as f64 + 0.5) / n, cy - 6.0)
                } else {
                    (cx, cy + 10.0)
                };
                self.strand(out, start, end);
            }
        }
        for p in 0..self.d.source() + self.d.target() {
            let (x, y) = self.point(p);
            let _ = writeln!(out, r#"  <circle cx="{x:.1}" cy="{y:.1}" r="2"/>"#);
        }
    }
}

pub fn render_svg(f: &EnhancedMorphism) -> Result<String> {
    if f.len() > RENDER_TERM_CAP {
        return Err(Error::CapExceeded {
            what: "rendering".into(),
            terms: f.len().to_string(),
            cap: RENDER_TERM_CAP,
        });
    }
    let width: f64 = f.terms().map(|(d, _)| Panel::width(d)).sum::<f64>().max(LABEL + PAD);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{HEIGHT:.0}" viewBox="0 0 {width:.0} {HEIGHT:.0}">"#
    );
    let mut left = 0.0;
    for (d, c) in f.terms() {
        Panel { d, left }.draw(&mut out, c);
        left += Panel::width(d);
    }
    if f.is_zero() {
        let _ = writeln!(
            out,
            r#"  <text x="{:.1}" y="{:.1}" font-family="serif" font-size="16" text-anchor="middle">0</text>"#,
            width / 2.0,
            (TOP + BOTTOM) / 2.0 + 5.0
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}
