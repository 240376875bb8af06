//! Static SVG plots: contour lines by marching squares plus a few primitives.

use qcext::Vec2;
use std::fmt::Write;

const SIZE: f64 = 640.0;
const PALETTE: [&str; 6] = ["#1f4e79", "#2e75b6", "#548235", "#bf9000", "#c55a11", "#7030a0"];

pub fn color(i: usize) -> &'static str {
    PALETTE[i % PALETTE.len()]
}

/// Segments of the level curve `{field = level}` on an `n x n` grid of `[lo, hi]`.
pub fn contour(values: &[f64], n: usize, lo: Vec2, hi: Vec2, level: f64) -> Vec<(Vec2, Vec2)> {
    let at = |i: usize, j: usize| Vec2::new(lo.x + (hi.x - lo.x) * i as f64 / (n - 1) as f64, lo.y + (hi.y - lo.y) * j as f64 / (n - 1) as f64);
    let mut segs = Vec::new();
    for j in 0..n.saturating_sub(1) {
        for i in 0..n - 1 {
            // corners counterclockwise from the lower left
            let c = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
            let v: Vec<f64> = c.iter().map(|&(a, b)| values[b * n + a]).collect();
            let mut cross = Vec::with_capacity(4);
            for e in 0..4 {
                let (a, b) = (e, (e + 1) % 4);
                if (v[a] > level) != (v[b] > level) {
                    let t = if v[a].is_finite() && v[b].is_finite() { (level - v[a]) / (v[b] - v[a]) } else { 0.5 };
                    let (pa, pb) = (at(c[a].0, c[a].1), at(c[b].0, c[b].1));
                    cross.push(pa.lerp(pb, t.clamp(0.0, 1.0)));
                }
            }
            for pair in cross.chunks(2) {
                if let [p, q] = pair {
                    segs.push((*p, *q));
                }
            }
        }
    }
    segs
}

pub struct Svg {
    lo: Vec2,
    hi: Vec2,
    body: String,
}

impl Svg {
    pub fn new(lo: Vec2, hi: Vec2) -> Self {
        Svg { lo, hi, body: String::new() }
    }

    fn px(&self, p: Vec2) -> (f64, f64) {
        let s = SIZE / (self.hi.x - self.lo.x).max(self.hi.y - self.lo.y);
        ((p.x - self.lo.x) * s, SIZE - (p.y - self.lo.y) * s)
    }

    pub fn segments(&mut self, segs: &[(Vec2, Vec2)], stroke: &str, width: f64, dashed: bool) {
        if segs.is_empty() {
            return;
        }
        let mut d = String::new();
        for (a, b) in segs {
            let (a, b) = (self.px(*a), self.px(*b));
            let _ = write!(d, "M{:.2} {:.2}L{:.2} {:.2}", a.0, a.1, b.0, b.1);
        }
        let dash = if dashed { r#" stroke-dasharray="4 3""# } else { "" };
        let _ = writeln!(self.body, r#"<path d="{d}" fill="none" stroke="{stroke}" stroke-width="{width}"{dash}/>"#);
    }

    pub fn line(&mut self, a: Vec2, b: Vec2, stroke: &str, dashed: bool) {
        self.segments(&[(a, b)], stroke, 0.8, dashed);
    }

    pub fn dot(&mut self, p: Vec2, label: &str) {
        let (x, y) = self.px(p);
        let _ = writeln!(self.body, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2.5" fill="black"/>"#);
        if !label.is_empty() {
            let _ = writeln!(self.body, r#"<text x="{:.2}" y="{:.2}" font-size="11">{label}</text>"#, x + 4.0, y - 4.0);
        }
    }

    pub fn caption(&mut self, text: &str) {
        let _ = writeln!(self.body, r#"<text x="8" y="{}" font-size="13">{text}</text>"#, SIZE + 20.0);
    }

    pub fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{h}\" viewBox=\"0 0 {SIZE} {h}\">\n\
             <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{}</svg>\n",
            self.body,
            h = SIZE + 30.0
        )
    }
}
