use super::body::{Body2, Piece};
use super::vec2::Vec2;

/// Closed parameter interval on one boundary piece (`t0 == t1` for a single point).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArcPart {
    pub piece: usize,
    pub t0: f64,
    pub t1: f64,
}

/// A union of boundary pieces of `parent`.
#[derive(Clone, Debug)]
pub struct BoundaryArc {
    pub parent: Body2,
    pub parts: Vec<ArcPart>,
}

impl BoundaryArc {
    pub fn empty(parent: Body2) -> Self {
        BoundaryArc { parent, parts: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        self.parts.iter().all(|p| p.t0.is_finite() && p.t1.is_finite())
    }

    pub fn point(&self, part: &ArcPart, t: f64) -> Vec2 {
        self.parent.piece_point(&self.parent.pieces()[part.piece], t)
    }

    /// The part as a piece of the parent restricted to `[t0, t1]`.
    pub fn part_piece(&self, part: &ArcPart) -> Piece {
        match self.parent.pieces()[part.piece] {
            Piece::Arc { .. } => Piece::Arc { t0: part.t0, t1: part.t1 },
            Piece::Seg { cut, .. } => Piece::Seg { cut, s0: part.t0, s1: part.t1 },
        }
    }

    /// Distance from `p` to the union of the parts (infinite when empty).
    pub fn distance(&self, p: Vec2) -> f64 {
        self.parts
            .iter()
            .map(|part| self.parent.nearest_on_piece(p, &self.part_piece(part), f64::INFINITY).2)
            .fold(f64::INFINITY, f64::min)
    }

    /// Finite endpoints of all parts.
    pub fn endpoints(&self) -> Vec<Vec2> {
        let mut out = Vec::new();
        for part in &self.parts {
            for t in [part.t0, part.t1] {
                if t.is_finite() {
                    out.push(self.point(part, t));
                }
            }
        }
        out
    }

    /// `n` points per part, uniform in the parameter; infinite ends are truncated at
    /// `reach` parameter units past the finite end.
    pub fn sample(&self, n: usize, reach: f64) -> Vec<Vec2> {
        let mut out = Vec::new();
        for part in &self.parts {
            let (mut a, mut b) = (part.t0, part.t1);
            if !a.is_finite() && !b.is_finite() {
                a = -reach;
                b = reach;
            } else if !a.is_finite() {
                a = b - reach;
            } else if !b.is_finite() {
                b = a + reach;
            }
            if a == b || n < 2 {
                out.push(self.point(part, a));
                continue;
            }
            for i in 0..n {
                out.push(self.point(part, a + (b - a) * i as f64 / (n - 1) as f64));
            }
        }
        out
    }

    /// Sum of chord lengths of a fine polyline (infinite for unbounded parts).
    pub fn length(&self) -> f64 {
        let mut total = 0.0;
        for part in &self.parts {
            if !(part.t0.is_finite() && part.t1.is_finite()) {
                return f64::INFINITY;
            }
            let m = if self.parent.pieces()[part.piece].is_seg() { 1 } else { 256 };
            let mut prev = self.point(part, part.t0);
            for i in 1..=m {
                let p = self.point(part, part.t0 + (part.t1 - part.t0) * i as f64 / m as f64);
                total += prev.dist(p);
                prev = p;
            }
        }
        total
    }
}
