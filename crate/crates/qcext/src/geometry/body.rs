use super::base::Base;
use super::cone::{Cone2, ConeKind};
use super::halfplane::{clip_line, convex_hull, dedupe, edges, HalfPlane};
use super::spec::BodySpec;
use super::vec2::Vec2;
use crate::{Error, Result};
use rand::Rng;
use std::f64::consts::PI;

/// One maximal smooth piece of the boundary: an arc of the base curve (disk angle or
/// epigraph local abscissa) or a segment of a cut line (parameter along `cut.point_at`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Piece {
    Arc { t0: f64, t1: f64 },
    Seg { cut: usize, s0: f64, s1: f64 },
}

impl Piece {
    pub fn range(&self) -> (f64, f64) {
        match *self {
            Piece::Arc { t0, t1 } => (t0, t1),
            Piece::Seg { s0, s1, .. } => (s0, s1),
        }
    }

    pub fn is_seg(&self) -> bool {
        matches!(self, Piece::Seg { .. })
    }
}

/// A sampled boundary point with the piece and parameter that produced it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryPoint {
    pub p: Vec2,
    pub piece: usize,
    pub t: f64,
}

/// Closed counterclockwise arc of unit normals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormalArc {
    pub from: Vec2,
    pub to: Vec2,
}

impl NormalArc {
    pub fn opening(&self) -> f64 {
        self.from.cross(self.to).atan2(self.from.dot(self.to))
    }

    pub fn is_singleton(&self, tol: f64) -> bool {
        self.opening().abs() <= tol
    }

    pub fn contains(&self, n: Vec2, tol: f64) -> bool {
        let n = n.normalized();
        let a = self.from.cross(n).atan2(self.from.dot(n));
        a >= -tol && a <= self.opening() + tol
    }
}

/// Set of maximizers of a linear functional. For unbounded faces `a` and `b` are two
/// finite points of the face.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Face {
    pub a: Vec2,
    pub b: Vec2,
    pub bounded: bool,
}

impl Face {
    pub fn midpoint(&self) -> Vec2 {
        self.a.lerp(self.b, 0.5)
    }

    pub fn length(&self) -> f64 {
        if self.bounded {
            self.a.dist(self.b)
        } else {
            f64::INFINITY
        }
    }
}

/// Closed convex proper subset of the plane with nonempty interior: an optional smooth
/// base (disk or transformed epigraph) intersected with finitely many half-planes.
#[derive(Clone, Debug)]
pub struct Body2 {
    spec: BodySpec,
    base: Option<Base>,
    cuts: Vec<HalfPlane>,
    pieces: Vec<Piece>,
    witness: Vec2,
    radius: f64,
    rec: Cone2,
}

impl PartialEq for Body2 {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

const PIECE_TOL: f64 = 1e-12;

impl Body2 {
    pub fn from_spec(spec: BodySpec) -> Result<Body2> {
        let (base, cuts) = spec.to_parts()?;
        Body2::assemble(spec, base, cuts)
    }

    pub fn from_json(s: &str) -> Result<Body2> {
        let spec: BodySpec = serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))?;
        Body2::from_spec(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.spec).expect("spec serializes")
    }

    pub fn disk(center: Vec2, radius: f64) -> Result<Body2> {
        Body2::from_spec(BodySpec::Disk { center: center.into(), radius, cuts: vec![] })
    }

    pub fn halfplanes(items: &[HalfPlane]) -> Result<Body2> {
        Body2::from_spec(BodySpec::Halfplanes { items: items.iter().map(Into::into).collect() })
    }

    /// Convex polygon from counterclockwise vertices.
    pub fn polygon(vertices: &[Vec2]) -> Result<Body2> {
        Body2::from_spec(BodySpec::Polychain { vertices: vertices.iter().map(|v| (*v).into()).collect(), rays: None })
    }

    /// Axis-aligned box `[x0, x1] x [y0, y1]`.
    pub fn rect(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Body2> {
        Body2::polygon(&[Vec2::new(x0, y0), Vec2::new(x1, y0), Vec2::new(x1, y1), Vec2::new(x0, y1)])
    }

    /// Same body intersected with extra half-planes.
    pub fn cut(&self, extra: &[HalfPlane]) -> Result<Body2> {
        Body2::from_spec(self.spec.with_cuts(extra))
    }

    /// Image under an invertible affine map.
    pub fn mapped(&self, a: &super::base::Affine) -> Result<Body2> {
        Body2::from_spec(self.spec.mapped(a)?)
    }

    fn assemble(spec: BodySpec, base: Option<Base>, cuts: Vec<HalfPlane>) -> Result<Body2> {
        let cuts = dedupe(&cuts);
        if base.is_none() && cuts.is_empty() {
            return Err(Error::InvalidBody("the whole plane is not a proper subset".into()));
        }
        let mut pieces = Vec::new();
        match &base {
            None => {
                for e in edges(&cuts, PIECE_TOL, PIECE_TOL) {
                    pieces.push(Piece::Seg { cut: e.index, s0: e.s0, s1: e.s1 });
                }
            }
            Some(b) => {
                for (t0, t1) in arc_set(b, &cuts) {
                    pieces.push(Piece::Arc { t0, t1 });
                }
                for (i, h) in cuts.iter().enumerate() {
                    let Some((l0, l1)) = b.line_interval(h.anchor(), h.direction()) else { continue };
                    let Some((c0, c1)) = clip_line(h, &cuts, Some(i), PIECE_TOL) else { continue };
                    let (s0, s1) = (l0.max(c0), l1.min(c1));
                    if s1 - s0 > PIECE_TOL * (1.0 + s0.abs().min(s1.abs())) {
                        pieces.push(Piece::Seg { cut: i, s0, s1 });
                    }
                }
            }
        }
        if pieces.is_empty() {
            return Err(Error::InvalidBody("empty body".into()));
        }
        let o = Vec2::zero();
        let mut cones: Vec<Cone2> = cuts.iter().map(|h| Cone2::half_plane(o, h.normal.perp())).collect();
        if let Some(b) = &base {
            cones.push(b.recession());
        }
        let rec = Cone2::intersect_all(o, &cones);
        let mut body = Body2 { spec, base, cuts, pieces, witness: o, radius: 0.0, rec };
        body.find_witness()?;
        Ok(body)
    }

    fn find_witness(&mut self) -> Result<()> {
        let mut cands: Vec<Vec2> = Vec::new();
        let (pts, inward) = self.rough_points();
        let n = pts.len().max(1) as f64;
        let mean = pts.iter().fold(Vec2::zero(), |a, p| a + *p) / n;
        let spread = pts.iter().map(|p| p.dist(mean)).fold(1e-6, f64::max);
        let hull = convex_hull(&pts);
        if let Some(c) = area_centroid(&hull) {
            cands.push(c);
        }
        cands.push(mean);
        if let Some(b) = &self.base {
            let r = b.reference();
            cands.push(r);
            cands.push(r.lerp(mean, 0.5));
        }
        if inward.norm() > 0.0 {
            cands.push(mean + inward.normalized() * (0.5 * spread));
        }
        // capped so unbounded bodies keep the witness near their finite features
        let score = |p: Vec2| if self.inside(p) { self.interior_distance(p).min(spread) } else { 0.0 };
        let mut best = (mean, 0.0);
        for c in cands {
            if !c.is_finite() {
                continue;
            }
            let s = score(c);
            if s > best.1 {
                best = (c, s);
            }
        }
        // pattern search toward the inscribed-ball center
        let mut step = if best.1 > 0.0 { best.1 } else { 0.25 * spread };
        for _ in 0..40 {
            let mut moved = false;
            for k in 0..8 {
                let c = best.0 + Vec2::from_angle(k as f64 * PI / 4.0) * step;
                let s = score(c);
                if s > best.1 * (1.0 + 1e-12) {
                    best = (c, s);
                    moved = true;
                }
            }
            if !moved {
                step *= 0.5;
            }
        }
        if !(best.1 > 0.0) {
            return Err(Error::InvalidBody("body has empty interior".into()));
        }
        self.witness = best.0;
        self.radius = best.1;
        Ok(())
    }

    /// Boundary points covering the finite features, plus the mean inward direction of
    /// the cuts; used to seed the witness search.
    fn rough_points(&self) -> (Vec<Vec2>, Vec2) {
        let mut finite = Vec::new();
        for p in &self.pieces {
            let (a, b) = p.range();
            for t in [a, b] {
                if t.is_finite() {
                    finite.push(self.piece_point(p, t));
                }
            }
        }
        let reference = match &self.base {
            Some(b) => b.reference(),
            None => {
                if finite.is_empty() {
                    self.cuts[0].anchor()
                } else {
                    finite.iter().fold(Vec2::zero(), |a, p| a + *p) / finite.len() as f64
                }
            }
        };
        let scale = 1.0 + finite.iter().map(|p| p.dist(reference)).fold(0.0, f64::max);
        let mut pts = finite.clone();
        for p in &self.pieces {
            match *p {
                Piece::Seg { cut, s0, s1 } => {
                    let h = &self.cuts[cut];
                    let sc = h.param_of(reference);
                    let lo = if s0.is_finite() { s0 } else { s1.min(sc) - scale };
                    let hi = if s1.is_finite() { s1 } else { s0.max(sc) + scale };
                    pts.push(h.point_at(lo));
                    pts.push(h.point_at(hi));
                }
                Piece::Arc { t0, t1 } => {
                    let (lo, hi) = match self.base.as_ref().unwrap() {
                        Base::Disk { .. } => (t0, t1),
                        Base::Epigraph(e) => {
                            let (w0, w1) = e.param_window(reference, 4.0 * scale);
                            let lo = if t0.is_finite() { t0 } else { w0.min(t1 - 1.0) };
                            let hi = if t1.is_finite() { t1 } else { w1.max(t0 + 1.0) };
                            (lo, hi)
                        }
                    };
                    for i in 0..=16 {
                        pts.push(self.piece_point(p, lo + (hi - lo) * i as f64 / 16.0));
                    }
                }
            }
        }
        let inward = self.cuts.iter().fold(Vec2::zero(), |a, h| a - h.normal);
        (pts.into_iter().filter(|p| p.is_finite()).collect(), inward)
    }

    pub fn spec(&self) -> &BodySpec {
        &self.spec
    }

    pub fn base(&self) -> Option<&Base> {
        self.base.as_ref()
    }

    pub fn cuts(&self) -> &[HalfPlane] {
        &self.cuts
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Center of a ball of radius [`Body2::inradius`] inside the body.
    pub fn witness(&self) -> Vec2 {
        self.witness
    }

    pub fn inradius(&self) -> f64 {
        self.radius
    }

    pub fn recession_cone(&self) -> Cone2 {
        self.rec
    }

    pub fn is_bounded(&self) -> bool {
        self.rec.kind == ConeKind::Point
    }

    /// No curved boundary pieces.
    pub fn is_polyhedral(&self) -> bool {
        self.base.is_none()
    }

    pub fn piece_point(&self, piece: &Piece, t: f64) -> Vec2 {
        match *piece {
            Piece::Arc { .. } => self.base.as_ref().unwrap().point(t),
            Piece::Seg { cut, .. } => self.cuts[cut].point_at(t),
        }
    }

    pub fn piece_normal(&self, piece: &Piece, t: f64) -> Vec2 {
        match *piece {
            Piece::Arc { .. } => self.base.as_ref().unwrap().normal(t),
            Piece::Seg { cut, .. } => self.cuts[cut].normal,
        }
    }

    /// Exact membership (no tolerance).
    pub fn inside(&self, p: Vec2) -> bool {
        self.cuts.iter().all(|h| h.value(p) <= 0.0) && self.base.as_ref().map_or(true, |b| b.contains(p))
    }

    /// Whether `p` is within distance `tol` of the body.
    pub fn contains(&self, p: Vec2, tol: f64) -> bool {
        if self.cuts.iter().any(|h| h.value(p) > tol) {
            return false;
        }
        if let Some(b) = &self.base {
            if b.distance_lower_bound(p) > tol {
                return false;
            }
        }
        if self.inside(p) {
            return true;
        }
        tol > 0.0 && self.project(p).1 <= tol
    }

    /// Nearest point on one piece: `(t, point, distance)`.
    pub fn nearest_on_piece(&self, p: Vec2, piece: &Piece, bound: f64) -> (f64, Vec2, f64) {
        match *piece {
            Piece::Seg { cut, s0, s1 } => {
                let h = &self.cuts[cut];
                let s = h.param_of(p).clamp(s0, s1);
                let z = h.point_at(s);
                (s, z, z.dist(p))
            }
            Piece::Arc { t0, t1 } => self.base.as_ref().unwrap().nearest_on_arc(p, t0, t1, bound),
        }
    }

    /// Nearest boundary point among the pieces selected by `filter`:
    /// `(piece index, t, point, distance)`.
    fn nearest_among(&self, p: Vec2, filter: impl Fn(&Piece) -> bool) -> (usize, f64, Vec2, f64) {
        let mut best = (usize::MAX, 0.0, p, f64::INFINITY);
        // segments first: they are cheap and tighten the search bound for arcs
        let order = self.pieces.iter().enumerate().filter(|(_, q)| q.is_seg()).chain(self.pieces.iter().enumerate().filter(|(_, q)| !q.is_seg()));
        for (i, piece) in order {
            if !filter(piece) {
                continue;
            }
            let (t, z, d) = self.nearest_on_piece(p, piece, best.3);
            if d < best.3 {
                best = (i, t, z, d);
            }
        }
        best
    }

    /// Nearest boundary point: `(piece index, t, point, distance)`.
    pub fn nearest_boundary(&self, p: Vec2) -> (usize, f64, Vec2, f64) {
        self.nearest_among(p, |_| true)
    }

    /// Distance from `p` to the boundary (for any `p`).
    pub fn boundary_distance(&self, p: Vec2) -> f64 {
        self.nearest_boundary(p).3
    }

    /// Distance from an interior point to the boundary; 0 outside.
    pub fn interior_distance(&self, p: Vec2) -> f64 {
        if !self.inside(p) {
            return 0.0;
        }
        self.boundary_distance(p)
    }

    /// Negative inside, positive outside.
    pub fn signed_distance(&self, p: Vec2) -> f64 {
        if self.inside(p) {
            -self.boundary_distance(p)
        } else {
            self.project(p).1
        }
    }

    /// Nearest point of the body and the distance to it.
    pub fn project(&self, p: Vec2) -> (Vec2, f64) {
        if self.inside(p) {
            return (p, 0.0);
        }
        let segs = self.pieces.iter().any(|q| q.is_seg());
        match &self.base {
            None => {
                let (_, _, z, d) = self.nearest_boundary(p);
                (z, d)
            }
            Some(b) => {
                if !b.contains(p) {
                    let (q, _) = b.project_exterior(p);
                    let ok = self.cuts.iter().all(|h| h.value(q) <= 1e-12 * (1.0 + q.norm()));
                    if ok || !segs {
                        return (q, q.dist(p));
                    }
                }
                let (_, _, z, d) = if segs { self.nearest_among(p, |q| q.is_seg()) } else { self.nearest_boundary(p) };
                (z, d)
            }
        }
    }

    /// Parameter interval `{s : p0 + s d in C}`.
    pub fn line_interval(&self, p0: Vec2, d: Vec2) -> Option<(f64, f64)> {
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for h in &self.cuts {
            let a = h.normal.dot(d);
            let b = h.offset - h.normal.dot(p0);
            if a.abs() <= 1e-300 {
                if b < 0.0 {
                    return None;
                }
                continue;
            }
            let s = b / a;
            if a > 0.0 {
                hi = hi.min(s);
            } else {
                lo = lo.max(s);
            }
        }
        if let Some(base) = &self.base {
            let (a, b) = base.line_interval(p0, d)?;
            lo = lo.max(a);
            hi = hi.min(b);
        }
        if lo <= hi {
            Some((lo, hi))
        } else {
            None
        }
    }

    fn rec_positive(&self, n: Vec2) -> bool {
        let eps = 1e-12;
        let [d0, d1] = self.rec.dirs;
        match self.rec.kind {
            ConeKind::Point => false,
            ConeKind::Ray => n.dot(d0) > eps,
            ConeKind::Sector => n.dot(d0) > eps || n.dot(d1) > eps,
            ConeKind::HalfPlane => n.dot(d0).abs() > eps || n.dot(d0.perp()) > eps,
            ConeKind::Line => n.dot(d0).abs() > eps,
            ConeKind::Full => true,
        }
    }

    /// Supremum of `n . p` over one piece and a maximizer when attained.
    fn piece_support(&self, n: Vec2, piece: &Piece) -> (f64, Option<f64>) {
        match *piece {
            Piece::Seg { cut, s0, s1 } => {
                let h = &self.cuts[cut];
                let slope = n.dot(h.direction());
                let c = n.dot(h.anchor());
                if slope.abs() <= 1e-14 {
                    let t = if s0.is_finite() { s0 } else if s1.is_finite() { s1 } else { 0.0 };
                    return (c, Some(t));
                }
                let t = if slope > 0.0 { s1 } else { s0 };
                if t.is_finite() {
                    (c + slope * t, Some(t))
                } else if slope.abs() <= 1e-12 {
                    // rounding along a recession ray; same threshold as rec_positive
                    let t = if s0.is_finite() { s0 } else if s1.is_finite() { s1 } else { 0.0 };
                    (c + slope * t, Some(t))
                } else {
                    (f64::INFINITY, None)
                }
            }
            Piece::Arc { t0, t1 } => self.base.as_ref().unwrap().arc_support(n, t0, t1),
        }
    }

    /// `sup {n . p : p in C}` for a nonzero direction `n` (normalized internally).
    pub fn support(&self, n: Vec2) -> f64 {
        let n = n.normalized();
        if self.rec_positive(n) {
            return f64::INFINITY;
        }
        self.pieces.iter().map(|q| self.piece_support(n, q).0).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Face of maximizers of `n . p`, or `None` if the supremum is infinite or not attained.
    pub fn support_face(&self, n: Vec2) -> Option<Face> {
        let n = n.normalized();
        let h = self.support(n);
        if !h.is_finite() {
            return None;
        }
        let tol = 1e-9 * (1.0 + h.abs());
        let u = n.perp();
        let mut pts: Vec<Vec2> = Vec::new();
        let mut bounded = true;
        for piece in &self.pieces {
            let (v, t) = self.piece_support(n, piece);
            if v < h - tol {
                continue;
            }
            match *piece {
                Piece::Seg { cut, s0, s1 } if self.cuts[cut].normal.dot(n) > 1.0 - 1e-12 => {
                    let hp = &self.cuts[cut];
                    for s in [s0, s1] {
                        if s.is_finite() {
                            pts.push(hp.point_at(s));
                        } else {
                            bounded = false;
                            let f = if s0.is_finite() { s0 } else if s1.is_finite() { s1 } else { 0.0 };
                            pts.push(hp.point_at(f + s.signum()));
                        }
                    }
                }
                _ => {
                    if let Some(t) = t {
                        pts.push(self.piece_point(piece, t));
                    }
                }
            }
        }
        if pts.is_empty() {
            return None;
        }
        let key = |p: &Vec2| u.dot(*p);
        let a = *pts.iter().min_by(|x, y| key(x).partial_cmp(&key(y)).unwrap()).unwrap();
        let b = *pts.iter().max_by(|x, y| key(x).partial_cmp(&key(y)).unwrap()).unwrap();
        Some(Face { a, b, bounded })
    }

    /// Outward unit normals of all supporting lines at a boundary point `x`.
    pub fn supporting_normals(&self, x: Vec2, tol: f64) -> Result<NormalArc> {
        if self.inside(x) {
            if self.boundary_distance(x) > tol {
                return Err(Error::InteriorPoint);
            }
        } else {
            let d = self.project(x).1;
            if d > tol {
                return Err(Error::NotOnBoundary(d));
            }
        }
        let reach = tol.max(1e-12) * 2.0;
        let mut normals: Vec<Vec2> = Vec::new();
        for piece in &self.pieces {
            let (t, _, d) = self.nearest_on_piece(x, piece, f64::INFINITY);
            if d <= reach {
                normals.push(self.piece_normal(piece, t));
            }
        }
        if normals.is_empty() {
            let (i, t, _, _) = self.nearest_boundary(x);
            normals.push(self.piece_normal(&self.pieces[i], t));
        }
        let n0 = normals[0];
        let ang = |n: &Vec2| n0.cross(*n).atan2(n0.dot(*n));
        let from = *normals.iter().min_by(|a, b| ang(a).partial_cmp(&ang(b)).unwrap()).unwrap();
        let to = *normals.iter().max_by(|a, b| ang(a).partial_cmp(&ang(b)).unwrap()).unwrap();
        Ok(NormalArc { from, to })
    }

    /// `K(x, C)`: intersection of the supporting half-planes at `x`.
    pub fn k_cone(&self, x: Vec2, tol: f64) -> Result<Body2> {
        let arc = self.supporting_normals(x, tol)?;
        let mut hps = vec![HalfPlane::through(arc.from, x)];
        if !arc.is_singleton(1e-12) {
            hps.push(HalfPlane::through(arc.to, x));
        }
        Body2::halfplanes(&hps)
    }

    /// Parameter sub-range of a piece whose points may lie within `radius` of `center`.
    fn window_range(&self, piece: &Piece, center: Vec2, radius: f64) -> Option<(f64, f64)> {
        let (a, b) = piece.range();
        match *piece {
            Piece::Seg { cut, .. } => {
                let h = &self.cuts[cut];
                let sc = h.param_of(center);
                let perp = h.value(center).abs();
                if perp > radius {
                    return None;
                }
                let half = (radius * radius - perp * perp).sqrt();
                let (lo, hi) = (a.max(sc - half), b.min(sc + half));
                (lo <= hi).then_some((lo, hi))
            }
            Piece::Arc { .. } => match self.base.as_ref().unwrap() {
                Base::Disk { .. } => Some((a, b)),
                Base::Epigraph(e) => {
                    let (w0, w1) = e.param_window(center, radius);
                    let (lo, hi) = (a.max(w0), b.min(w1));
                    (lo <= hi).then_some((lo, hi))
                }
            },
        }
    }

    /// About `n` boundary points within `radius` of `center`, spread by arc length.
    /// Piece endpoints inside the window are always included.
    pub fn sample_boundary(&self, center: Vec2, radius: f64, n: usize) -> Vec<BoundaryPoint> {
        let fine = (4 * n).clamp(256, 16384);
        let mut polys: Vec<(usize, Vec<(f64, Vec2)>)> = Vec::new();
        for (i, piece) in self.pieces.iter().enumerate() {
            let Some((lo, hi)) = self.window_range(piece, center, radius) else { continue };
            let m = if piece.is_seg() { 1 } else { fine };
            let pts: Vec<(f64, Vec2)> = (0..=m)
                .map(|k| {
                    let t = if m == 0 { lo } else { lo + (hi - lo) * k as f64 / m as f64 };
                    (t, self.piece_point(piece, t))
                })
                .collect();
            polys.push((i, pts));
        }
        let inw = |p: Vec2| p.dist(center) <= radius * (1.0 + 1e-12);
        let mut lens = Vec::new();
        let mut total = 0.0;
        for (_, pts) in &polys {
            let mut l = 0.0;
            for w in pts.windows(2) {
                if inw(w[0].1) && inw(w[1].1) {
                    l += w[0].1.dist(w[1].1);
                }
            }
            lens.push(l);
            total += l;
        }
        let mut out = Vec::new();
        for ((i, pts), len) in polys.iter().zip(lens) {
            let piece = &self.pieces[*i];
            let (a, b) = piece.range();
            for t in [a, b] {
                if t.is_finite() {
                    let p = self.piece_point(piece, t);
                    if inw(p) {
                        out.push(BoundaryPoint { p, piece: *i, t });
                    }
                }
            }
            if !(len > 0.0) || total <= 0.0 {
                continue;
            }
            let k = ((n as f64 * len / total).round() as usize).max(2);
            let step = len / k as f64;
            let mut acc = 0.0;
            let mut next = 0.5 * step;
            for w in pts.windows(2) {
                if !(inw(w[0].1) && inw(w[1].1)) {
                    continue;
                }
                let l = w[0].1.dist(w[1].1);
                while next <= acc + l && l > 0.0 {
                    let f = (next - acc) / l;
                    let t = w[0].0 + f * (w[1].0 - w[0].0);
                    out.push(BoundaryPoint { p: self.piece_point(piece, t), piece: *i, t });
                    next += step;
                }
                acc += l;
            }
        }
        out
    }

    /// Up to `n` uniformly distributed points of the body within `radius` of `center`.
    pub fn sample_interior<R: Rng>(&self, rng: &mut R, center: Vec2, radius: f64, n: usize) -> Vec<Vec2> {
        let mut out = Vec::with_capacity(n);
        let mut tries = 0;
        while out.len() < n && tries < 400 * n.max(1) {
            tries += 1;
            let p = center + Vec2::new(rng.gen_range(-radius..=radius), rng.gen_range(-radius..=radius));
            if p.dist(center) <= radius && self.inside(p) {
                out.push(p);
            }
        }
        out
    }

    /// Default sampling window: the witness ball scaled by `mult`.
    pub fn window(&self, mult: f64) -> (Vec2, f64) {
        (self.witness, mult * self.radius)
    }
}

/// Maximal parameter intervals of the base curve satisfying every cut.
fn arc_set(base: &Base, cuts: &[HalfPlane]) -> Vec<(f64, f64)> {
    let mut bps: Vec<f64> = cuts.iter().flat_map(|h| base.cut_roots(h)).filter(|t| t.is_finite()).collect();
    bps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    bps.dedup();
    let ok = |t: f64| {
        let p = base.point(t);
        p.is_finite() && cuts.iter().all(|h| h.value(p) <= PIECE_TOL * (1.0 + p.norm()))
    };
    let mut iv: Vec<(f64, f64, bool)> = Vec::new();
    if base.is_cyclic() {
        if bps.is_empty() {
            return if ok(0.0) { vec![(0.0, 2.0 * PI)] } else { vec![] };
        }
        let m = bps.len();
        for i in 0..m {
            let a = bps[i];
            let b = if i + 1 < m { bps[i + 1] } else { bps[0] + 2.0 * PI };
            iv.push((a, b, b > a && ok(0.5 * (a + b))));
        }
        if iv.iter().all(|x| x.2) {
            return vec![(bps[0], bps[0] + 2.0 * PI)];
        }
        // rotate so the list starts after an excluded interval
        let start = iv.iter().position(|x| !x.2).unwrap() + 1;
        let mut rot: Vec<(f64, f64, bool)> = Vec::new();
        for k in 0..m {
            let (a, b, f) = iv[(start + k) % m];
            let shift = if start + k >= m { 2.0 * PI } else { 0.0 };
            rot.push((a + shift, b + shift, f));
        }
        return merge(&rot);
    }
    if bps.is_empty() {
        return if ok(0.0) { vec![(f64::NEG_INFINITY, f64::INFINITY)] } else { vec![] };
    }
    let m = bps.len();
    iv.push((f64::NEG_INFINITY, bps[0], ok(bps[0] - 1.0)));
    for i in 0..m - 1 {
        let (a, b) = (bps[i], bps[i + 1]);
        iv.push((a, b, b > a && ok(0.5 * (a + b))));
    }
    iv.push((bps[m - 1], f64::INFINITY, ok(bps[m - 1] + 1.0)));
    merge(&iv)
}

fn merge(iv: &[(f64, f64, bool)]) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::new();
    let mut prev_kept = false;
    for &(a, b, keep) in iv {
        if !keep {
            prev_kept = false;
            continue;
        }
        if prev_kept {
            out.last_mut().unwrap().1 = b;
        } else {
            out.push((a, b));
        }
        prev_kept = true;
    }
    out
}

/// Area centroid of a counterclockwise polygon, if it has positive area.
pub fn area_centroid(poly: &[Vec2]) -> Option<Vec2> {
    if poly.len() < 3 {
        return None;
    }
    let o = poly[0];
    let mut a = 0.0;
    let mut c = Vec2::zero();
    for i in 1..poly.len() - 1 {
        let (p, q) = (poly[i] - o, poly[i + 1] - o);
        let w = p.cross(q);
        a += w;
        c += (p + q) * w;
    }
    if a.abs() <= 1e-300 {
        return None;
    }
    Some(o + c / (3.0 * a))
}
