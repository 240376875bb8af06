use super::vec2::Vec2;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConeKind {
    /// Only the apex.
    Point,
    Ray,
    /// Pointed sector with opening in (0, pi).
    Sector,
    HalfPlane,
    Line,
    Full,
}

/// Closed convex cone `apex + {directions}`; `dirs` are the boundary directions in
/// counterclockwise order (equal for a ray, opposite for a half-plane or line).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cone2 {
    pub apex: Vec2,
    pub kind: ConeKind,
    pub dirs: [Vec2; 2],
}

const ANG_TOL: f64 = 1e-10;

impl Cone2 {
    pub fn point(apex: Vec2) -> Self {
        Cone2 { apex, kind: ConeKind::Point, dirs: [Vec2::zero(); 2] }
    }

    pub fn full(apex: Vec2) -> Self {
        Cone2 { apex, kind: ConeKind::Full, dirs: [Vec2::zero(); 2] }
    }

    pub fn ray(apex: Vec2, d: Vec2) -> Self {
        let d = d.normalized();
        Cone2 { apex, kind: ConeKind::Ray, dirs: [d, d] }
    }

    pub fn line(apex: Vec2, d: Vec2) -> Self {
        let d = d.normalized();
        Cone2 { apex, kind: ConeKind::Line, dirs: [d, -d] }
    }

    /// Half-plane cone lying to the left of `d`.
    pub fn half_plane(apex: Vec2, d: Vec2) -> Self {
        let d = d.normalized();
        Cone2 { apex, kind: ConeKind::HalfPlane, dirs: [d, -d] }
    }

    /// Cone spanned counterclockwise from `d0` to `d1`; the opening must not exceed pi.
    pub fn span(apex: Vec2, d0: Vec2, d1: Vec2) -> Self {
        let (d0, d1) = (d0.normalized(), d1.normalized());
        let c = d0.cross(d1);
        let dot = d0.dot(d1);
        if c.abs() <= ANG_TOL && dot > 0.0 {
            Cone2::ray(apex, d0)
        } else if c.abs() <= ANG_TOL {
            Cone2::half_plane(apex, d0)
        } else if c > 0.0 {
            Cone2 { apex, kind: ConeKind::Sector, dirs: [d0, d1] }
        } else {
            // reflex opening: not convex, callers pass the arc the other way round
            Cone2 { apex, kind: ConeKind::Sector, dirs: [d1, d0] }
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.kind == ConeKind::Point
    }

    /// Opening angle in radians (0 for a point or ray, pi for half-planes, 2 pi for the plane).
    pub fn opening(&self) -> f64 {
        match self.kind {
            ConeKind::Point | ConeKind::Ray | ConeKind::Line => 0.0,
            ConeKind::Sector => self.dirs[0].cross(self.dirs[1]).atan2(self.dirs[0].dot(self.dirs[1])),
            ConeKind::HalfPlane => std::f64::consts::PI,
            ConeKind::Full => 2.0 * std::f64::consts::PI,
        }
    }

    pub fn contains_dir(&self, d: Vec2, tol: f64) -> bool {
        let n = d.norm();
        if n == 0.0 {
            return true;
        }
        let d = d / n;
        let [d0, d1] = self.dirs;
        match self.kind {
            ConeKind::Point => false,
            ConeKind::Ray => d0.cross(d).abs() <= tol && d0.dot(d) > 0.0,
            ConeKind::Line => d0.cross(d).abs() <= tol,
            ConeKind::HalfPlane => d0.cross(d) >= -tol,
            ConeKind::Sector => d0.cross(d) >= -tol && d.cross(d1) >= -tol && d.dot(d0 + d1) > -tol,
            ConeKind::Full => true,
        }
    }

    pub fn contains(&self, p: Vec2, tol: f64) -> bool {
        self.contains_dir(p - self.apex, tol)
    }

    /// Boundary directions worth testing when intersecting cones.
    fn candidates(&self) -> Vec<Vec2> {
        match self.kind {
            ConeKind::Point | ConeKind::Full => vec![],
            ConeKind::Ray => vec![self.dirs[0]],
            _ => vec![self.dirs[0], self.dirs[1]],
        }
    }

    /// Intersection of direction sets (apexes are ignored; the result uses `apex`).
    pub fn intersect_all(apex: Vec2, cones: &[Cone2]) -> Cone2 {
        if cones.iter().all(|c| c.kind == ConeKind::Full) {
            return Cone2::full(apex);
        }
        if cones.iter().any(|c| c.kind == ConeKind::Point) {
            return Cone2::point(apex);
        }
        let inside = |d: Vec2| cones.iter().all(|c| c.contains_dir(d, ANG_TOL));
        let mut s: Vec<Vec2> = Vec::new();
        for c in cones {
            for d in c.candidates() {
                if inside(d) && !s.iter().any(|e| (*e - d).norm() < 1e-9) {
                    s.push(d);
                }
            }
        }
        if s.is_empty() {
            return Cone2::point(apex);
        }
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                if (s[i] + s[j]).norm() < 1e-9 {
                    let d = s[i];
                    let l = inside(d.perp());
                    let r = inside(-d.perp());
                    return match (l, r) {
                        (true, true) => Cone2::full(apex),
                        (true, false) => Cone2::half_plane(apex, d),
                        (false, true) => Cone2::half_plane(apex, -d),
                        (false, false) => Cone2::line(apex, d),
                    };
                }
            }
        }
        let mut b = Vec2::zero();
        for d in &s {
            b += *d;
        }
        let b = b.normalized();
        let ang = |d: Vec2| b.cross(d).atan2(b.dot(d));
        let lo = s.iter().copied().min_by(|x, y| ang(*x).partial_cmp(&ang(*y)).unwrap()).unwrap();
        let hi = s.iter().copied().max_by(|x, y| ang(*x).partial_cmp(&ang(*y)).unwrap()).unwrap();
        Cone2::span(apex, lo, hi)
    }

    /// A direction in the relative interior (bisector), if the cone is not a point or the plane.
    pub fn interior_dir(&self) -> Option<Vec2> {
        match self.kind {
            ConeKind::Point | ConeKind::Full => None,
            ConeKind::Ray | ConeKind::Line => Some(self.dirs[0]),
            ConeKind::HalfPlane => Some(self.dirs[0].perp()),
            ConeKind::Sector => Some((self.dirs[0] + self.dirs[1]).normalized()),
        }
    }
}
