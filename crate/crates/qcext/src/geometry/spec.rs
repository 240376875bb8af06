use super::base::{Affine, Base, Epigraph};
use super::halfplane::HalfPlane;
use super::profile::Profile;
use super::vec2::Vec2;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfPlaneSpec {
    pub normal: [f64; 2],
    pub offset: f64,
}

impl From<&HalfPlane> for HalfPlaneSpec {
    fn from(h: &HalfPlane) -> Self {
        HalfPlaneSpec { normal: h.normal.into(), offset: h.offset }
    }
}

impl HalfPlaneSpec {
    pub fn to_halfplane(&self) -> Result<HalfPlane> {
        let n = Vec2::from(self.normal);
        if !n.is_finite() || !self.offset.is_finite() || n.norm() == 0.0 {
            return Err(Error::InvalidBody("half-plane needs a finite nonzero normal".into()));
        }
        Ok(HalfPlane::new(n, self.offset))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    Parabola,
    ExpHypograph,
    Cosh,
    CustomPoly,
}

/// Profile parameters; omitted values take the defaults of [`ProfileKind`]:
/// parabola `u^2 - 1`, exp_hypograph `e^{-u} - 1`, cosh `cosh(u) - 2`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ProfileParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<f64>>,
}

/// JSON body schema. `disk` and the `cuts` lists are extensions of the three core kinds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BodySpec {
    Halfplanes {
        items: Vec<HalfPlaneSpec>,
    },
    Polychain {
        vertices: Vec<[f64; 2]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rays: Option<[[f64; 2]; 2]>,
    },
    Epigraph {
        profile: ProfileKind,
        #[serde(default)]
        params: ProfileParams,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        transform: Option<[[f64; 3]; 2]>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        cuts: Vec<HalfPlaneSpec>,
    },
    Disk {
        center: [f64; 2],
        radius: f64,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        cuts: Vec<HalfPlaneSpec>,
    },
}

fn invalid<T>(m: &str) -> Result<T> {
    Err(Error::InvalidBody(m.to_string()))
}

impl ProfileKind {
    pub fn build(&self, p: &ProfileParams) -> Result<Profile> {
        let prof = match self {
            ProfileKind::Parabola => Profile::Parabola { a: p.a.unwrap_or(1.0), c: p.c.unwrap_or(-1.0) },
            ProfileKind::ExpHypograph => Profile::Exp { a: p.a.unwrap_or(1.0), c: p.c.unwrap_or(-1.0) },
            ProfileKind::Cosh => Profile::Cosh { a: p.a.unwrap_or(1.0), c: p.c.unwrap_or(-2.0) },
            ProfileKind::CustomPoly => match &p.coeffs {
                Some(c) => Profile::Poly { coeffs: c.clone() },
                None => return invalid("custom_poly needs params.coeffs"),
            },
        };
        prof.validate()?;
        Ok(prof)
    }

    /// Orientation used when no transform is given. The exp profile is flipped so that
    /// the default body is the hypograph `{y <= 1 - e^{-x}}`.
    pub fn default_transform(&self) -> Affine {
        match self {
            ProfileKind::ExpHypograph => Affine::from_rows([[1.0, 0.0, 0.0], [0.0, -1.0, 0.0]]),
            _ => Affine::identity(),
        }
    }
}

impl BodySpec {
    /// Smooth base (if any) and the list of half-plane constraints.
    pub(crate) fn to_parts(&self) -> Result<(Option<Base>, Vec<HalfPlane>)> {
        let cuts_of = |c: &[HalfPlaneSpec]| c.iter().map(|h| h.to_halfplane()).collect::<Result<Vec<_>>>();
        match self {
            BodySpec::Halfplanes { items } => Ok((None, cuts_of(items)?)),
            BodySpec::Polychain { vertices, rays } => Ok((None, polychain_halfplanes(vertices, rays.as_ref())?)),
            BodySpec::Disk { center, radius, cuts } => {
                let c = Vec2::from(*center);
                if !c.is_finite() || !(radius.is_finite() && *radius > 0.0) {
                    return invalid("disk needs a finite center and positive radius");
                }
                Ok((Some(Base::Disk { center: c, radius: *radius }), cuts_of(cuts)?))
            }
            BodySpec::Epigraph { profile, params, transform, cuts } => {
                let prof = profile.build(params)?;
                let map = match transform {
                    Some(r) => {
                        if r.iter().flatten().any(|x| !x.is_finite()) {
                            return invalid("transform entries must be finite");
                        }
                        Affine::from_rows(*r)
                    }
                    None => profile.default_transform(),
                };
                let inv = match map.inverse() {
                    Some(i) => i,
                    None => return invalid("transform must be invertible"),
                };
                let mut hps = cuts_of(cuts)?;
                if let Profile::Poly { coeffs } = &prof {
                    if prof.is_affine() {
                        // v >= c0 + c1 u, pulled back to world coordinates
                        let c0 = coeffs[0];
                        let c1 = coeffs.get(1).copied().unwrap_or(0.0);
                        let nl = Vec2::new(c1, -1.0);
                        hps.push(HalfPlane::new(inv.lin_t(nl), -c0 - nl.dot(inv.t)));
                        return Ok((None, hps));
                    }
                }
                let e = Epigraph::new(prof, map).expect("checked invertible");
                Ok((Some(Base::Epigraph(e)), hps))
            }
        }
    }

    /// Image of the body under an invertible affine map. Disks require a similarity.
    pub fn mapped(&self, a: &Affine) -> Result<BodySpec> {
        let Some(inv) = a.inverse() else { return invalid("map must be invertible") };
        let map_hp = |h: &HalfPlaneSpec| -> Result<HalfPlaneSpec> {
            let hp = h.to_halfplane()?;
            // n . p <= c with p = inv(q)
            let n = inv.lin_t(hp.normal);
            let c = hp.offset - hp.normal.dot(inv.t);
            Ok(HalfPlaneSpec::from(&HalfPlane::new(n, c)))
        };
        let map_all = |v: &[HalfPlaneSpec]| v.iter().map(map_hp).collect::<Result<Vec<_>>>();
        Ok(match self {
            BodySpec::Halfplanes { items } => BodySpec::Halfplanes { items: map_all(items)? },
            BodySpec::Polychain { vertices, rays } => {
                let orient = a.det() > 0.0;
                let mut vs: Vec<[f64; 2]> = vertices.iter().map(|v| a.apply(Vec2::from(*v)).into()).collect();
                match rays {
                    None => {
                        if !orient {
                            vs.reverse();
                        }
                        BodySpec::Polychain { vertices: vs, rays: None }
                    }
                    Some(r) => {
                        let (r0, r1): ([f64; 2], [f64; 2]) =
                            (a.lin(Vec2::from(r[0])).into(), a.lin(Vec2::from(r[1])).into());
                        if orient {
                            BodySpec::Polychain { vertices: vs, rays: Some([r0, r1]) }
                        } else {
                            vs.reverse();
                            BodySpec::Polychain { vertices: vs, rays: Some([r1, r0]) }
                        }
                    }
                }
            }
            BodySpec::Disk { center, radius, cuts } => {
                if !a.is_similarity(1e-12) {
                    return invalid("a disk can only be mapped by a similarity");
                }
                let scale = a.det().abs().sqrt();
                BodySpec::Disk { center: a.apply(Vec2::from(*center)).into(), radius: radius * scale, cuts: map_all(cuts)? }
            }
            BodySpec::Epigraph { profile, params, transform, cuts } => {
                let t = transform.map(Affine::from_rows).unwrap_or_else(|| profile.default_transform());
                BodySpec::Epigraph {
                    profile: *profile,
                    params: params.clone(),
                    transform: Some(a.compose(&t).to_rows()),
                    cuts: map_all(cuts)?,
                }
            }
        })
    }

    /// Same body with extra half-plane constraints.
    pub fn with_cuts(&self, extra: &[HalfPlane]) -> BodySpec {
        let ex: Vec<HalfPlaneSpec> = extra.iter().map(HalfPlaneSpec::from).collect();
        match self.clone() {
            BodySpec::Halfplanes { mut items } => {
                items.extend(ex);
                BodySpec::Halfplanes { items }
            }
            BodySpec::Polychain { vertices, rays } => {
                let mut items: Vec<HalfPlaneSpec> = polychain_halfplanes(&vertices, rays.as_ref())
                    .map(|v| v.iter().map(HalfPlaneSpec::from).collect())
                    .unwrap_or_default();
                items.extend(ex);
                BodySpec::Halfplanes { items }
            }
            BodySpec::Epigraph { profile, params, transform, mut cuts } => {
                cuts.extend(ex);
                BodySpec::Epigraph { profile, params, transform, cuts }
            }
            BodySpec::Disk { center, radius, mut cuts } => {
                cuts.extend(ex);
                BodySpec::Disk { center, radius, cuts }
            }
        }
    }
}

/// Half-planes of a counterclockwise vertex chain. Without rays the chain is a closed
/// polygon; with rays `[r0, r1]` the boundary arrives at the first vertex along `-r0`
/// and leaves the last vertex along `r1`.
pub fn polychain_halfplanes(vertices: &[[f64; 2]], rays: Option<&[[f64; 2]; 2]>) -> Result<Vec<HalfPlane>> {
    let v: Vec<Vec2> = vertices.iter().map(|p| Vec2::from(*p)).collect();
    if v.iter().any(|p| !p.is_finite()) {
        return invalid("vertices must be finite");
    }
    let mut dirs: Vec<(Vec2, Vec2)> = Vec::new(); // (direction, point on edge)
    match rays {
        None => {
            if v.len() < 3 {
                return invalid("a closed polychain needs at least three vertices");
            }
            for i in 0..v.len() {
                let a = v[i];
                let b = v[(i + 1) % v.len()];
                dirs.push((b - a, a));
            }
        }
        Some(r) => {
            if v.is_empty() {
                return invalid("polychain needs at least one vertex");
            }
            let (r0, r1) = (Vec2::from(r[0]), Vec2::from(r[1]));
            if !(r0.is_finite() && r1.is_finite()) || r0.norm() == 0.0 || r1.norm() == 0.0 {
                return invalid("rays must be finite and nonzero");
            }
            dirs.push((-r0, v[0]));
            for i in 0..v.len() - 1 {
                dirs.push((v[i + 1] - v[i], v[i]));
            }
            dirs.push((r1, v[v.len() - 1]));
        }
    }
    let m = dirs.len();
    let closed = rays.is_none();
    let mut turn = 0.0;
    for i in 0..m {
        if !closed && i + 1 == m {
            break;
        }
        let d0 = dirs[i].0;
        let d1 = dirs[(i + 1) % m].0;
        if d0.norm() == 0.0 || d1.norm() == 0.0 {
            return invalid("repeated vertex in polychain");
        }
        let c = d0.normalized().cross(d1.normalized());
        if c <= 1e-12 {
            return invalid("polychain is not strictly convex in counterclockwise order");
        }
        turn += c.atan2(d0.normalized().dot(d1.normalized()));
    }
    let limit = if closed { 2.0 * std::f64::consts::PI } else { std::f64::consts::PI };
    if turn > limit + 1e-9 {
        return invalid("polychain winds more than once");
    }
    Ok(dirs.iter().map(|(d, p)| HalfPlane::through(Vec2::new(d.y, -d.x), *p)).collect())
}
