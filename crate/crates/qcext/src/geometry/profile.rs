use super::cone::Cone2;
use super::vec2::Vec2;
use crate::Error;
use serde::{Deserialize, Serialize};

/// Convex one-dimensional profile `g`; the local body is `{(u, v) : v >= g(u)}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Profile {
    /// `a u^2 + c`
    Parabola { a: f64, c: f64 },
    /// `a e^{-u} + c`
    Exp { a: f64, c: f64 },
    /// `a cosh(u) + c`
    Cosh { a: f64, c: f64 },
    /// `sum coeffs[i] u^i`
    Poly { coeffs: Vec<f64> },
}

impl Profile {
    pub fn g(&self, u: f64) -> f64 {
        match self {
            Profile::Parabola { a, c } => a * u * u + c,
            Profile::Exp { a, c } => a * (-u).exp() + c,
            Profile::Cosh { a, c } => a * u.cosh() + c,
            Profile::Poly { coeffs } => coeffs.iter().rev().fold(0.0, |acc, &k| acc * u + k),
        }
    }

    pub fn dg(&self, u: f64) -> f64 {
        match self {
            Profile::Parabola { a, .. } => 2.0 * a * u,
            Profile::Exp { a, .. } => -a * (-u).exp(),
            Profile::Cosh { a, .. } => a * u.sinh(),
            Profile::Poly { coeffs } => {
                let mut acc = 0.0;
                for (i, &k) in coeffs.iter().enumerate().skip(1).rev() {
                    acc = acc * u + k * i as f64;
                }
                acc
            }
        }
    }

    pub fn d2g(&self, u: f64) -> f64 {
        match self {
            Profile::Parabola { a, .. } => 2.0 * a,
            Profile::Exp { a, .. } => a * (-u).exp(),
            Profile::Cosh { a, .. } => a * u.cosh(),
            Profile::Poly { coeffs } => {
                let mut acc = 0.0;
                for (i, &k) in coeffs.iter().enumerate().skip(2).rev() {
                    acc = acc * u + k * (i * (i - 1)) as f64;
                }
                acc
            }
        }
    }

    fn degree(coeffs: &[f64]) -> usize {
        coeffs.iter().rposition(|&k| k != 0.0).unwrap_or(0)
    }

    /// Second derivative vanishes identically.
    pub fn is_affine(&self) -> bool {
        matches!(self, Profile::Poly { coeffs } if Self::degree(coeffs) <= 1)
    }

    pub fn validate(&self) -> Result<(), Error> {
        let bad = |m: &str| Err(Error::InvalidBody(m.to_string()));
        match self {
            Profile::Parabola { a, c } | Profile::Exp { a, c } | Profile::Cosh { a, c } => {
                if !(a.is_finite() && c.is_finite()) {
                    return bad("profile parameters must be finite");
                }
                if *a <= 0.0 {
                    return bad("profile coefficient a must be positive");
                }
            }
            Profile::Poly { coeffs } => {
                if coeffs.is_empty() || coeffs.iter().any(|k| !k.is_finite()) {
                    return bad("polynomial coefficients must be finite and nonempty");
                }
                let d = Self::degree(coeffs);
                if d >= 2 && (d % 2 == 1 || coeffs[d] <= 0.0) {
                    return bad("polynomial profile must have even degree and positive leading coefficient");
                }
                for i in 0..=400 {
                    let u = -50.0 + 0.25 * i as f64;
                    let scale = 1.0 + coeffs.iter().map(|k| k.abs()).sum::<f64>() * u.abs().powi(d as i32);
                    if self.d2g(u) < -1e-9 * scale {
                        return bad("polynomial profile is not convex");
                    }
                }
            }
        }
        Ok(())
    }

    /// Recession cone of the local epigraph `{v >= g(u)}`.
    pub fn local_recession(&self) -> Cone2 {
        let o = Vec2::zero();
        match self {
            Profile::Parabola { .. } | Profile::Cosh { .. } => Cone2::ray(o, Vec2::new(0.0, 1.0)),
            Profile::Exp { .. } => Cone2::span(o, Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)),
            Profile::Poly { coeffs } => match Self::degree(coeffs) {
                0 => Cone2::half_plane(o, Vec2::new(1.0, 0.0)),
                1 => Cone2::half_plane(o, Vec2::new(1.0, coeffs[1])),
                _ => Cone2::ray(o, Vec2::new(0.0, 1.0)),
            },
        }
    }

    /// Name used in the JSON schema.
    pub fn name(&self) -> &'static str {
        match self {
            Profile::Parabola { .. } => "parabola",
            Profile::Exp { .. } => "exp_hypograph",
            Profile::Cosh { .. } => "cosh",
            Profile::Poly { .. } => "custom_poly",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_derivatives_match_finite_differences() {
        let p = Profile::Poly { coeffs: vec![1.0, -2.0, 0.5, 0.0, 0.25] };
        for &u in &[-2.0, -0.3, 0.0, 1.7] {
            let h = 1e-5;
            let fd = (p.g(u + h) - p.g(u - h)) / (2.0 * h);
            let fd2 = (p.dg(u + h) - p.dg(u - h)) / (2.0 * h);
            assert!((fd - p.dg(u)).abs() < 1e-6);
            assert!((fd2 - p.d2g(u)).abs() < 1e-6);
        }
    }

    #[test]
    fn validation() {
        assert!(Profile::Parabola { a: 1.0, c: -1.0 }.validate().is_ok());
        assert!(Profile::Parabola { a: -1.0, c: 0.0 }.validate().is_err());
        assert!(Profile::Poly { coeffs: vec![0.0, 0.0, 0.0, 1.0] }.validate().is_err());
        assert!(Profile::Poly { coeffs: vec![0.0, 0.0, -1.0, 0.0, 1.0] }.validate().is_err());
        assert!(Profile::Poly { coeffs: vec![2.0, 1.0] }.validate().is_ok());
    }
}
