//! Reference bodies used across tests, suites and the CLI.

use super::body::Body2;
use super::spec::{BodySpec, ProfileKind, ProfileParams};
use super::vec2::Vec2;

fn epi(kind: ProfileKind, a: f64, c: f64) -> Body2 {
    Body2::from_spec(BodySpec::Epigraph {
        profile: kind,
        params: ProfileParams { a: Some(a), c: Some(c), coeffs: None },
        transform: None,
        cuts: vec![],
    })
    .expect("reference body is valid")
}

pub fn unit_disk() -> Body2 {
    Body2::disk(Vec2::zero(), 1.0).expect("valid")
}

/// `{v >= u^2 - 1}`
pub fn parabola() -> Body2 {
    epi(ProfileKind::Parabola, 1.0, -1.0)
}

/// `{v >= cosh(u) - 2}`
pub fn cosh_body() -> Body2 {
    epi(ProfileKind::Cosh, 1.0, -2.0)
}

/// `{s <= 1 - e^{-t}}`
pub fn exp_hypograph() -> Body2 {
    epi(ProfileKind::ExpHypograph, 1.0, -1.0)
}

/// `[-1, 1]^2`
pub fn square() -> Body2 {
    Body2::rect(-1.0, 1.0, -1.0, 1.0).expect("valid")
}

/// Look up a reference body by name.
pub fn by_name(name: &str) -> Option<Body2> {
    Some(match name {
        "disk" | "unit_disk" => unit_disk(),
        "parabola" => parabola(),
        "cosh" => cosh_body(),
        "exp" | "exp_hypograph" | "hypograph" => exp_hypograph(),
        "square" => square(),
        _ => return None,
    })
}
