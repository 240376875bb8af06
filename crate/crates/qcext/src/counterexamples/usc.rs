use crate::geometry::{Body2, Vec2};
use crate::levelset::QCFunction;
use serde::{Deserialize, Serialize};

/// Name of the rectangle function, used to recognize it when serializing.
pub const USC_NAME: &str = "usc_rectangle";

/// Values pinned by the rectangle construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UscWitness {
    pub domain: [f64; 4],
    /// `f(0, -1)`.
    pub f_bottom: f64,
    /// `f(0, 0)`.
    pub f_origin: f64,
    /// Endpoints of the open segment `(0, 1) x {1/3}` along which `f = 1/3`.
    pub segment: [[f64; 2]; 2],
    pub segment_value: f64,
}

/// The three-case function on `[0,1] x [-1,1]`.
pub fn usc_value(p: Vec2) -> f64 {
    if p.y < 0.0 && p.x >= 0.0 && p.x <= 1.0 && p.y >= -1.0 {
        0.0
    } else if p.x > 0.0 && p.x < 1.0 && p.y >= 0.0 && p.y <= 1.0 {
        p.y
    } else {
        1.0
    }
}

/// Quasiconvex, upper semicontinuous function on `C = [0,1] x [-1,1]` with no upper
/// semicontinuous quasiconvex extension to the plane.
pub fn gen_usc_counterexample() -> (QCFunction, UscWitness) {
    let c = Body2::rect(0.0, 1.0, -1.0, 1.0).expect("rectangle is a body");
    let f = QCFunction::from_closure(USC_NAME, Some(c), usc_value);
    let w = UscWitness {
        domain: [0.0, 1.0, -1.0, 1.0],
        f_bottom: usc_value(Vec2::new(0.0, -1.0)),
        f_origin: usc_value(Vec2::new(0.0, 0.0)),
        segment: [[0.0, 1.0 / 3.0], [1.0, 1.0 / 3.0]],
        segment_value: 1.0 / 3.0,
    };
    (f, w)
}
