//! Planar quasiconvex extension toolkit.
//!
//! The [`geometry`] kernel models closed convex bodies in the plane (half-plane lists,
//! polygon chains with recession rays, analytic epigraphs and disks, optionally cut by
//! half-planes). On top of it, [`levelset`] represents quasiconvex functions by nested
//! families of bodies, [`extension`] implements the cone operator `e(B)` and the
//! extension `F`, and [`counterexamples`] builds the non-extendability constructions with
//! numeric certificates. [`verify`] bundles the property suites.

pub mod counterexamples;
pub mod extension;
pub mod geometry;
pub mod levelset;
pub mod numeric;
pub mod scalar;
pub mod verify;

pub use geometry::{Body2, BodySpec, Cone2, ConeKind, HalfPlane, Vec2};
pub use scalar::Real;

/// Double precision point.
pub type Vec2d = geometry::Vec2<f64>;
/// Single precision point.
pub type Vec2s = geometry::Vec2<f32>;
pub type HalfPlaned = geometry::HalfPlane<f64>;
pub type HalfPlanes = geometry::HalfPlane<f32>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid body: {0}")]
    InvalidBody(String),
    #[error("point is not on the boundary (distance {0:e})")]
    NotOnBoundary(f64),
    #[error("point lies in the interior")]
    InteriorPoint,
    #[error("point lies outside the domain")]
    OutsideDomain,
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("ray meets the interior of the body")]
    RayMeetsInterior,
    #[error("hypothesis failed: {0}")]
    Hypothesis(String),
    #[error("gap violation at index {index}: measured {measured:e} < required {required:e}")]
    GapViolation { index: usize, measured: f64, required: f64 },
    #[error("family is not nested at index {0}")]
    NotNested(usize),
    #[error("no covering level found up to index {0}")]
    NotCovered(usize),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("unknown suite: {0}")]
    UnknownSuite(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Numeric knobs shared by all modules.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Settings {
    /// Absolute tolerance for geometric predicates.
    pub tol: f64,
    /// Boundary samples per body.
    pub resolution: usize,
    /// Sampling window radius as a multiple of the inscribed radius.
    pub sample_mult: f64,
    /// Working window for extended bodies as a multiple of the inscribed radius.
    pub window_mult: f64,
    /// Relative change that ends the slope iteration in `asymptotic_slope`.
    pub slope_rel: f64,
    /// Slopes below this count as zero.
    pub slope_zero: f64,
    /// Number of certificate rows.
    pub k_max: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            tol: 1e-9,
            resolution: 2048,
            sample_mult: 16.0,
            window_mult: 1024.0,
            slope_rel: 1e-6,
            slope_zero: 1e-4,
            k_max: 24,
        }
    }
}
