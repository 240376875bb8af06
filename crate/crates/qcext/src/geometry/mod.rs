//! Planar convex-body kernel.

pub mod arc;
pub mod base;
pub mod catalog;
pub mod body;
pub mod cone;
pub mod halfplane;
pub mod ops;
pub mod profile;
pub mod spec;
pub mod vec2;

pub use arc::{ArcPart, BoundaryArc};
pub use base::{Affine, Base, Epigraph};
pub use body::{BoundaryPoint, Body2, Face, NormalArc, Piece};
pub use cone::{Cone2, ConeKind};
pub use halfplane::HalfPlane;
pub use ops::*;
pub use profile::Profile;
pub use spec::{BodySpec, HalfPlaneSpec, ProfileKind, ProfileParams};
pub use vec2::Vec2;
