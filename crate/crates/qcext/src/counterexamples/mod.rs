//! Non-extendability constructions with numeric certificates, and the classifier.

mod classify;
mod forcing;
mod no_lip;
mod no_uc;
mod usc;

pub use classify::*;
pub use forcing::*;
pub use no_lip::*;
pub use no_uc::*;
pub use usc::*;

use crate::geometry::{Affine, Vec2};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Linear surjection onto the plane or the line, with a gauge `θ` such that the
/// `θ`-ball of the target lies in the image of the unit ball.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionMap {
    /// One or two rows of length two.
    pub matrix: Vec<[f64; 2]>,
    pub theta: f64,
}

impl ProjectionMap {
    pub fn identity() -> Self {
        ProjectionMap { matrix: vec![[1.0, 0.0], [0.0, 1.0]], theta: 1.0 }
    }

    /// `θ` is the smallest singular value, i.e. the inverse of the norm of the minimal
    /// right inverse. Errors unless the map is onto its target.
    pub fn from_rows(rows: &[[f64; 2]]) -> Result<Self> {
        let theta = match rows {
            [r] => Vec2::from(*r).norm(),
            [r0, r1] => Affine { m: [*r0, *r1], t: Vec2::zero() }.sigma_min(),
            _ => return Err(Error::Malformed("projection needs one or two rows".into())),
        };
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(Error::Malformed("projection is not surjective".into()));
        }
        Ok(ProjectionMap { matrix: rows.to_vec(), theta })
    }

    pub fn apply(&self, p: Vec2) -> Vec<f64> {
        self.matrix.iter().map(|r| r[0] * p.x + r[1] * p.y).collect()
    }
}

/// `(t, s) -> o + t v + s w`.
pub(crate) fn frame_map(o: Vec2, v: Vec2, w: Vec2) -> Affine {
    Affine::from_rows([[v.x, w.x, o.x], [v.y, w.y, o.y]])
}

/// First index from which a table is non-increasing, if its last entry is below the
/// first and such an index leaves at least two entries.
pub fn monotone_tail_start(xs: &[f64]) -> Option<usize> {
    if xs.len() < 2 {
        return None;
    }
    let mut start = xs.len() - 1;
    while start > 0 && xs[start - 1] >= xs[start] {
        start -= 1;
    }
    (start + 1 < xs.len()).then_some(start)
}
