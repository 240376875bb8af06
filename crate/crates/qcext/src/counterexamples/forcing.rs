use super::frame_map;
use crate::geometry::base::Affine;
use crate::geometry::{asymptotic_directions, boundary_segments, rotundity_probe, Body2, HalfPlane, HalfPlaneSpec, Piece, Vec2};
use crate::levelset::{compose_projection, gap_distance, staircase_qc, QCFunction};
use crate::{Error, Result, Settings};
use serde::{Deserialize, Serialize};

/// One forcing half-plane: any quasiconvex extension `F` has `[F ≤ level] ⊆ halfplane`,
/// so `F(witness) > level` whenever the witness lies outside it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForcingRow {
    pub index: usize,
    pub level: f64,
    pub halfplane: HalfPlaneSpec,
    /// Length of the chord of `C` along the boundary line (infinite for a full line).
    pub chord: f64,
    pub witness: [f64; 2],
    /// Signed distance of the witness beyond the boundary line (positive means outside).
    pub witness_margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForcingCertificate {
    pub kind: String,
    /// Frame to world map `(t, s) -> o + t v + s w` as two rows `[a, b, c]`.
    pub frame: [[f64; 3]; 2],
    pub eps: Vec<f64>,
    pub b: Vec<f64>,
    /// Levels of the wedge bodies `B_n`, in order.
    pub levels: Vec<f64>,
    pub rows: Vec<ForcingRow>,
    /// `(f(0, 1), sup of the levels)` for the segment construction.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jump: Option<(f64, f64)>,
}

impl ForcingCertificate {
    /// Every forcing line meets `C` in a chord of positive length and every witness lies
    /// strictly outside its half-plane.
    pub fn holds(&self) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(|r| r.chord > 0.0 && r.witness_margin > 0.0)
    }

    /// Smallest level increment, a lower bound on the growth of the forced values.
    pub fn min_increment(&self) -> f64 {
        self.levels.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
    }
}

/// `{s ≤ 1, s ≤ 1 - (ε/b)(t - b)}`: the part of `s ≤ 1` under the line through
/// `(0, 1 + ε)` and `(b, 1)`.
fn wedge_line(eps: f64, b: f64) -> HalfPlane {
    HalfPlane::new(Vec2::new(eps / b, 1.0), 1.0 + eps)
}

/// Wedge count for [`gen_no_qc`]. The slope `ε_n / b_n` of the last wedge line is about
/// `2^{-23}` at five wedges and `2^{-31}` at six, which is below what the relative
/// membership tolerance can resolve at coordinates near `b_n`.
pub const NO_QC_WEDGES: usize = 5;

/// Wedge count for [`gen_non_rotund`]; gaps shrink roughly like `4^{-n}`.
pub const NON_ROTUND_WEDGES: usize = 10;

fn cap() -> HalfPlane {
    HalfPlane::new(Vec2::new(0.0, 1.0), 1.0)
}

fn chord_length(c: &Body2, h: &HalfPlane) -> f64 {
    match c.line_interval(h.anchor(), h.direction()) {
        Some((lo, hi)) => hi - lo,
        None => 0.0,
    }
}

fn world_halfplane(h: &HalfPlane, to_frame: &Affine) -> HalfPlane {
    // n . (A p + t) <= c  <=>  (A^T n) . p <= c - n . t
    HalfPlane::new(to_frame.lin_t(h.normal), h.offset - h.normal.dot(to_frame.t))
}

struct Wedges {
    function: QCFunction,
    levels: Vec<f64>,
    lines: Vec<HalfPlane>,
}

/// Staircase over the wedges in frame coordinates on the ambient `{s ≤ 1}`, with each
/// gap set to the measured distance `d(A \ B_{n+1}, B_n)`.
fn wedge_staircase(eps: &[f64], b: &[f64], c: &Body2, frame: &Affine, settings: &Settings) -> Result<Wedges> {
    let ambient = Body2::halfplanes(&[cap()])?;
    let lines: Vec<HalfPlane> = eps.iter().zip(b).map(|(&e, &bn)| wedge_line(e, bn)).collect();
    let bodies = lines.iter().map(|l| Body2::halfplanes(&[cap(), *l])).collect::<Result<Vec<_>>>()?;
    let mut levels = vec![0.0];
    let mut gaps = Vec::new();
    for k in 0..bodies.len() - 1 {
        let g = gap_distance(&bodies[k], &bodies[k + 1], &ambient, settings)? * (1.0 - 1e-6);
        if !(g > settings.tol) {
            return Err(Error::GapViolation { index: k, measured: g, required: settings.tol });
        }
        gaps.push(g);
        levels.push(levels[k] + g);
    }
    let g = staircase_qc(&ambient, &bodies, &levels, &gaps, settings)?;
    let to_frame = frame.inverse().ok_or_else(|| Error::Hypothesis("degenerate frame".into()))?;
    let function = compose_projection(&g, &to_frame, Some(c.clone()));
    Ok(Wedges { function, levels, lines })
}

fn row(index: usize, level: f64, line: &HalfPlane, frame: &Affine, c: &Body2, witness: Vec2) -> Result<ForcingRow> {
    let to_frame = frame.inverse().ok_or_else(|| Error::Hypothesis("degenerate frame".into()))?;
    let h = world_halfplane(line, &to_frame);
    let w = frame.apply(witness);
    Ok(ForcingRow {
        index,
        level,
        halfplane: (&h).into(),
        chord: chord_length(c, &h),
        witness: w.into(),
        witness_margin: h.value(w),
    })
}

/// A Lipschitz quasiconvex function on a body with an asymptotic direction that has no
/// quasiconvex extension, with the forcing half-planes that rule one out.
pub fn gen_no_qc(c: &Body2, settings: &Settings) -> Result<(QCFunction, ForcingCertificate)> {
    if c.is_bounded() {
        return Err(Error::Hypothesis("body is bounded, so it has no asymptotic direction".into()));
    }
    let dirs = asymptotic_directions(c, settings);
    let Some(&(v, x0)) = dirs.first() else {
        return Err(Error::Hypothesis("body has no asymptotic direction".into()));
    };
    let o = c.witness();
    let frame = frame_map(o, v, x0 - o);
    // b_{n+1} doubles from b_n until (b_{n+1}, 0) leaves 2 B_n
    let n = settings.k_max.clamp(3, NO_QC_WEDGES);
    let eps: Vec<f64> = (1..=n).map(|k| 0.5f64.powi(k as i32)).collect();
    let mut b = vec![1.0];
    for k in 0..n - 1 {
        let bound = 2.0 * b[k] * (1.0 + 1.0 / eps[k]);
        let mut next = b[k];
        while next <= bound {
            next *= 2.0;
        }
        b.push(next);
    }
    let w = wedge_staircase(&eps, &b, c, &frame, settings)?;
    let witness = Vec2::new(0.0, 1.0 + eps[0]);
    let rows = (1..n).map(|k| row(k + 1, w.levels[k], &w.lines[k], &frame, c, witness)).collect::<Result<Vec<_>>>()?;
    let cert = ForcingCertificate {
        kind: "no-qc".into(),
        frame: frame.to_rows(),
        eps,
        b,
        levels: w.levels,
        rows,
        jump: None,
    };
    Ok((w.function, cert))
}

/// A Lipschitz quasiconvex function on a body with a boundary segment that has no
/// continuous quasiconvex extension: forced values near the segment stay above the top
/// level while the value on the segment is the bottom one.
pub fn gen_non_rotund(c: &Body2, settings: &Settings) -> Result<(QCFunction, ForcingCertificate)> {
    let probe = rotundity_probe(c, settings);
    if !(probe.longest_segment > settings.tol) {
        return Err(Error::Hypothesis("body is rotund (no boundary segment)".into()));
    }
    let segs = boundary_segments(c, settings.tol);
    let &(idx, s0, s1) = segs
        .iter()
        .max_by(|x, y| (x.2 - x.1).total_cmp(&(y.2 - y.1)))
        .expect("probe found a segment");
    let Piece::Seg { cut, .. } = c.pieces()[idx] else { unreachable!("segments come from cut pieces") };
    let h = c.cuts()[cut];
    let (a, z) = match (s0.is_finite(), s1.is_finite()) {
        (true, true) => (s0, s1),
        (true, false) => (s0, s0 + 2.0),
        (false, true) => (s1 - 2.0, s1),
        (false, false) => {
            let m = h.param_of(c.witness());
            (m - 1.0, m + 1.0)
        }
    };
    let (p, q) = (h.point_at(a), h.point_at(z));
    let o = c.witness();
    let frame = frame_map(o, (q - p) * 0.5, p - o);
    let n = settings.k_max.clamp(3, NON_ROTUND_WEDGES);
    let eps: Vec<f64> = (1..=n).map(|k| 0.5f64.powi(k as i32)).collect();
    let b: Vec<f64> = (1..=n).map(|k| 2.0 - 0.5f64.powi(k as i32 - 1)).collect();
    let w = wedge_staircase(&eps, &b, c, &frame, settings)?;
    let top = *w.levels.last().unwrap();
    let last = w.lines.last().unwrap();
    let rows = (0..n - 1)
        .map(|k| row(k + 1, top, last, &frame, c, Vec2::new(0.0, 1.0 + eps[k])))
        .collect::<Result<Vec<_>>>()?;
    let bottom = w.function.eval(frame.apply(Vec2::new(0.0, 1.0)));
    let cert = ForcingCertificate {
        kind: "non-rotund".into(),
        frame: frame.to_rows(),
        eps,
        b,
        levels: w.levels,
        rows,
        jump: Some((bottom, top)),
    };
    Ok((w.function, cert))
}
