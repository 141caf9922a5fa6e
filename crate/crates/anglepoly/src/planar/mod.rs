//! Plane polygons with prescribed signed turning angles, realized with the
//! minimum possible number of self-crossings.
//!
//! A sequence is realizable at all iff its sum is a multiple of 2π and some
//! strictly positive combination of the induced edge directions vanishes.
//! The minimum crossing count then depends only on the turning number
//! k = Σα / 2π: it is |k| - 1 for k ≠ 0 and 1 for k = 0.

mod min_crossing;
mod spiral;
mod two_essential;

pub use min_crossing::{realize_min_crossing, PlanarRealization};
pub(crate) use spiral::realize_spiral;
pub(crate) use two_essential::realize_two_essential;

use serde::Serialize;
use thiserror::Error;

use crate::geom::{strictly_positive_hull_2d, AngleSequence, GeomError, Vec2, TOL_MARGIN};

#[derive(Debug, Error)]
pub enum PlanarError {
    #[error("inconsistent angle sequence: {0:?}")]
    InconsistentSequence(ConsistencyVerdict),
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error(transparent)]
    Geometry(#[from] GeomError),
}

/// Outcome of the two realizability tests for a signed angle sequence.
#[derive(Debug, Clone, Serialize)]
pub struct ConsistencyVerdict {
    /// Distance from Σ α to the nearest multiple of 2π.
    pub sum_residue: f64,
    /// Σ α ≡ 0 (mod 2π) within tolerance.
    pub closed_sum: bool,
    /// Some strictly positive combination of edge directions vanishes.
    pub spanning_directions: bool,
}

impl ConsistencyVerdict {
    pub fn consistent(&self) -> bool {
        self.closed_sum && self.spanning_directions
    }
}

/// Unit edge directions: v_i = (cos β_i, sin β_i) with β_i = Σ_{j≤i} α_j.
/// The last direction is the +x axis whenever the sum closes.
pub(crate) fn edge_directions(angles: &[f64]) -> Vec<Vec2> {
    let mut beta = 0.0;
    angles
        .iter()
        .map(|&a| {
            beta += a;
            Vec2::new(beta.cos(), beta.sin())
        })
        .collect()
}

/// Decide whether any closed polygon (with any number of crossings) attains
/// the given turning angles.
pub fn check_consistency(seq: &AngleSequence) -> ConsistencyVerdict {
    let sum: f64 = seq.sum();
    let sum_residue = crate::geom::wrap_to_pi(sum).abs();
    let closed_sum = sum_residue < 1e-9;
    let dirs = edge_directions(seq.angles());
    let spanning_directions = strictly_positive_hull_2d(&dirs);
    ConsistencyVerdict {
        sum_residue,
        closed_sum,
        spanning_directions,
    }
}

/// Minimum number of self-crossings over all realizations: |k| - 1 for
/// turning number k ≠ 0, and 1 for k = 0.
pub fn minimal_crossing_number(seq: &AngleSequence) -> Result<usize, GeomError> {
    let sum = seq.sum();
    let k = (sum / std::f64::consts::TAU).round();
    let residual = (sum - k * std::f64::consts::TAU).abs();
    if residual >= TOL_MARGIN {
        return Err(GeomError::NotClosedToInteger { residual });
    }
    let k = k as i64;
    Ok(if k == 0 { 1 } else { k.unsigned_abs() as usize - 1 })
}

/// Indices i where angles[i] and angles[i+1] (cyclically) have opposite
/// signs. Assumes no zero entries.
pub(crate) fn sign_changes(angles: &[f64]) -> Vec<usize> {
    let n = angles.len();
    (0..n)
        .filter(|&i| angles[i] * angles[(i + 1) % n] < 0.0)
        .collect()
}

/// A sign change is essential when merging the pair (which deletes edge
/// direction v_i) would leave the remaining directions without a vanishing
/// strictly positive combination, i.e. would make the sequence inconsistent.
pub(crate) fn is_essential(angles: &[f64], i: usize) -> bool {
    let dirs = edge_directions(angles);
    let rest: Vec<Vec2> = dirs
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, v)| *v)
        .collect();
    !strictly_positive_hull_2d(&rest)
}
