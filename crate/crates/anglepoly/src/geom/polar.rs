//! Arithmetic on polar angles measured from a fixed point on the sphere.
//!
//! For points at polar distances a and b from a fixed centre, a point at
//! distance a from a point at distance b can itself lie anywhere between
//! |a - b| and the "folded" maximum min(a + b, 2π - a - b). These two
//! operations drive the reachability intervals used by the spherical solver.

use thiserror::Error;

use super::angles::GeomError;

const CLAMP: f64 = 1e-12;

fn check_range(v: f64, what: &str) -> Result<f64, GeomError> {
    if !(0.0..=std::f64::consts::PI).contains(&v) {
        if v > -CLAMP && v < std::f64::consts::PI + CLAMP {
            return Ok(v.clamp(0.0, std::f64::consts::PI));
        }
        return Err(GeomError::OutOfRange(format!("{what} = {v} outside [0, pi]")));
    }
    Ok(v)
}

pub(crate) fn polar_add_unchecked(a: f64, b: f64) -> f64 {
    // The wrapped branch is written as (π - a) + (π - b) rather than
    // 2π - (a + b): equal in exact arithmetic, but this form never rounds
    // below |a - b|, so the reachable maximum dominates the minimum even
    // at the endpoints a = π or b = π.
    let wrapped = (std::f64::consts::PI - a) + (std::f64::consts::PI - b);
    (a + b).min(wrapped)
}

pub(crate) fn polar_sub_unchecked(a: f64, b: f64) -> f64 {
    (a - b).abs()
}

/// Largest polar distance reachable by an arc of length `b` from a point at
/// polar distance `a`: min(a + b, 2π - (a + b)).
pub fn polar_add(a: f64, b: f64) -> Result<f64, GeomError> {
    let a = check_range(a, "polar_add lhs")?;
    let b = check_range(b, "polar_add rhs")?;
    check_range(polar_add_unchecked(a, b), "polar_add result")
}

/// Smallest polar distance reachable: |a - b|.
pub fn polar_sub(a: f64, b: f64) -> Result<f64, GeomError> {
    let a = check_range(a, "polar_sub lhs")?;
    let b = check_range(b, "polar_sub rhs")?;
    check_range(polar_sub_unchecked(a, b), "polar_sub result")
}

/// A closed interval of polar distances, a subset of [0, π].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarInterval {
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Error)]
#[error("invalid polar interval [{lo}, {hi}]")]
pub struct InvalidInterval {
    pub lo: f64,
    pub hi: f64,
}

impl PolarInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self, InvalidInterval> {
        if !(0.0..=std::f64::consts::PI).contains(&lo)
            || !(0.0..=std::f64::consts::PI).contains(&hi)
            || lo > hi
        {
            return Err(InvalidInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn point(v: f64) -> Result<Self, InvalidInterval> {
        Self::new(v, v)
    }

    pub fn contains(&self, v: f64, tol: f64) -> bool {
        v >= self.lo - tol && v <= self.hi + tol
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Interval of polar distances reachable by one arc of length `a` from a
    /// point whose polar distance ranges over `self`.
    ///
    /// The arc can point anywhere, so the image of a single distance d is
    /// [d ⊖ a, d ⊕ a]; over the whole interval the minimum drops to 0 exactly
    /// when a ∈ [lo, hi], and the maximum saturates at π exactly when
    /// π - a ∈ [lo, hi].
    pub fn fold(&self, a: f64) -> Self {
        let lo = if self.contains(a, 0.0) {
            0.0
        } else {
            polar_sub_unchecked(self.lo, a).min(polar_sub_unchecked(self.hi, a))
        };
        let hi = if self.contains(std::f64::consts::PI - a, 0.0) {
            std::f64::consts::PI
        } else {
            polar_add_unchecked(self.lo, a).max(polar_add_unchecked(self.hi, a))
        };
        Self { lo, hi }
    }
}
