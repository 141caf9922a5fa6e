//! Turning angles, normalization, and validated angle sequences.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::Vec2;

#[derive(Debug, Error)]
pub enum GeomError {
    /// A vertex coincides with its neighbour, so no turning angle is defined.
    #[error("degenerate vertex: {0}")]
    DegenerateVertex(String),
    /// An angle lies outside the range its context allows.
    #[error("angle out of range: {0}")]
    OutOfRange(String),
    /// An angle sum fails to land near an integer multiple of 2π.
    #[error("angle sum is {residual:e} away from the nearest multiple of 2π")]
    NotClosedToInteger { residual: f64 },
}

/// Map onto (-π, π].
pub fn wrap_to_pi(a: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let mut r = a.rem_euclid(tau);
    if r > std::f64::consts::PI {
        r -= tau;
    }
    r
}

/// Map onto [0, 2π).
pub fn wrap_to_tau(a: f64) -> f64 {
    a.rem_euclid(std::f64::consts::TAU)
}

/// Signed turning at `cur`: angle from the incoming direction to the outgoing
/// one, in (-π, π). Collinear continuation gives 0; reversal is rejected.
pub fn turning_angle_2d(prev: &Vec2, cur: &Vec2, next: &Vec2) -> Result<f64, GeomError> {
    let din = cur - prev;
    let dout = next - cur;
    if din.norm() < 1e-12 || dout.norm() < 1e-12 {
        return Err(GeomError::DegenerateVertex(format!(
            "repeated point near ({}, {})",
            cur.x, cur.y
        )));
    }
    let angle = dout.y.atan2(dout.x) - din.y.atan2(din.x);
    let wrapped = wrap_to_pi(angle);
    if (wrapped.abs() - std::f64::consts::PI).abs() < 1e-12 {
        return Err(GeomError::DegenerateVertex(format!(
            "edge reversal at ({}, {})",
            cur.x, cur.y
        )));
    }
    Ok(wrapped)
}

/// Whether a sequence prescribes a plane polygon or a space polygon; the two
/// settings admit different angle ranges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Dimension {
    /// Signed angles in (-π, π).
    Planar2D,
    /// Unsigned angles in (0, π).
    Space3D,
}

/// A validated cyclic sequence of turning angles.
///
/// Index convention: `angles()[i]` is the turn at vertex i of the polygon
/// being sought, i.e. between edges i-1 and i.
#[derive(Debug, Clone)]
pub struct AngleSequence {
    angles: Vec<f64>,
    dimension: Dimension,
}

impl AngleSequence {
    pub fn new(angles: Vec<f64>, dimension: Dimension) -> Result<Self, GeomError> {
        if angles.len() < 3 {
            return Err(GeomError::OutOfRange(format!(
                "need at least 3 angles, got {}",
                angles.len()
            )));
        }
        for (i, &a) in angles.iter().enumerate() {
            if !a.is_finite() {
                return Err(GeomError::OutOfRange(format!("angle {i} is not finite")));
            }
            match dimension {
                Dimension::Planar2D => {
                    if a.abs() >= std::f64::consts::PI {
                        return Err(GeomError::OutOfRange(format!(
                            "angle {i} = {a} outside (-pi, pi)"
                        )));
                    }
                }
                Dimension::Space3D => {
                    if a <= 0.0 || a >= std::f64::consts::PI {
                        return Err(GeomError::OutOfRange(format!(
                            "angle {i} = {a} outside (0, pi)"
                        )));
                    }
                }
            }
        }
        Ok(Self { angles, dimension })
    }

    pub fn planar(angles: Vec<f64>) -> Result<Self, GeomError> {
        Self::new(angles, Dimension::Planar2D)
    }

    pub fn spatial(angles: Vec<f64>) -> Result<Self, GeomError> {
        Self::new(angles, Dimension::Space3D)
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        false // n >= 3 by construction
    }

    pub fn dimension(&self) -> Dimension {
        self.dimension
    }

    pub fn sum(&self) -> f64 {
        self.angles.iter().sum()
    }
}
