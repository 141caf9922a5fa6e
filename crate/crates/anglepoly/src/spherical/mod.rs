//! Closed spherical polygons with prescribed arc lengths.
//!
//! Three layers: a linear-time reachability decision (intervals of feasible
//! polar distances, folded one arc at a time), an explicit backtracking
//! construction that realizes any accepted sequence, and rigid local
//! surgeries ([`straighten`], [`enclose_origin`]) that move a realization,
//! arc lengths fixed, until the origin lies in the relative interior of the
//! convex hull of its vertices.

mod enclose;
mod straighten;

pub use enclose::enclose_origin;
pub use straighten::straighten;

use thiserror::Error;

use crate::geom::polar::{polar_add_unchecked, polar_sub_unchecked};
use crate::geom::{
    circle_circle_intersections, rotate_about, spherical_distance, AngleSequence, CircleCircle,
    GeomError, PolarInterval, SphericalPolygon, Vec3,
};

/// Boundary tolerance for membership in a reachability interval.
pub const TOL_ZONE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum SphericalError {
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    /// The total arc length is below 2π, so no vertex set of the polygon can
    /// surround the origin.
    #[error("total arc length {sum} is below 2\u{3c0}")]
    LengthBelowFenchel { sum: f64 },
    /// The surgery loop ran out of budget; indicates a numerically degenerate
    /// input or an internal bug, not a refutation.
    #[error("transformation budget exhausted before the origin was enclosed")]
    RecursionExhausted,
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error(transparent)]
    Geometry(#[from] GeomError),
}

/// Arc lengths for the spherical solver must lie strictly inside (0, π).
fn arc_lengths_of(a: &AngleSequence) -> Result<Vec<f64>, SphericalError> {
    let angles = a.angles();
    if angles.len() < 3 {
        return Err(SphericalError::PreconditionViolation(format!(
            "need at least 3 arcs, got {}",
            angles.len()
        )));
    }
    for (i, &x) in angles.iter().enumerate() {
        if !(x > 0.0 && x < std::f64::consts::PI) {
            return Err(SphericalError::PreconditionViolation(format!(
                "arc {i} = {x} outside (0, \u{3c0})"
            )));
        }
    }
    Ok(angles.to_vec())
}

/// Reachable polar distances from the start vertex, one interval per chain
/// prefix: intervals[i] is where a chain consuming arcs 0..=i can end up.
#[derive(Debug, Clone)]
pub struct ZoneTrace {
    pub intervals: Vec<PolarInterval>,
}

/// Fold the arc lengths into reachability intervals, O(n) total.
pub fn propagate_zones(a: &AngleSequence) -> Result<ZoneTrace, SphericalError> {
    let arcs = arc_lengths_of(a)?;
    let mut intervals = Vec::with_capacity(arcs.len());
    let mut cur = PolarInterval::point(arcs[0]).expect("arc in (0, pi)");
    intervals.push(cur);
    for &x in &arcs[1..] {
        cur = cur.fold(x);
        intervals.push(cur);
    }
    Ok(ZoneTrace { intervals })
}

/// Decision outcome with its numeric evidence.
#[derive(Debug, Clone)]
pub struct SphericalVerdict {
    /// 0 lies in the final reachability interval (within [`TOL_ZONE`]).
    pub realizable: bool,
    /// The closing arc sits exactly on the boundary of the feasible set;
    /// realizable in exact arithmetic but numerically fragile.
    pub boundary: bool,
    /// Depth of the closing arc inside the second-to-last interval
    /// (negative: distance to it).
    pub margin: f64,
    pub trace: ZoneTrace,
}

/// Can a closed spherical polygon realize these arc lengths?
pub fn decide_spherical(a: &AngleSequence) -> Result<SphericalVerdict, SphericalError> {
    let trace = propagate_zones(a)?;
    let arcs = a.angles();
    let n = arcs.len();
    let prev = trace.intervals[n - 2];
    let last = arcs[n - 1];
    let margin = if prev.contains(last, 0.0) {
        (last - prev.lo).min(prev.hi - last)
    } else {
        -(prev.lo - last).max(last - prev.hi)
    };
    Ok(SphericalVerdict {
        realizable: margin >= -TOL_ZONE,
        boundary: margin.abs() <= TOL_ZONE,
        margin,
        trace,
    })
}

/// The set of points reachable from `center` by a chain with the given arc
/// lengths: an annulus on the sphere between two polar radii.
#[derive(Debug, Clone)]
pub struct ReachZone {
    pub center: Vec3,
    pub near_radius: f64,
    pub far_radius: f64,
}

pub fn reach_zone(center: &Vec3, arc_lengths: &[f64]) -> Result<ReachZone, SphericalError> {
    let Some((&first, rest)) = arc_lengths.split_first() else {
        return Err(SphericalError::PreconditionViolation(
            "reach_zone needs at least one arc".into(),
        ));
    };
    for &x in arc_lengths {
        if !(0.0..=std::f64::consts::PI).contains(&x) {
            return Err(SphericalError::PreconditionViolation(format!(
                "arc {x} outside [0, \u{3c0}]"
            )));
        }
    }
    let mut cur = PolarInterval::point(first).expect("arc in range");
    for &x in rest {
        cur = cur.fold(x);
    }
    Ok(ReachZone {
        center: center.normalize(),
        near_radius: cur.lo,
        far_radius: cur.hi,
    })
}

/// Axis for moving `v` along its meridian (great circle through ±z).
fn meridian_axis(v: &Vec3) -> Vec3 {
    let c = v.cross(&Vec3::z());
    let n = c.norm();
    if n < 1e-12 {
        Vec3::y()
    } else {
        c / n
    }
}

/// Realize an accepted sequence by walking the trace backwards from the
/// north pole, keeping every intermediate vertex inside its interval.
pub fn backtrack_realization(
    a: &AngleSequence,
    trace: &ZoneTrace,
) -> Result<SphericalPolygon, SphericalError> {
    let arcs = arc_lengths_of(a)?;
    let n = arcs.len();
    if trace.intervals.len() != n {
        return Err(SphericalError::PreconditionViolation(format!(
            "trace has {} intervals for {} arcs",
            trace.intervals.len(),
            n
        )));
    }
    if trace.intervals[n - 1].lo > TOL_ZONE {
        return Err(SphericalError::PreconditionViolation(
            "sequence is not spherically realizable".into(),
        ));
    }

    let pole = Vec3::z();
    let mut u = vec![pole; n];
    for i in (1..n).rev() {
        let cur = u[i];
        let phi = spherical_distance(&cur, &pole);
        let alpha = arcs[i];
        let target = &trace.intervals[i - 1];
        let axis = meridian_axis(&cur);
        let toward = polar_sub_unchecked(phi, alpha);
        let away = polar_add_unchecked(phi, alpha);
        let pick = if target.contains(toward, TOL_ZONE) {
            // rotate towards (possibly through) the pole
            rotate_about(&axis, alpha, &cur)
        } else if target.contains(away, TOL_ZONE) {
            rotate_about(&axis, -alpha, &cur)
        } else {
            boundary_candidate(&cur, alpha, target)?
        };
        u[i - 1] = pick.normalize();
    }

    for i in 0..n {
        let d = spherical_distance(&u[(i + n - 1) % n], &u[i]);
        if (d - arcs[i]).abs() > TOL_ZONE {
            return Err(SphericalError::InternalInconsistency(format!(
                "arc {i} came out as {d}, wanted {}",
                arcs[i]
            )));
        }
    }
    Ok(SphericalPolygon::new(u)?)
}

/// Neither meridian move lands inside the interval, so the candidate circle
/// must cross the interval's boundary circles; pick the crossing with the
/// smallest longitude.
fn boundary_candidate(
    cur: &Vec3,
    alpha: f64,
    target: &PolarInterval,
) -> Result<Vec3, SphericalError> {
    let pole = Vec3::z();
    let mut cands: Vec<Vec3> = Vec::new();
    let mut radii = vec![target.lo];
    if target.hi - target.lo > TOL_ZONE {
        radii.push(target.hi);
    }
    for &r in &radii {
        if r <= TOL_ZONE {
            cands.push(pole);
            continue;
        }
        if r >= std::f64::consts::PI - TOL_ZONE {
            cands.push(-pole);
            continue;
        }
        match circle_circle_intersections(cur, alpha, &pole, r) {
            CircleCircle::Pair(x, y) => {
                cands.push(x);
                cands.push(y);
            }
            CircleCircle::Circle => {
                // concentric with the pole: any longitude works
                cands.push(Vec3::new(r.sin(), 0.0, r.cos()));
            }
            CircleCircle::Empty => {}
        }
    }
    cands.retain(|c| {
        (spherical_distance(c, cur) - alpha).abs() <= 10.0 * TOL_ZONE
            && target.contains(spherical_distance(c, &pole), 10.0 * TOL_ZONE)
    });
    cands
        .into_iter()
        .map(|c| (c.y.atan2(c.x), c))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(_, c)| c)
        .ok_or_else(|| {
            SphericalError::InternalInconsistency(
                "no backtracking candidate reaches the propagated interval".into(),
            )
        })
}
