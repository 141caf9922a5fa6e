//! Local two-vertex surgery: move u_i and u_{i+1}, keeping all arc lengths,
//! until the polygon picks up a flat vertex (turning angle 0) or a spur
//! (turning angle π) next to the moved pair.

use crate::geom::polar::polar_sub_unchecked;
use crate::geom::{
    circle_circle_intersections, extend_geodesic, point_at, polar_of, spherical_distance,
    spherical_turning_angle, tangent_towards, AngleSequence, CircleCircle, PolarInterval,
    SphericalPolygon, Vec3,
};

use super::SphericalError;

/// Classification tolerance for flat / spur turning angles.
pub(crate) const TOL_TURN: f64 = 1e-7;

/// Which terminal condition the surgery established.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum StraightenOutcome {
    /// Turning angle 0 at u_{i-1}.
    FlatAtPrev,
    /// Turning angle 0 at the new u_{i+1}.
    FlatAtNext,
    /// Turning angle π at the new u_{i+1}.
    SpurAtNext,
}

/// Pick the intersection of two spherical circles closest to `prefer`.
///
/// Falls back to the nearest boundary configuration when the circles miss by
/// a numerical hair, so callers dispatching with tolerances never die on an
/// `Empty`.
pub(crate) fn circles_meet(
    c1: &Vec3,
    r1: f64,
    c2: &Vec3,
    r2: f64,
    prefer: &Vec3,
) -> Result<Vec3, SphericalError> {
    match circle_circle_intersections(c1, r1, c2, r2) {
        CircleCircle::Pair(x, y) => {
            Ok(if (x - prefer).norm_squared() <= (y - prefer).norm_squared() {
                x
            } else {
                y
            })
        }
        CircleCircle::Circle => {
            let dir = tangent_towards(c1, prefer)
                .unwrap_or_else(|_| polar_of(c1));
            Ok(point_at(c1, &dir, r1))
        }
        CircleCircle::Empty => {
            // Nearly tangent: stay on circle(c1, r1) along the meridian
            // through c2, whichever side best matches r2.
            let dir = tangent_towards(c1, c2).map_err(|_| {
                SphericalError::InternalInconsistency(
                    "circle intersection empty with coincident centres".into(),
                )
            })?;
            let a = point_at(c1, &dir, r1);
            let b = point_at(c1, &dir, -r1);
            let da = (spherical_distance(&a, c2) - r2).abs();
            let db = (spherical_distance(&b, c2) - r2).abs();
            let (best, err) = if da <= db { (a, da) } else { (b, db) };
            if err > 1e-6 {
                return Err(SphericalError::InternalInconsistency(format!(
                    "circles expected to meet are {err} apart"
                )));
            }
            Ok(best)
        }
    }
}

/// Core of [`straighten`], on raw vertex/arc slices so the enclosing surgery
/// can reuse it on derived polygons.
pub(crate) fn straighten_arcs(
    u: &[Vec3],
    arcs: &[f64],
    i: usize,
) -> Result<(Vec<Vec3>, StraightenOutcome), SphericalError> {
    let n = u.len();
    if n < 4 {
        return Err(SphericalError::PreconditionViolation(format!(
            "straighten needs at least 4 vertices, got {n}"
        )));
    }
    if arcs.len() != n || i >= n {
        return Err(SphericalError::PreconditionViolation(
            "index/arc list mismatch".into(),
        ));
    }
    let im2 = (i + n - 2) % n;
    let im1 = (i + n - 1) % n;
    let ip1 = (i + 1) % n;
    let ip2 = (i + 2) % n;
    let a_i = arcs[i];
    let a1 = arcs[ip1];
    let a2 = arcs[ip2];

    // Already terminal? Leave the polygon untouched.
    if let Ok(t) = spherical_turning_angle(&u[im2], &u[im1], &u[i]) {
        if t <= TOL_TURN {
            return Ok((u.to_vec(), StraightenOutcome::FlatAtPrev));
        }
    }
    if let Ok(t) = spherical_turning_angle(&u[i], &u[ip1], &u[ip2]) {
        if t <= TOL_TURN {
            return Ok((u.to_vec(), StraightenOutcome::FlatAtNext));
        }
        if t >= std::f64::consts::PI - TOL_TURN {
            return Ok((u.to_vec(), StraightenOutcome::SpurAtNext));
        }
    }

    // Annulus of positions for u_i around u_{i+2} through the two-arc chain.
    let zone = PolarInterval::point(a2).expect("arc in range").fold(a1);
    let (near, far) = (zone.lo, zone.hi);
    if far - near < 1e-12 {
        return Err(SphericalError::PreconditionViolation(
            "degenerate reach zone".into(),
        ));
    }
    // Positions for u_i around u_{i+2} reachable on circle(u_{i-1}, a_i).
    let big_d = spherical_distance(&u[im1], &u[ip2]);
    let dzone = PolarInterval::point(big_d.clamp(0.0, std::f64::consts::PI))
        .expect("distance in range")
        .fold(a_i);
    let (dlo, dhi) = (dzone.lo, dzone.hi);
    let tol = super::TOL_ZONE;

    let mut v = u.to_vec();
    let outcome = if dlo >= near - tol && dhi <= far + tol {
        // Whole circle inside the annulus: flatten at u_{i-1}.
        let ui = extend_geodesic(&u[im2], &u[im1], a_i)?;
        v[ip1] = circles_meet(&ui, a1, &u[ip2], a2, &u[ip1])?;
        v[i] = ui;
        StraightenOutcome::FlatAtPrev
    } else if far >= dlo - tol && far <= dhi + tol {
        // Circle reaches the outer boundary: flatten at u_{i+1}.
        let ui = circles_meet(&u[im1], a_i, &u[ip2], far.min(dhi), &u[i])?;
        v[ip1] = straight_elbow(&ui, a1, &u[ip2], a2, &u[ip1])?;
        v[i] = ui;
        StraightenOutcome::FlatAtNext
    } else if near >= dlo - tol && near <= dhi + tol {
        // Circle reaches the inner boundary: fold a spur at u_{i+1}.
        let (ui, up1) = spur_elbow(u, arcs, i)?;
        v[i] = ui;
        v[ip1] = up1;
        StraightenOutcome::SpurAtNext
    } else {
        return Err(SphericalError::InternalInconsistency(
            "straighten dispatch found no overlapping case".into(),
        ));
    };

    for k in [i, ip1] {
        v[k] = v[k].normalize();
    }
    // Only arcs i, i+1, i+2 were touched; check them against the request.
    for k in [i, ip1, ip2] {
        let d = spherical_distance(&v[(k + n - 1) % n], &v[k]);
        if (d - arcs[k]).abs() > 1e-7 {
            return Err(SphericalError::InternalInconsistency(format!(
                "straighten broke arc {k}: {d} vs {}",
                arcs[k]
            )));
        }
    }
    Ok((v, outcome))
}

/// u_{i+1} placed so that u_i', u_{i+1}', u_{i+2} lie on one geodesic with
/// turning angle 0 at u_{i+1}'; `d(u_i', u_{i+2})` must be a1 ⊕ a2.
fn straight_elbow(
    ui: &Vec3,
    a1: f64,
    up2: &Vec3,
    a2: f64,
    old: &Vec3,
) -> Result<Vec3, SphericalError> {
    let long_way = a1 + a2 > std::f64::consts::PI;
    match tangent_towards(up2, ui) {
        Ok(dir) => {
            let dir = if long_way { -dir } else { dir };
            Ok(point_at(up2, &dir, a2))
        }
        Err(_) => {
            // u_i' antipodal to u_{i+2} (a1 + a2 = π): every direction works,
            // stay near the old vertex.
            let dir = tangent_towards(up2, old).unwrap_or_else(|_| polar_of(up2));
            Ok(point_at(up2, &dir, a2))
        }
    }
}

/// Place (u_i', u_{i+1}') as a spur: both arcs leave u_{i+1}' in the same
/// direction, so d(u_i', u_{i+2}) = |a1 - a2|.
fn spur_elbow(u: &[Vec3], arcs: &[f64], i: usize) -> Result<(Vec3, Vec3), SphericalError> {
    let n = u.len();
    let im1 = (i + n - 1) % n;
    let ip1 = (i + 1) % n;
    let ip2 = (i + 2) % n;
    let a_i = arcs[i];
    let a1 = arcs[ip1];
    let a2 = arcs[ip2];
    let near = polar_sub_unchecked(a2, a1);

    let ui = if near <= 1e-12 {
        // Equal arcs: u_i' lands (numerically) on u_{i+2} itself.
        match tangent_towards(&u[im1], &u[ip2]) {
            Ok(dir) => point_at(&u[im1], &dir, a_i),
            Err(_) => {
                let dir = tangent_towards(&u[im1], &u[i]).unwrap_or_else(|_| polar_of(&u[im1]));
                point_at(&u[im1], &dir, a_i)
            }
        }
    } else {
        circles_meet(&u[im1], a_i, &u[ip2], near, &u[i])?
    };

    let eta = spherical_distance(&ui, &u[ip2]);
    let up1 = if eta <= 1e-9 {
        let dir = tangent_towards(&u[ip2], &u[ip1]).unwrap_or_else(|_| polar_of(&u[ip2]));
        point_at(&u[ip2], &dir, a2)
    } else if a2 > a1 + 1e-12 {
        // u_i' sits between u_{i+1}' and u_{i+2}
        extend_geodesic(&u[ip2], &ui, a1)?
    } else if a1 > a2 + 1e-12 {
        // u_{i+2} sits between u_{i+1}' and u_i'
        extend_geodesic(&ui, &u[ip2], a2)?
    } else {
        // equal arcs but u_i' not exactly on u_{i+2}: isoceles placement
        circles_meet(&ui, a1, &u[ip2], a2, &u[ip1])?
    };
    Ok((ui, up1))
}

/// Move u_i and u_{i+1} (only) so that the polygon still realizes `a` and
/// one of the three terminal conditions holds: turning angle 0 at u_{i-1},
/// or 0 or π at the new u_{i+1}.
pub fn straighten(
    p: &SphericalPolygon,
    a: &AngleSequence,
    i: usize,
) -> Result<SphericalPolygon, SphericalError> {
    let arcs = super::arc_lengths_of(a)?;
    if p.len() != arcs.len() {
        return Err(SphericalError::PreconditionViolation(format!(
            "polygon has {} vertices, sequence {}",
            p.len(),
            arcs.len()
        )));
    }
    let (v, _) = straighten_arcs(p.vertices(), &arcs, i)?;
    Ok(SphericalPolygon::new(v)?)
}
