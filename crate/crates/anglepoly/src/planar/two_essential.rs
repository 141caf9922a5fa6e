//! Terminal case of the planar recursion: turning number zero, exactly two
//! sign changes, both essential. One crossing is unavoidable, and one
//! suffices: the positive block and the negative block each close up into a
//! convex loop, the two loops sharing a single point through which both
//! "merged" edges pass — the crossing.

use crate::geom::{crossing_report, origin_in_relint_conv_2d, wrap_to_pi, PlanarPolygon, Vec2};

use super::{edge_directions, is_essential, sign_changes, PlanarError};

pub(crate) fn realize_two_essential(angles: &[f64]) -> Result<Vec<Vec2>, PlanarError> {
    let n = angles.len();
    let changes = sign_changes(angles);
    if changes.len() != 2 {
        return Err(PlanarError::PreconditionViolation(format!(
            "need exactly two sign changes, found {}",
            changes.len()
        )));
    }
    if wrap_to_pi(angles.iter().sum()).abs() > 1e-6 {
        return Err(PlanarError::PreconditionViolation(
            "two-loop case requires turning number zero".into(),
        ));
    }
    for &s in &changes {
        if !is_essential(angles, s) {
            return Err(PlanarError::PreconditionViolation(format!(
                "sign change at {s} is not essential"
            )));
        }
    }

    // Rotate labels so a maximal sign block starts at 0, and flip signs so
    // that block is positive. Both are undone at the end.
    let r = (changes[0] + 1) % n;
    let mut b: Vec<f64> = (0..n).map(|q| angles[(q + r) % n]).collect();
    let mirror = b[0] < 0.0;
    if mirror {
        for x in b.iter_mut() {
            *x = -*x;
        }
    }
    let j = (0..n - 1)
        .find(|&i| b[i] > 0.0 && b[i + 1] < 0.0)
        .ok_or_else(|| {
            PlanarError::InternalInconsistency("sign block structure lost after rotation".into())
        })?;

    // For a consistent sequence with both changes essential the positive
    // block must turn through strictly between pi and 2 pi; anything else
    // means the preconditions were wrong after all.
    let bsum: f64 = b[..=j].iter().sum();
    if !(std::f64::consts::PI + 1e-9..=std::f64::consts::TAU - 1e-9).contains(&bsum) {
        return Err(PlanarError::InternalInconsistency(format!(
            "positive block turns through {bsum}, outside (pi, 2pi)"
        )));
    }

    let v = edge_directions(&b);

    // Counterclockwise loop: the closing edge direction, then the directions
    // of the positive block. Interior turns are b[0..=j] plus 2pi - bsum at
    // the shared point, all in (0, pi).
    let d2: Vec<Vec2> = std::iter::once(v[n - 1])
        .chain(v[..=j].iter().copied())
        .collect();
    // Clockwise loop: directions from the block boundary through the closing
    // edge; turns are b[j+1..] plus bsum - 2pi, all in (-pi, 0).
    let d1: Vec<Vec2> = v[j..].to_vec();

    let w2 = origin_in_relint_conv_2d(&d2).ok_or_else(|| {
        PlanarError::InternalInconsistency("no positive closure for the ccw loop".into())
    })?;
    let w1 = origin_in_relint_conv_2d(&d1).ok_or_else(|| {
        PlanarError::InternalInconsistency("no positive closure for the cw loop".into())
    })?;
    let l2: Vec<f64> = w2.coefficients.iter().map(|&k| k * d2.len() as f64).collect();
    let l1: Vec<f64> = w1.coefficients.iter().map(|&k| k * d1.len() as f64).collect();

    // Walk both loops from the shared point at the origin. The edge from
    // w[j] to w[j+1] and the edge from w[n-1] to w[0] each pass through it.
    let mut w = vec![Vec2::zeros(); n];
    w[0] = v[n - 1] * l2[0];
    for q in 1..=j {
        w[q] = w[q - 1] + v[q - 1] * l2[q];
    }
    w[j + 1] = v[j] * l1[0];
    for q in j + 2..n {
        w[q] = w[q - 1] + v[q - 1] * l1[q - j - 1];
    }

    let mut out: Vec<Vec2> = (0..n).map(|p| w[(p + n - r) % n]).collect();
    if mirror {
        for p in out.iter_mut() {
            p.y = -p.y;
        }
    }

    let poly = PlanarPolygon::new(out.clone())?;
    let report = crossing_report(&poly);
    if !report.generic || report.count != 1 {
        return Err(PlanarError::InternalInconsistency(format!(
            "two-loop construction produced {} crossings (generic: {})",
            report.count, report.generic
        )));
    }
    let realized = poly.turning_angles()?;
    if realized
        .iter()
        .zip(angles)
        .any(|(r, a)| (r - a).abs() > 1e-8)
    {
        return Err(PlanarError::InternalInconsistency(
            "two-loop construction does not reproduce the angles".into(),
        ));
    }
    Ok(out)
}
