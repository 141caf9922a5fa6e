//! Base case of the planar recursion: every turning angle has the same sign,
//! so the turning number k satisfies |k| ≥ 1 and the minimum crossing count
//! is |k| - 1.
//!
//! Construction sketch: grow an open chain that starts on the x-axis and
//! turns through all the angles, each new edge at most half the distance to
//! anything built so far (so the chain never touches itself and stays in the
//! upper half-plane, winding k times). The last edge again points along +x;
//! a horizontal ray from its tip pierces exactly |k| earlier edges. Shrinking
//! the initial piece of the chain by a homothety that fixes the rightmost
//! pierced edge and maps the x-axis onto the ray line closes the polygon
//! without disturbing any turning angle, and turns the remaining |k| - 1
//! pierced edges into the crossings.

use std::f64::consts::TAU;

use crate::geom::{crossing_report, PlanarPolygon, Vec2};

use super::PlanarError;

const SHRINKS: [f64; 8] = [0.5, 0.47, 0.53, 0.44, 0.56, 0.41, 0.59, 0.38];

pub(crate) fn realize_spiral(angles: &[f64]) -> Result<Vec<Vec2>, PlanarError> {
    if angles.iter().all(|&a| a < 0.0) {
        let neg: Vec<f64> = angles.iter().map(|a| -a).collect();
        let mut pts = spiral_positive(&neg)?;
        // Mirroring flips every turning angle's sign and keeps the last edge
        // along +x; crossing counts are unaffected.
        for p in pts.iter_mut() {
            p.y = -p.y;
        }
        return Ok(pts);
    }
    if !angles.iter().all(|&a| a > 0.0) {
        return Err(PlanarError::PreconditionViolation(
            "spiral case requires all turns of one sign".into(),
        ));
    }
    spiral_positive(angles)
}

fn spiral_positive(angles: &[f64]) -> Result<Vec<Vec2>, PlanarError> {
    let total: f64 = angles.iter().sum();
    let k = (total / TAU).round() as i64;
    if k < 1 || (total - k as f64 * TAU).abs() > 1e-6 {
        return Err(PlanarError::InternalInconsistency(format!(
            "positive spiral needs a positive multiple of 2pi, got sum {total}"
        )));
    }
    for &shrink in &SHRINKS {
        if let Some(pts) = try_spiral(angles, k as usize, shrink) {
            return Ok(pts);
        }
    }
    Err(PlanarError::InternalInconsistency(
        "spiral construction failed for all shrink parameters".into(),
    ))
}

/// First positive parameter at which the ray p + t d hits the x-axis or one
/// of the given edges.
fn clearance(p: Vec2, d: Vec2, edges: &[(Vec2, Vec2)]) -> f64 {
    let mut tmin = f64::INFINITY;
    if d.y < -1e-15 {
        let t = -p.y / d.y;
        if t > 1e-12 {
            tmin = tmin.min(t);
        }
    }
    for &(a, b) in edges {
        let e = b - a;
        let denom = d.x * e.y - d.y * e.x;
        if denom.abs() < 1e-15 {
            continue;
        }
        let ap = a - p;
        let t = (ap.x * e.y - ap.y * e.x) / denom;
        let u = (ap.x * d.y - ap.y * d.x) / denom;
        if t > 1e-9 && (-1e-12..=1.0 + 1e-12).contains(&u) {
            tmin = tmin.min(t);
        }
    }
    tmin
}

/// Chain points p_0 .. p_{n+1}: p_0 = origin, edge 0 of unit length on the
/// x-axis, edge m leaving p_m in direction β_{m-1}, each clipped to `shrink`
/// times the free space ahead. All interior vertices end strictly above the
/// axis and the chain is simple.
fn build_chain(angles: &[f64], shrink: f64) -> Option<Vec<Vec2>> {
    let n = angles.len();
    let mut beta = Vec::with_capacity(n);
    let mut acc = 0.0;
    for &a in angles {
        acc += a;
        beta.push(acc);
    }
    let mut pts = vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0)];
    let mut edges: Vec<(Vec2, Vec2)> = vec![(pts[0], pts[1])];
    for m in 1..=n {
        let d = if m == n {
            Vec2::new(1.0, 0.0)
        } else {
            Vec2::new(beta[m - 1].cos(), beta[m - 1].sin())
        };
        let p = pts[m];
        let tmin = clearance(p, d, &edges[..m.saturating_sub(1)]);
        let len = (shrink * tmin).min(1.0);
        if len < 1e-9 {
            return None;
        }
        let q = p + d * len;
        pts.push(q);
        edges.push((p, q));
    }
    Some(pts)
}

struct RayHits {
    /// (x coordinate, edge index), crossings right of the tip only.
    hits: Vec<(f64, usize)>,
}

/// Transversal crossings of the horizontal line y = p_n.y with chain edges
/// E_1 .. E_{n-2}, keeping those strictly right of the tip p_{n+1}. None on
/// any near-degeneracy (vertex on the line, crossing at the tip).
fn ray_hits(pts: &[Vec2]) -> Option<RayHits> {
    let n = pts.len() - 2;
    let y_ray = pts[n].y;
    let tip_x = pts[n + 1].x;
    let scale = pts
        .iter()
        .map(|p| p.x.abs().max(p.y.abs()))
        .fold(1.0_f64, f64::max);
    let tol = 1e-9 * scale;
    let mut hits = Vec::new();
    for m in 1..=n.saturating_sub(2) {
        let y1 = pts[m].y - y_ray;
        let y2 = pts[m + 1].y - y_ray;
        if y1.abs() < tol || y2.abs() < tol {
            return None;
        }
        if y1 * y2 < 0.0 {
            let t = y1 / (y1 - y2);
            let xc = pts[m].x + t * (pts[m + 1].x - pts[m].x);
            if (xc - tip_x).abs() < tol {
                return None;
            }
            if xc > tip_x {
                hits.push((xc, m));
            }
        }
    }
    Some(RayHits { hits })
}

fn try_spiral(angles: &[f64], k: usize, shrink: f64) -> Option<Vec<Vec2>> {
    let n = angles.len();
    let mut pts = build_chain(angles, shrink)?;

    // The ray height depends on p_n; re-shortening the edge into p_n moves it
    // off any degenerate height in a few tries.
    let mut last_ok: Option<RayHits> = None;
    for _ in 0..40 {
        match ray_hits(&pts) {
            Some(r) if r.hits.len() == k => {
                let (_, j) = r.hits.iter().cloned().fold(
                    (f64::NEG_INFINITY, usize::MAX),
                    |acc, h| if h.0 > acc.0 { h } else { acc },
                );
                // The rightmost pierced edge must head upwards for the
                // homothety below to preserve orientation.
                if pts[j + 1].y > pts[j].y {
                    last_ok = Some(r);
                    break;
                }
            }
            _ => {}
        }
        let d = pts[n] - pts[n - 1];
        pts[n] = pts[n - 1] + d * 0.618;
        // Rebuild the final horizontal edge from the moved p_n.
        let edges: Vec<(Vec2, Vec2)> = (0..n - 1).map(|i| (pts[i], pts[i + 1])).collect();
        let dlast = Vec2::new(1.0, 0.0);
        let tmin = clearance(pts[n], dlast, &edges);
        let len = (shrink * tmin).min(1.0);
        if len < 1e-9 {
            return None;
        }
        pts[n + 1] = pts[n] + dlast * len;
    }
    let hits = last_ok?;

    let (cx, j) = hits
        .hits
        .iter()
        .cloned()
        .fold((f64::NEG_INFINITY, usize::MAX), |acc, h| {
            if h.0 > acc.0 {
                h
            } else {
                acc
            }
        });
    let c = Vec2::new(cx, pts[n].y);
    let ej = pts[j + 1] - pts[j];
    // Foot of edge j's supporting line on the x-axis; the homothety z ↦
    // c + eps (z - q) then maps the axis onto the ray line and fixes the
    // line of edge j, so every shrunk initial vertex keeps its angles. The
    // y-coordinate is zero by definition; forcing it keeps the closing edge
    // exactly horizontal.
    let q = Vec2::new(pts[j].x - ej.x * (pts[j].y / ej.y), 0.0);

    let mut eps = 0.5;
    for _ in 0..60 {
        let mut verts: Vec<Vec2> = Vec::with_capacity(n);
        for p in pts.iter().take(j + 1).skip(1) {
            verts.push(c + (p - q) * eps);
        }
        for p in pts.iter().take(n + 1).skip(j + 1) {
            verts.push(*p);
        }
        if validate(&verts, angles, k, &pts, j, c) {
            return Some(verts);
        }
        eps *= 0.5;
    }
    None
}

fn validate(
    verts: &[Vec2],
    angles: &[f64],
    k: usize,
    pts: &[Vec2],
    j: usize,
    c: Vec2,
) -> bool {
    let n = angles.len();
    // Image of p_j must stay between the pierce point and p_{j+1}. When
    // j = 1 the homothety center is p_1 itself and the image IS the pierce
    // point, which is fine: the old initial piece is discarded entirely.
    let ej = pts[j + 1] - pts[j];
    let tpj = verts[j - 1];
    let tau = (tpj - pts[j]).dot(&ej) / ej.norm_squared();
    let tc = (c - pts[j]).dot(&ej) / ej.norm_squared();
    let lower_ok = if j == 1 { tau >= tc } else { tau > tc };
    if !(lower_ok && tau < 1.0 - 1e-9) {
        return false;
    }
    // Closing edge runs along +x with positive length.
    if verts[0].x <= pts[n].x {
        return false;
    }
    let poly = match PlanarPolygon::new(verts.to_vec()) {
        Ok(p) => p,
        Err(_) => return false,
    };
    let report = crossing_report(&poly);
    if !report.generic || report.count != k - 1 {
        return false;
    }
    match poly.turning_angles() {
        Ok(realized) => realized
            .iter()
            .zip(angles)
            .all(|(r, a)| (r - a).abs() < 1e-8),
        Err(_) => false,
    }
}
