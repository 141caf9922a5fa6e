//! Shared generators for the integration tests.
#![allow(dead_code)] // each test binary uses its own subset of helpers

use anglepoly::geom::{crossing_report, PlanarPolygon, SphericalPolygon, Vec2, Vec3};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A random closed polygon with generic crossings and no near-reversal
/// vertices. Rejection-sampled, so it always terminates in practice.
pub fn random_generic_polygon(rng: &mut ChaCha8Rng, n: usize) -> PlanarPolygon {
    loop {
        let pts: Vec<Vec2> = (0..n)
            .map(|_| Vec2::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let Ok(poly) = PlanarPolygon::new(pts) else {
            continue;
        };
        let Ok(angles) = poly.turning_angles() else {
            continue;
        };
        if angles
            .iter()
            .any(|a| a.abs() > std::f64::consts::PI - 1e-3 || a.abs() < 1e-6)
        {
            continue;
        }
        let report = crossing_report(&poly);
        if !report.generic {
            continue;
        }
        if poly.turning_number().is_err() {
            continue;
        }
        return poly;
    }
}

pub fn random_unit_vector(rng: &mut ChaCha8Rng) -> Vec3 {
    loop {
        let v = Vec3::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        let norm = v.norm();
        if norm > 1e-2 && norm <= 1.0 {
            return v / norm;
        }
    }
}

/// A random spherical polygon whose consecutive vertices are separated by at
/// least `min_arc` and at most pi - `min_arc`.
#[allow(dead_code)]
pub fn random_spherical_polygon(rng: &mut ChaCha8Rng, n: usize, min_arc: f64) -> SphericalPolygon {
    'outer: loop {
        let mut verts: Vec<Vec3> = Vec::with_capacity(n);
        verts.push(random_unit_vector(rng));
        for i in 1..n {
            let mut tries = 0;
            loop {
                let v = random_unit_vector(rng);
                let d_prev = verts[i - 1].dot(&v).clamp(-1.0, 1.0).acos();
                let closing_ok = if i == n - 1 {
                    let d0 = verts[0].dot(&v).clamp(-1.0, 1.0).acos();
                    d0 > min_arc && d0 < std::f64::consts::PI - min_arc
                } else {
                    true
                };
                if d_prev > min_arc && d_prev < std::f64::consts::PI - min_arc && closing_ok {
                    verts.push(v);
                    break;
                }
                tries += 1;
                if tries > 200 {
                    continue 'outer;
                }
            }
        }
        if let Ok(p) = SphericalPolygon::new(verts) {
            return p;
        }
    }
}
