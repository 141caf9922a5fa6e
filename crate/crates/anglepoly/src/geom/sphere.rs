//! Unit-sphere primitives: geodesics, rotations, circle intersections, and
//! spherical polygons made of great-circle arcs.

use nalgebra::{Unit, UnitQuaternion};

use super::angles::GeomError;
use super::{Vec3, TOL_UNIT};

/// Geodesic distance between unit vectors, in [0, π].
///
/// atan2 of cross/dot rather than acos of dot: acos loses half the precision
/// near 0 and π, and near-antipodal separations matter here.
pub fn spherical_distance(a: &Vec3, b: &Vec3) -> f64 {
    a.cross(b).norm().atan2(a.dot(b))
}

/// Rotate `v` by `angle` about the (normalized) `axis`.
pub fn rotate_about(axis: &Vec3, angle: f64, v: &Vec3) -> Vec3 {
    let q = UnitQuaternion::from_axis_angle(&Unit::new_normalize(*axis), angle);
    q * v
}

/// Unit tangent at `x` pointing along the geodesic towards `y`.
pub fn tangent_towards(x: &Vec3, y: &Vec3) -> Result<Vec3, GeomError> {
    let t = y - x * x.dot(y);
    let n = t.norm();
    if n < TOL_UNIT {
        return Err(GeomError::DegenerateVertex(
            "tangent undefined: points identical or antipodal".into(),
        ));
    }
    Ok(t / n)
}

/// Point at geodesic distance `dist` from `x` in unit tangent direction `dir`.
pub fn point_at(x: &Vec3, dir: &Vec3, dist: f64) -> Vec3 {
    x * dist.cos() + dir * dist.sin()
}

/// Continue the geodesic through x then y for `extra` beyond y.
pub fn extend_geodesic(x: &Vec3, y: &Vec3, extra: f64) -> Result<Vec3, GeomError> {
    let dir = tangent_towards(x, y)?;
    Ok(point_at(x, &dir, spherical_distance(x, y) + extra))
}

/// Unsigned turning angle at `cur` between arcs (prev, cur) and (cur, next),
/// in [0, π]: 0 means straight continuation, π means full reversal (spur).
pub fn spherical_turning_angle(prev: &Vec3, cur: &Vec3, next: &Vec3) -> Result<f64, GeomError> {
    let back = tangent_towards(cur, prev)?;
    let fwd = tangent_towards(cur, next)?;
    Ok((-back.dot(&fwd)).clamp(-1.0, 1.0).acos())
}

/// Intersection of circle(c1, r1) with circle(c2, r2) on the unit sphere,
/// radii being geodesic.
#[derive(Debug, Clone)]
pub enum CircleCircle {
    Empty,
    /// Two intersection points (equal when the circles are tangent).
    Pair(Vec3, Vec3),
    /// The circles coincide.
    Circle,
}

pub fn circle_circle_intersections(c1: &Vec3, r1: f64, c2: &Vec3, r2: f64) -> CircleCircle {
    let d = c1.dot(c2).clamp(-1.0, 1.0);
    let s2 = 1.0 - d * d;
    if s2 < TOL_UNIT {
        // Aligned (or anti-aligned) centres: circles are parallel smalls.
        let same = d > 0.0;
        let coincide = if same {
            (r1 - r2).abs() < 1e-9
        } else {
            (r1 + r2 - std::f64::consts::PI).abs() < 1e-9
        };
        return if coincide {
            CircleCircle::Circle
        } else {
            CircleCircle::Empty
        };
    }
    // Solve x = a c1 + b c2 + t (c1 × c2)/|c1 × c2| with x·c1 = cos r1,
    // x·c2 = cos r2, |x| = 1.
    let a = (r1.cos() - r2.cos() * d) / s2;
    let b = (r2.cos() - r1.cos() * d) / s2;
    let g2 = 1.0 - (a * a + b * b + 2.0 * a * b * d);
    if g2 < -1e-12 {
        return CircleCircle::Empty;
    }
    let g = g2.max(0.0).sqrt();
    let axis = c1.cross(c2) / s2.sqrt();
    let base = c1 * a + c2 * b;
    CircleCircle::Pair(base + axis * g, base - axis * g)
}

/// A closed spherical polygon: unit vertices joined by minor great-circle
/// arcs, consecutive vertices neither identical nor antipodal.
#[derive(Debug, Clone)]
pub struct SphericalPolygon {
    vertices: Vec<Vec3>,
}

impl SphericalPolygon {
    pub fn new(vertices: Vec<Vec3>) -> Result<Self, GeomError> {
        if vertices.len() < 3 {
            return Err(GeomError::DegenerateVertex(format!(
                "need at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        let vertices: Vec<Vec3> = vertices.into_iter().map(|v| v.normalize()).collect();
        let n = vertices.len();
        for i in 0..n {
            let j = (i + 1) % n;
            let d = vertices[i].dot(&vertices[j]);
            if d > 1.0 - TOL_UNIT {
                return Err(GeomError::DegenerateVertex(format!(
                    "vertices {i} and {j} coincide"
                )));
            }
            if d < -1.0 + TOL_UNIT {
                return Err(GeomError::DegenerateVertex(format!(
                    "vertices {i} and {j} are antipodal; the arc between them is ambiguous"
                )));
            }
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Arc lengths indexed by head vertex: arc i joins vertex i-1 to vertex i.
    pub fn arc_lengths(&self) -> Vec<f64> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| spherical_distance(&self.vertices[(i + n - 1) % n], &self.vertices[i]))
            .collect()
    }

    /// Unsigned turning angles at each vertex, in [0, π].
    pub fn turning_angles(&self) -> Result<Vec<f64>, GeomError> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                spherical_turning_angle(
                    &self.vertices[(i + n - 1) % n],
                    &self.vertices[i],
                    &self.vertices[(i + 1) % n],
                )
            })
            .collect()
    }
}

/// Any unit vector orthogonal to `v`.
pub fn polar_of(v: &Vec3) -> Vec3 {
    let trial = if v.x.abs() < 0.9 {
        Vec3::x()
    } else {
        Vec3::y()
    };
    (trial - v * v.dot(&trial)).normalize()
}
