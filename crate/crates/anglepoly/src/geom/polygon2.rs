//! Plane polygons: crossing detection and turning numbers.

use serde::Serialize;

use super::angles::{turning_angle_2d, GeomError};
use super::{Vec2, TOL_GENERIC, TOL_MARGIN};

/// A closed polygon in the plane, vertices in cyclic order.
#[derive(Debug, Clone)]
pub struct PlanarPolygon {
    vertices: Vec<Vec2>,
}

impl PlanarPolygon {
    pub fn new(vertices: Vec<Vec2>) -> Result<Self, GeomError> {
        if vertices.len() < 3 {
            return Err(GeomError::DegenerateVertex(format!(
                "need at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Endpoints of edge i = (w_i, w_{i+1}).
    pub fn edge(&self, i: usize) -> (Vec2, Vec2) {
        let n = self.vertices.len();
        (self.vertices[i % n], self.vertices[(i + 1) % n])
    }

    /// Turning angle at vertex i (between edges i-1 and i).
    pub fn turning_at(&self, i: usize) -> Result<f64, GeomError> {
        let n = self.vertices.len();
        turning_angle_2d(
            &self.vertices[(i + n - 1) % n],
            &self.vertices[i],
            &self.vertices[(i + 1) % n],
        )
    }

    /// All n turning angles in vertex order.
    pub fn turning_angles(&self) -> Result<Vec<f64>, GeomError> {
        (0..self.vertices.len()).map(|i| self.turning_at(i)).collect()
    }

    /// Turning number: the integer t with Σ turning angles = 2πt.
    pub fn turning_number(&self) -> Result<i64, GeomError> {
        let sum: f64 = self.turning_angles()?.iter().sum();
        let k = (sum / std::f64::consts::TAU).round();
        let residual = (sum - k * std::f64::consts::TAU).abs();
        if residual >= TOL_MARGIN {
            return Err(GeomError::NotClosedToInteger { residual });
        }
        Ok(k as i64)
    }

    pub fn coordinate_scale(&self) -> f64 {
        self.vertices
            .iter()
            .map(|v| v.x.abs().max(v.y.abs()))
            .fold(1.0_f64, f64::max)
    }
}

/// One transversal self-intersection between two non-adjacent edges.
#[derive(Debug, Clone, Serialize)]
pub struct Crossing {
    pub edge_a: usize,
    pub edge_b: usize,
    /// Parameter of the crossing along edge_a, in (0, 1).
    pub t_a: f64,
    /// Parameter along edge_b.
    pub t_b: f64,
    pub point: [f64; 2],
}

#[derive(Debug, Clone)]
pub struct CrossingReport {
    pub count: usize,
    /// False when some pair of edges touches, overlaps, or passes through a
    /// vertex within tolerance — the count is then unreliable.
    pub generic: bool,
    pub crossings: Vec<Crossing>,
}

enum PairKind {
    Disjoint,
    Proper(f64, f64),
    Touch,
    Degenerate,
}

fn classify_pair(p: Vec2, p2: Vec2, q: Vec2, q2: Vec2, tol: f64) -> PairKind {
    let r = p2 - p;
    let s = q2 - q;
    let rn = r.norm();
    let sn = s.norm();
    if rn < tol || sn < tol {
        return PairKind::Degenerate;
    }
    let denom = r.x * s.y - r.y * s.x;
    let qp = q - p;
    if denom.abs() < tol * rn * sn {
        // Parallel. Overlapping collinear segments make the count meaningless.
        let off = (qp.x * r.y - qp.y * r.x).abs() / rn;
        if off < tol {
            let t0 = qp.dot(&r) / (rn * rn);
            let t1 = (q2 - p).dot(&r) / (rn * rn);
            let (lo, hi) = (t0.min(t1), t0.max(t1));
            if hi > -tol / rn && lo < 1.0 + tol / rn {
                return PairKind::Degenerate;
            }
        }
        return PairKind::Disjoint;
    }
    let t = (qp.x * s.y - qp.y * s.x) / denom;
    let u = (qp.x * r.y - qp.y * r.x) / denom;
    let et = tol / rn;
    let eu = tol / sn;
    if t < -et || t > 1.0 + et || u < -eu || u > 1.0 + eu {
        return PairKind::Disjoint;
    }
    if t > et && t < 1.0 - et && u > eu && u < 1.0 - eu {
        return PairKind::Proper(t, u);
    }
    PairKind::Touch
}

/// Count transversal self-intersections and report genericity.
///
/// Adjacent edges never count. Vertex coincidences, vertices lying on
/// non-incident edges, and collinear overlaps clear the `generic` flag.
pub fn crossing_report(poly: &PlanarPolygon) -> CrossingReport {
    let n = poly.len();
    let verts = poly.vertices();
    let tol = TOL_GENERIC * poly.coordinate_scale();
    let mut generic = true;

    for i in 0..n {
        for j in (i + 1)..n {
            if (verts[i] - verts[j]).norm() < tol {
                generic = false;
            }
        }
    }
    // A vertex sitting in the interior of a non-incident edge breaks
    // genericity even when every pairwise test below stays clean.
    for v in 0..n {
        for e in 0..n {
            if e == v || (e + 1) % n == v {
                continue;
            }
            let (a, b) = poly.edge(e);
            let d = b - a;
            let len = d.norm();
            if len < tol {
                generic = false;
                continue;
            }
            let t = (verts[v] - a).dot(&d) / (len * len);
            if t > tol / len && t < 1.0 - tol / len {
                let perp = ((verts[v] - a).x * d.y - (verts[v] - a).y * d.x).abs() / len;
                if perp < tol {
                    generic = false;
                }
            }
        }
    }

    let mut crossings = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            // Skip adjacent pairs (cyclically).
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            let (p, p2) = poly.edge(i);
            let (q, q2) = poly.edge(j);
            match classify_pair(p, p2, q, q2, tol) {
                PairKind::Disjoint => {}
                PairKind::Proper(t, u) => {
                    let pt = p + (p2 - p) * t;
                    crossings.push(Crossing {
                        edge_a: i,
                        edge_b: j,
                        t_a: t,
                        t_b: u,
                        point: [pt.x, pt.y],
                    });
                }
                PairKind::Touch => generic = false,
                PairKind::Degenerate => generic = false,
            }
        }
    }
    CrossingReport {
        count: crossings.len(),
        generic,
        crossings,
    }
}

/// (number of transversal self-intersections, generic flag).
pub fn count_crossings(poly: &PlanarPolygon) -> (usize, bool) {
    let r = crossing_report(poly);
    (r.count, r.generic)
}

/// Turning number of a polygon given as bare points.
pub fn turning_number(vertices: &[Vec2]) -> Result<i64, GeomError> {
    PlanarPolygon::new(vertices.to_vec())?.turning_number()
}
