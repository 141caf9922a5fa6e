//! Lifting spherical direction polygons to closed polygons in R³, and the
//! full 3D realization pipeline for unsigned turning-angle sequences.
//!
//! The key correspondence: a closed space polygon with unit edge directions
//! u₀, …, u_{n−1} has turning angle at vertex j equal to the spherical
//! distance d(u_{j−1}, uⱼ). Realizing a sequence in R³ therefore reduces to
//! finding a spherical polygon whose arc lengths are the requested angles and
//! whose vertices positively span the origin — the strictly positive
//! convex-combination coefficients become the edge lengths.

use nalgebra::{Matrix3, SymmetricEigen};
use thiserror::Error;

use crate::geom::{
    count_crossings, origin_in_relint_conv, spherical_distance, AngleSequence, Dimension,
    GeomError, PlanarPolygon, SphericalPolygon, Vec2, Vec3,
};
use crate::planar::{realize_min_crossing, PlanarError};
use crate::spherical::{
    backtrack_realization, decide_spherical, enclose_origin, SphericalError,
};

/// Vertices this close to the best-fit plane make a polygon planar.
pub const TOL_PLANAR: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum LiftError {
    #[error("origin is not strictly inside the convex hull of the directions")]
    NoWitness,
    #[error("derived signed sequence is inconsistent: {0}")]
    SignedSequenceInconsistent(String),
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error(transparent)]
    Spherical(#[from] SphericalError),
    #[error(transparent)]
    Planar(#[from] PlanarError),
}

/// Why a sequence admits no closed polygon in R³.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnrealizableReason {
    /// The turning angles sum below 2π.
    TotalCurvatureBelow2Pi,
    /// No spherical polygon has these arc lengths.
    NoSphericalRealization,
}

/// Outcome of the 3D realization pipeline.
#[derive(Debug)]
pub enum Realization {
    Polygon(SpacePolygon),
    Unrealizable(UnrealizableReason),
}

/// A closed polygon in R³ with positive edge lengths.
#[derive(Debug, Clone)]
pub struct SpacePolygon {
    vertices: Vec<Vec3>,
    edge_lengths: Vec<f64>,
    planar: bool,
    plane_normal: Option<Vec3>,
    crossing_count: Option<usize>,
}

impl SpacePolygon {
    /// Build from a cyclic vertex list, deriving edge lengths, planarity
    /// (best-fit plane within [`TOL_PLANAR`]) and, for planar polygons, an
    /// in-plane self-intersection flag.
    pub fn from_vertices(vertices: Vec<Vec3>) -> Result<Self, LiftError> {
        let n = vertices.len();
        if n < 3 {
            return Err(LiftError::PreconditionViolation(format!(
                "{n} vertices do not form a polygon"
            )));
        }
        let mut edge_lengths = Vec::with_capacity(n);
        for i in 0..n {
            let len = (vertices[(i + 1) % n] - vertices[i]).norm();
            if len <= 1e-12 {
                return Err(LiftError::PreconditionViolation(format!(
                    "edge {i} has zero length"
                )));
            }
            edge_lengths.push(len);
        }

        let centroid = vertices.iter().sum::<Vec3>() / n as f64;
        let mut moments = Matrix3::zeros();
        for v in &vertices {
            let d = v - centroid;
            moments += d * d.transpose();
        }
        let eig = SymmetricEigen::new(moments);
        let k = eig.eigenvalues.imin();
        let normal = eig.eigenvectors.column(k).into_owned().normalize();
        let flatness = vertices
            .iter()
            .map(|v| (v - centroid).dot(&normal).abs())
            .fold(0.0, f64::max);
        let planar = flatness < TOL_PLANAR;

        let (plane_normal, crossing_count) = if planar {
            let e1 = complement_direction(&normal);
            let e2 = normal.cross(&e1);
            let flat: Vec<Vec2> = vertices
                .iter()
                .map(|v| Vec2::new((v - centroid).dot(&e1), (v - centroid).dot(&e2)))
                .collect();
            let poly = PlanarPolygon::new(flat)?;
            let (count, _) = count_crossings(&poly);
            (Some(normal), Some(count))
        } else {
            (None, None)
        };

        Ok(Self {
            vertices,
            edge_lengths,
            planar,
            plane_normal,
            crossing_count,
        })
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// edge_lengths[i] = ‖v_{i+1} − v_i‖, cyclically.
    pub fn edge_lengths(&self) -> &[f64] {
        &self.edge_lengths
    }

    pub fn is_planar(&self) -> bool {
        self.planar
    }

    /// Unit normal of the best-fit plane; set exactly when planar.
    pub fn plane_normal(&self) -> Option<&Vec3> {
        self.plane_normal.as_ref()
    }

    /// Whether the polygon crosses itself, decided in-plane; `None` for
    /// genuinely three-dimensional polygons, whose edges are generically
    /// disjoint.
    pub fn self_intersecting(&self) -> Option<bool> {
        self.crossing_count.map(|c| c >= 1)
    }

    /// Number of transversal self-crossings in the plane; `None` when the
    /// polygon is not planar.
    pub fn in_plane_crossings(&self) -> Option<usize> {
        self.crossing_count
    }

    /// Unit direction of each edge i: (v_{i+1} − v_i) normalized.
    pub fn unit_edge_directions(&self) -> Vec<Vec3> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| (self.vertices[(i + 1) % n] - self.vertices[i]) / self.edge_lengths[i])
            .collect()
    }

    /// Unsigned angle at vertex j between the incoming and outgoing edge
    /// vectors, in [0, π].
    pub fn turning_angles(&self) -> Vec<f64> {
        let dirs = self.unit_edge_directions();
        let n = dirs.len();
        (0..n)
            .map(|j| {
                let a = &dirs[(j + n - 1) % n];
                let b = &dirs[j];
                a.cross(b).norm().atan2(a.dot(b))
            })
            .collect()
    }
}

/// Any unit vector orthogonal to `n`.
fn complement_direction(n: &Vec3) -> Vec3 {
    let trial = if n.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
    (trial - n * n.dot(&trial)).normalize()
}

/// Normal of a great circle carrying all of `dirs` (within `tol`), if any:
/// the least-moment principal axis of the direction set, *not* centered,
/// since a great circle's plane passes through the origin.
pub fn great_circle_normal(dirs: &[Vec3], tol: f64) -> Option<Vec3> {
    let mut moments = Matrix3::zeros();
    for u in dirs {
        moments += u * u.transpose();
    }
    let eig = SymmetricEigen::new(moments);
    let k = eig.eigenvalues.imin();
    let normal = eig.eigenvectors.column(k).into_owned().normalize();
    dirs.iter()
        .all(|u| u.dot(&normal).abs() <= tol)
        .then_some(normal)
}

/// Close up a polygon from unit edge directions: the strictly positive hull
/// witness supplies edge lengths, normalized to unit perimeter.
pub fn lift_to_polygon(p: &SphericalPolygon) -> Result<SpacePolygon, LiftError> {
    let dirs = p.vertices();
    let witness = origin_in_relint_conv(dirs).ok_or(LiftError::NoWitness)?;
    let total: f64 = witness.coefficients.iter().sum();
    let lambda: Vec<f64> = witness.coefficients.iter().map(|c| c / total).collect();
    let residual = dirs
        .iter()
        .zip(&lambda)
        .map(|(u, &l)| u * l)
        .sum::<Vec3>()
        .norm();
    if residual > 1e-9 {
        return Err(LiftError::InternalInconsistency(format!(
            "edge vectors close only to {residual}"
        )));
    }
    let mut vertices = Vec::with_capacity(dirs.len());
    let mut acc = Vec3::zeros();
    for (u, &l) in dirs.iter().zip(&lambda) {
        vertices.push(acc);
        acc += u * l;
    }
    SpacePolygon::from_vertices(vertices)
}

/// Degenerate branch of the lift: every direction lies on one great circle,
/// so realize the signed planar sequence with minimal crossings and embed it
/// in that plane. Signs come from the traversal sense around the circle's
/// normal; magnitudes are taken from `a` verbatim.
pub fn lift_planar(p: &SphericalPolygon, a: &AngleSequence) -> Result<SpacePolygon, LiftError> {
    let dirs = p.vertices();
    let n = dirs.len();
    if a.len() != n {
        return Err(LiftError::PreconditionViolation(format!(
            "polygon has {n} directions, sequence {}",
            a.len()
        )));
    }
    let normal = great_circle_normal(dirs, TOL_PLANAR).ok_or_else(|| {
        LiftError::PreconditionViolation("directions do not lie on one great circle".into())
    })?;
    origin_in_relint_conv(dirs).ok_or(LiftError::NoWitness)?;

    let angles = a.angles();
    let signed: Vec<f64> = (0..n)
        .map(|j| {
            let prev = &dirs[(j + n - 1) % n];
            let sense = prev.cross(&dirs[j]).dot(&normal);
            if sense >= 0.0 {
                angles[j]
            } else {
                -angles[j]
            }
        })
        .collect();
    let seq = AngleSequence::planar(signed)
        .map_err(|e| LiftError::SignedSequenceInconsistent(e.to_string()))?;
    let realization =
        realize_min_crossing(&seq).map_err(|e| match e {
            PlanarError::InconsistentSequence(v) => LiftError::SignedSequenceInconsistent(
                format!("signed angles do not close: residue {}", v.sum_residue),
            ),
            other => LiftError::Planar(other),
        })?;

    let e1 = complement_direction(&normal);
    let e2 = normal.cross(&e1);
    let flat = realization.polygon.vertices();
    let m = flat.len();
    let perimeter: f64 = (0..m).map(|i| (flat[(i + 1) % m] - flat[i]).norm()).sum();
    let vertices: Vec<Vec3> = flat
        .iter()
        .map(|q| (e1 * q.x + e2 * q.y) / perimeter)
        .collect();
    SpacePolygon::from_vertices(vertices)
}

/// Realize an unsigned angle sequence as a closed polygon in R³, or report
/// why none exists: reject when the total curvature is below 2π, decide
/// spherical realizability of the direction polygon, realize and move it to
/// enclose the origin, then close it up — in the plane when the directions
/// degenerate to a great circle.
pub fn realize_3d(a: &AngleSequence) -> Result<Realization, LiftError> {
    if a.dimension() != Dimension::Space3D {
        return Err(LiftError::PreconditionViolation(
            "expected an unsigned spatial sequence".into(),
        ));
    }
    if a.sum() < std::f64::consts::TAU - 1e-9 {
        return Ok(Realization::Unrealizable(
            UnrealizableReason::TotalCurvatureBelow2Pi,
        ));
    }
    let verdict = decide_spherical(a)?;
    if !verdict.realizable {
        return Ok(Realization::Unrealizable(
            UnrealizableReason::NoSphericalRealization,
        ));
    }
    let start = backtrack_realization(a, &verdict.trace)?;
    let enclosed = enclose_origin(&start, a)?;
    let polygon = if great_circle_normal(enclosed.vertices(), TOL_PLANAR).is_some() {
        lift_planar(&enclosed, a)?
    } else {
        lift_to_polygon(&enclosed)?
    };
    Ok(Realization::Polygon(polygon))
}

/// Diagnosis of sequences whose every realization must be a planar polygon
/// with a self-crossing.
#[derive(Debug, Clone)]
pub struct ThrackleVerdict {
    pub forced_planar: bool,
    pub n_odd: bool,
    /// π − Σ(π − αᵢ); zero exactly on the forced-planar boundary.
    pub deficit: f64,
}

/// A sequence forces planar self-intersecting realizations exactly when n ≥ 5
/// is odd and the complementary angles sum to π.
pub fn forced_planar_thrackle_check(a: &AngleSequence) -> ThrackleVerdict {
    let n = a.len();
    let deficit = std::f64::consts::PI
        - a.angles()
            .iter()
            .map(|&x| std::f64::consts::PI - x)
            .sum::<f64>();
    ThrackleVerdict {
        forced_planar: n >= 5 && n % 2 == 1 && deficit.abs() < 1e-9,
        n_odd: n % 2 == 1,
        deficit,
    }
}

/// Total length of the cycle through every second vertex of an odd polygon.
/// On a forced-planar realization's direction polygon this is exactly 2π.
pub fn step_two_cycle_length(p: &SphericalPolygon) -> Result<f64, LiftError> {
    let n = p.len();
    if n % 2 == 0 {
        return Err(LiftError::PreconditionViolation(
            "the step-two cycle only closes for odd n".into(),
        ));
    }
    let u = p.vertices();
    Ok((0..n)
        .map(|i| spherical_distance(&u[i], &u[(i + 2) % n]))
        .sum())
}
