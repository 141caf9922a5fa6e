//! Shared geometric primitives: angle arithmetic, planar crossing counting,
//! spherical helpers, and convex-hull origin witnesses.

pub mod angles;
pub mod hull;
pub mod polar;
pub mod polygon2;
pub mod sphere;

pub use angles::{turning_angle_2d, wrap_to_pi, wrap_to_tau, AngleSequence, Dimension, GeomError};
pub use hull::{
    origin_in_relint_conv, origin_in_relint_conv_2d, simplex_max, strictly_positive_hull_2d,
    ConvexWitness,
};
pub use polar::{polar_add, polar_sub, PolarInterval};
pub use polygon2::{
    count_crossings, crossing_report, turning_number, Crossing, CrossingReport, PlanarPolygon,
};
pub use sphere::{
    circle_circle_intersections, extend_geodesic, point_at, polar_of, rotate_about,
    spherical_distance, spherical_turning_angle, tangent_towards, CircleCircle, SphericalPolygon,
};

pub type Vec2 = nalgebra::Vector2<f64>;
pub type Vec3 = nalgebra::Vector3<f64>;

/// Representation-level identities: unit norms, exact closures.
pub const TOL_UNIT: f64 = 1e-12;
/// Genericity margins, sum residues, boundary classification.
pub const TOL_GENERIC: f64 = 1e-9;
/// Round-trip checks on constructed realizations (angles, planarity).
pub const TOL_ROUNDTRIP: f64 = 1e-8;
/// Accumulated-error tier: turning-number rounding, perturbation margins.
pub const TOL_MARGIN: f64 = 1e-6;
/// Residual bound for convex-combination witnesses.
pub const TOL_WITNESS: f64 = 1e-10;

/// Embed a plane vector into the z = 0 plane of 3-space.
pub fn embed2(v: &Vec2) -> Vec3 {
    Vec3::new(v.x, v.y, 0.0)
}
