//! Realization of closed polygons from prescribed turning angles.
//!
//! Given a cyclic sequence of turning angles, the crate decides whether some
//! closed polygon attains exactly those angles and constructs one when it
//! exists:
//!
//! * in the plane, with the minimum possible number of self-crossings,
//! * on the unit sphere, as a closed chain of great-circle arcs,
//! * in 3-space, with freely chosen edge lengths.
//!
//! The planar and spatial problems are linked through the sphere: the unit
//! direction vectors of a space polygon's edges trace a spherical polygon
//! whose arc lengths equal the turning angles, and a spherical polygon lifts
//! back to a closed space polygon exactly when the origin lies in the
//! relative interior of the convex hull of its vertices.

pub mod geom;
pub mod io;
pub mod lift;
pub mod oracle;
pub mod planar;
pub mod spherical;
