use std::f64::consts::{FRAC_PI_2, PI, TAU};

use anglepoly::geom::{
    circle_circle_intersections, count_crossings, origin_in_relint_conv, polar_add, polar_sub,
    rotate_about, simplex_max, spherical_distance, strictly_positive_hull_2d, turning_angle_2d,
    wrap_to_pi, CircleCircle, PlanarPolygon, PolarInterval, SphericalPolygon, Vec2, Vec3,
};
use approx::assert_abs_diff_eq;

mod common;

fn square() -> PlanarPolygon {
    PlanarPolygon::new(vec![
        Vec2::new(0.0, 0.0),
        Vec2::new(1.0, 0.0),
        Vec2::new(1.0, 1.0),
        Vec2::new(0.0, 1.0),
    ])
    .unwrap()
}

fn pentagram() -> PlanarPolygon {
    let pts = (0..5)
        .map(|k| {
            let th = FRAC_PI_2 + k as f64 * 2.0 * TAU / 5.0;
            Vec2::new(th.cos(), th.sin())
        })
        .collect();
    PlanarPolygon::new(pts).unwrap()
}

#[test]
fn wrapping_lands_in_half_open_interval() {
    assert_abs_diff_eq!(wrap_to_pi(3.0 * PI), PI, epsilon = 1e-12);
    assert_abs_diff_eq!(wrap_to_pi(-3.0 * PI), PI, epsilon = 1e-12);
    assert_abs_diff_eq!(wrap_to_pi(TAU + 0.25), 0.25, epsilon = 1e-12);
    assert_abs_diff_eq!(wrap_to_pi(-0.25), -0.25, epsilon = 1e-12);
}

#[test]
fn square_turns_by_right_angles() {
    let angles = square().turning_angles().unwrap();
    for a in angles {
        assert_abs_diff_eq!(a, FRAC_PI_2, epsilon = 1e-12);
    }
    assert_eq!(square().turning_number().unwrap(), 1);
}

#[test]
fn reversal_is_rejected() {
    let p = Vec2::new(0.0, 0.0);
    let q = Vec2::new(1.0, 0.0);
    assert!(turning_angle_2d(&p, &q, &p).is_err());
}

#[test]
fn pentagram_has_five_crossings_and_turning_number_two() {
    let star = pentagram();
    let (count, generic) = count_crossings(&star);
    assert!(generic);
    assert_eq!(count, 5);
    assert_eq!(star.turning_number().unwrap(), 2);
}

#[test]
fn square_has_no_crossings() {
    let (count, generic) = count_crossings(&square());
    assert!(generic);
    assert_eq!(count, 0);
}

#[test]
fn polar_operations_stay_in_range_and_commute() {
    for &a in &[0.0, 0.3, 1.2, FRAC_PI_2, 2.9, PI] {
        for &b in &[0.0, 0.4, 1.5, 2.8, PI] {
            let s = polar_add(a, b).unwrap();
            let d = polar_sub(a, b).unwrap();
            assert!((0.0..=PI).contains(&s));
            assert!((0.0..=PI).contains(&d));
            assert_abs_diff_eq!(s, polar_add(b, a).unwrap(), epsilon = 1e-12);
            assert_abs_diff_eq!(d, polar_sub(b, a).unwrap(), epsilon = 1e-12);
            assert!(d <= s + 1e-12);
        }
    }
    assert_abs_diff_eq!(polar_add(0.0, 1.0).unwrap(), 1.0, epsilon = 1e-15);
    assert_abs_diff_eq!(polar_add(2.0, 2.0).unwrap(), TAU - 4.0, epsilon = 1e-15);
}

#[test]
fn interval_fold_saturates_at_the_poles() {
    let i0 = PolarInterval::point(1.0).unwrap();
    let folded = i0.fold(1.0);
    assert_abs_diff_eq!(folded.lo, 0.0, epsilon = 1e-15);
    assert_abs_diff_eq!(folded.hi, 2.0, epsilon = 1e-15);
    // An arc reaching the antipode of the centre saturates the maximum.
    let i1 = PolarInterval::new(1.0, 2.0).unwrap();
    let f1 = i1.fold(PI - 1.5);
    assert_abs_diff_eq!(f1.hi, PI, epsilon = 1e-15);
}

#[test]
fn simplex_solves_and_detects_infeasibility() {
    // max x + y subject to x + y = 1.
    let (obj, x) = simplex_max(&[vec![1.0, 1.0]], &[1.0], &[1.0, 1.0]).unwrap();
    assert_abs_diff_eq!(obj, 1.0, epsilon = 1e-9);
    assert_abs_diff_eq!(x[0] + x[1], 1.0, epsilon = 1e-9);
    // x = -1 is infeasible for x >= 0.
    assert!(simplex_max(&[vec![1.0]], &[-1.0], &[0.0]).is_none());
    // max x + 2y subject to x + y = 1: optimum picks y.
    let (obj, x) = simplex_max(&[vec![1.0, 1.0]], &[1.0], &[1.0, 2.0]).unwrap();
    assert_abs_diff_eq!(obj, 2.0, epsilon = 1e-9);
    assert_abs_diff_eq!(x[1], 1.0, epsilon = 1e-9);
}

#[test]
fn origin_witness_for_tetrahedron() {
    let pts = vec![
        Vec3::new(1.0, 0.0, -0.3),
        Vec3::new(-0.5, 0.8, -0.3),
        Vec3::new(-0.5, -0.8, -0.3),
        Vec3::new(0.0, 0.0, 1.0),
    ];
    let w = origin_in_relint_conv(&pts).expect("origin is interior");
    assert!(w.residual < 1e-10);
    assert!(w.coefficients.iter().all(|&k| k > 0.0));
    assert_abs_diff_eq!(w.coefficients.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
}

#[test]
fn origin_witness_respects_translation() {
    let pts = vec![
        Vec3::new(1.0, 0.1, 0.0),
        Vec3::new(0.2, 0.8, 0.1),
        Vec3::new(0.4, 0.2, 0.9),
        Vec3::new(0.3, 0.3, 0.3),
    ];
    assert!(origin_in_relint_conv(&pts).is_none());
}

#[test]
fn origin_witness_in_degenerate_plane() {
    // All points in the z = 0 plane: the LP's z-row is identically zero.
    let pts = vec![
        Vec3::new(1.0, 0.2, 0.0),
        Vec3::new(-0.8, 0.7, 0.0),
        Vec3::new(-0.1, -0.9, 0.0),
    ];
    let w = origin_in_relint_conv(&pts).expect("origin interior in the plane");
    assert!(w.residual < 1e-10);
}

#[test]
fn origin_on_hull_boundary_is_rejected() {
    let pts = vec![
        Vec3::new(1.0, 0.0, 0.0),
        Vec3::new(-1.0, 0.0, 0.0),
        Vec3::new(0.0, 1.0, 0.0),
    ];
    // Origin lies on the edge between the antipodal pair, not in the
    // relative interior of the triangle.
    assert!(origin_in_relint_conv(&pts).is_none());
}

#[test]
fn direction_span_tests() {
    let x = Vec2::new(1.0, 0.0);
    let y = Vec2::new(0.0, 1.0);
    assert!(strictly_positive_hull_2d(&[x, -x]));
    assert!(strictly_positive_hull_2d(&[x, y, -x, -y]));
    assert!(!strictly_positive_hull_2d(&[x, y]));
    assert!(!strictly_positive_hull_2d(&[x, y, -x]));
    assert!(!strictly_positive_hull_2d(&[x]));
    let spread: Vec<Vec2> = [0.1, 2.2, 4.3]
        .iter()
        .map(|&t: &f64| Vec2::new(t.cos(), t.sin()))
        .collect();
    assert!(strictly_positive_hull_2d(&spread));
}

#[test]
fn sphere_distances_and_rotations() {
    let x = Vec3::x();
    let z = Vec3::z();
    assert_abs_diff_eq!(spherical_distance(&x, &z), FRAC_PI_2, epsilon = 1e-12);
    let r = rotate_about(&x, FRAC_PI_2, &z);
    assert_abs_diff_eq!(r.y, -1.0, epsilon = 1e-12);
    assert!(r.x.abs() < 1e-12 && r.z.abs() < 1e-12);
}

#[test]
fn circles_meet_at_the_poles() {
    let got = circle_circle_intersections(&Vec3::x(), FRAC_PI_2, &Vec3::y(), FRAC_PI_2);
    match got {
        CircleCircle::Pair(a, b) => {
            assert_abs_diff_eq!(a.z.abs(), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(b.z.abs(), 1.0, epsilon = 1e-12);
            assert!(a.z * b.z < 0.0);
        }
        other => panic!("expected two intersection points, got {other:?}"),
    }
}

#[test]
fn coincident_circles_detected() {
    match circle_circle_intersections(&Vec3::z(), 1.0, &Vec3::z(), 1.0) {
        CircleCircle::Circle => {}
        other => panic!("expected coincident circles, got {other:?}"),
    }
    match circle_circle_intersections(&Vec3::z(), 1.0, &-Vec3::z(), PI - 1.0) {
        CircleCircle::Circle => {}
        other => panic!("expected coincident circles, got {other:?}"),
    }
    match circle_circle_intersections(&Vec3::z(), 0.5, &Vec3::z(), 1.0) {
        CircleCircle::Empty => {}
        other => panic!("expected empty intersection, got {other:?}"),
    }
}

#[test]
fn octant_triangle_measurements() {
    let tri = SphericalPolygon::new(vec![Vec3::x(), Vec3::y(), Vec3::z()]).unwrap();
    for a in tri.arc_lengths() {
        assert_abs_diff_eq!(a, FRAC_PI_2, epsilon = 1e-12);
    }
    for t in tri.turning_angles().unwrap() {
        assert_abs_diff_eq!(t, FRAC_PI_2, epsilon = 1e-12);
    }
}
