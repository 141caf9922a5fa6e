mod common;

use std::f64::consts::PI;

use anglepoly::geom::{
    origin_in_relint_conv, spherical_distance, spherical_turning_angle, AngleSequence,
};
use anglepoly::oracle::{sample_spherical_closure, SamplerConfig};
use anglepoly::spherical::{
    backtrack_realization, decide_spherical, enclose_origin, propagate_zones, reach_zone,
    straighten, SphericalError,
};
use common::random_spherical_polygon;
use nalgebra::Vector3;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn spatial(angles: &[f64]) -> AngleSequence {
    AngleSequence::spatial(angles.to_vec()).expect("valid spatial sequence")
}

// --- decision procedure -----------------------------------------------------

#[test]
fn decide_three_right_angles() {
    let v = decide_spherical(&spatial(&[PI / 2.0, PI / 2.0, PI / 2.0])).unwrap();
    assert!(v.realizable);
    assert!(!v.boundary);
    assert!((v.margin - PI / 2.0).abs() < 1e-12);
    let iv = &v.trace.intervals;
    assert!((iv[0].lo - PI / 2.0).abs() < 1e-12 && (iv[0].hi - PI / 2.0).abs() < 1e-12);
    assert!(iv[1].lo.abs() < 1e-12 && (iv[1].hi - PI).abs() < 1e-12);
}

#[test]
fn decide_right_angle_square() {
    let v = decide_spherical(&spatial(&[PI / 2.0; 4])).unwrap();
    assert!(v.realizable);
    assert!(!v.boundary);
}

#[test]
fn decide_three_wide_one_narrow_fails() {
    let v = decide_spherical(&spatial(&[PI - 0.1, PI - 0.1, PI - 0.1, 0.1])).unwrap();
    assert!(!v.realizable);
    // the closing arc misses the reachable interval [pi - 0.3, pi] by pi - 0.4
    assert!((v.margin + (PI - 0.4)).abs() < 1e-12);
}

#[test]
fn decide_equal_fifths_sits_on_boundary() {
    let a = 4.0 * PI / 5.0;
    let v = decide_spherical(&spatial(&[a; 5])).unwrap();
    assert!(v.realizable);
    assert!(v.boundary);
    assert!(v.margin.abs() <= 1e-12);
}

#[test]
fn zone_propagation_hand_rolled() {
    let a = 4.0 * PI / 5.0;
    let t = propagate_zones(&spatial(&[a; 5])).unwrap();
    let expect = [
        [a, a],
        [0.0, 2.0 * PI / 5.0],
        [2.0 * PI / 5.0, PI],
        [0.0, a],
    ];
    for (iv, want) in t.intervals.iter().zip(expect) {
        assert!((iv.lo - want[0]).abs() < 1e-12, "lo {} vs {}", iv.lo, want[0]);
        assert!((iv.hi - want[1]).abs() < 1e-12, "hi {} vs {}", iv.hi, want[1]);
    }
}

#[test]
fn decide_realizability_is_rotation_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let n = rng.random_range(3..9);
        let arcs: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..PI - 0.05)).collect();
        let base = decide_spherical(&spatial(&arcs)).unwrap();
        if base.boundary {
            continue; // rotation may flip a knife-edge verdict
        }
        for s in 1..n {
            let rot: Vec<f64> = (0..n).map(|k| arcs[(k + s) % n]).collect();
            let v = decide_spherical(&spatial(&rot)).unwrap();
            assert_eq!(
                v.realizable, base.realizable,
                "rotation {s} of {arcs:?} changed the verdict"
            );
        }
    }
}

// --- reach zones -------------------------------------------------------------

#[test]
fn reach_zone_examples() {
    let c = Vector3::new(0.0, 0.0, 1.0);
    let z = reach_zone(&c, &[1.0]).unwrap();
    assert!((z.near_radius - 1.0).abs() < 1e-15 && (z.far_radius - 1.0).abs() < 1e-15);

    let z = reach_zone(&c, &[1.0, 1.0]).unwrap();
    assert!(z.near_radius.abs() < 1e-15 && (z.far_radius - 2.0).abs() < 1e-15);

    let z = reach_zone(&c, &[PI / 2.0, PI / 2.0]).unwrap();
    assert!(z.near_radius.abs() < 1e-15 && (z.far_radius - PI).abs() < 1e-15);

    // a zero arc is allowed here and does nothing
    let z = reach_zone(&c, &[0.5, 0.0]).unwrap();
    assert!((z.near_radius - 0.5).abs() < 1e-15 && (z.far_radius - 0.5).abs() < 1e-15);

    // wrapping past the pole folds back
    let z = reach_zone(&c, &[2.0, 2.0]).unwrap();
    assert!(z.near_radius.abs() < 1e-15);
    assert!((z.far_radius - (2.0 * PI - 4.0)).abs() < 1e-12);
}

#[test]
fn reach_zone_rejects_out_of_range_arcs() {
    let c = Vector3::new(0.0, 0.0, 1.0);
    assert!(reach_zone(&c, &[]).is_err());
    assert!(reach_zone(&c, &[3.5]).is_err());
    assert!(reach_zone(&c, &[-0.1]).is_err());
}

// --- backtracking a realization ----------------------------------------------

fn assert_realizes(p: &anglepoly::geom::SphericalPolygon, arcs: &[f64], tol: f64) {
    let got = p.arc_lengths();
    assert_eq!(got.len(), arcs.len());
    for (i, (g, w)) in got.iter().zip(arcs).enumerate() {
        assert!((g - w).abs() <= tol, "arc {i}: {g} vs {w}");
    }
}

#[test]
fn backtrack_right_angle_square() {
    let a = spatial(&[PI / 2.0; 4]);
    let v = decide_spherical(&a).unwrap();
    let p = backtrack_realization(&a, &v.trace).unwrap();
    assert_realizes(&p, &[PI / 2.0; 4], 1e-9);
}

#[test]
fn backtrack_boundary_pentagon() {
    let a = spatial(&[4.0 * PI / 5.0; 5]);
    let v = decide_spherical(&a).unwrap();
    let p = backtrack_realization(&a, &v.trace).unwrap();
    assert_realizes(&p, &[4.0 * PI / 5.0; 5], 1e-9);
}

#[test]
fn backtrack_rejects_unrealizable() {
    let a = spatial(&[PI - 0.1, PI - 0.1, PI - 0.1, 0.1]);
    let v = decide_spherical(&a).unwrap();
    let err = backtrack_realization(&a, &v.trace).unwrap_err();
    assert!(matches!(err, SphericalError::PreconditionViolation(_)));
}

#[test]
fn backtrack_random_realizable_sequences() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut done = 0;
    while done < 60 {
        let n = rng.random_range(3..11);
        let arcs: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..PI - 0.05)).collect();
        let a = spatial(&arcs);
        let v = decide_spherical(&a).unwrap();
        if !v.realizable || v.margin < 1e-3 {
            continue;
        }
        let p = backtrack_realization(&a, &v.trace).unwrap();
        assert_realizes(&p, &arcs, 1e-9);
        done += 1;
    }
}

// --- straightening surgery -----------------------------------------------

#[test]
fn straighten_touches_only_two_vertices_and_lands_terminal() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    let mut applied = 0;
    let mut attempts = 0;
    for _ in 0..40 {
        let n = rng.random_range(4..8);
        let p = random_spherical_polygon(&mut rng, n, 0.2);
        let arcs = p.arc_lengths();
        let a = spatial(&arcs);
        for i in 0..n {
            attempts += 1;
            let q = match straighten(&p, &a, i) {
                Ok(q) => q,
                // a degenerate reach zone is a legitimate refusal
                Err(SphericalError::PreconditionViolation(_)) => continue,
                Err(e) => panic!("straighten failed: {e}"),
            };
            assert_realizes(&q, &arcs, 1e-6);
            for k in 0..n {
                if k != i && k != (i + 1) % n {
                    // re-normalization may shift untouched vertices by an ulp
                    let shift = (p.vertices()[k] - q.vertices()[k]).norm();
                    assert!(shift <= 1e-12, "vertex {k} moved by {shift}");
                }
            }
            let u = q.vertices();
            let turn_at = |k: usize| {
                spherical_turning_angle(&u[(k + n - 1) % n], &u[k], &u[(k + 1) % n])
                    .unwrap_or(f64::NAN)
            };
            let prev = turn_at((i + n - 1) % n);
            let next = turn_at((i + 1) % n);
            assert!(
                prev <= 1e-6 || next <= 1e-6 || next >= PI - 1e-6,
                "no terminal vertex after straightening at {i}: prev {prev}, next {next}"
            );
            applied += 1;
        }
    }
    assert!(
        applied * 2 >= attempts,
        "straightening refused too often: {applied}/{attempts}"
    );
}

// --- enclosing the origin ----------------------------------------------------

#[test]
fn enclose_keeps_an_already_enclosing_square() {
    let p = anglepoly::geom::SphericalPolygon::new(vec![
        Vector3::new(1.0, 0.0, 0.0),
        Vector3::new(0.0, 1.0, 0.0),
        Vector3::new(-1.0, 0.0, 0.0),
        Vector3::new(0.0, -1.0, 0.0),
    ])
    .unwrap();
    let a = spatial(&[PI / 2.0; 4]);
    let q = enclose_origin(&p, &a).unwrap();
    assert!(origin_in_relint_conv(q.vertices()).is_some());
    assert_realizes(&q, &[PI / 2.0; 4], 1e-8);
}

#[test]
fn enclose_right_angle_pentagon_needs_surgery() {
    let a = spatial(&[PI / 2.0; 5]);
    let v = decide_spherical(&a).unwrap();
    let p = backtrack_realization(&a, &v.trace).unwrap();
    // the backtracked realization hugs one side of the sphere
    assert!(origin_in_relint_conv(p.vertices()).is_none());
    let q = enclose_origin(&p, &a).unwrap();
    let w = origin_in_relint_conv(q.vertices()).expect("origin enclosed");
    assert!(w.residual < 1e-10);
    assert_realizes(&q, &[PI / 2.0; 5], 1e-8);
}

#[test]
fn enclose_boundary_pentagon() {
    let arcs = [4.0 * PI / 5.0; 5];
    let a = spatial(&arcs);
    let v = decide_spherical(&a).unwrap();
    let p = backtrack_realization(&a, &v.trace).unwrap();
    let q = enclose_origin(&p, &a).unwrap();
    assert!(origin_in_relint_conv(q.vertices()).is_some());
    assert_realizes(&q, &arcs, 1e-8);
}

#[test]
fn enclose_rejects_short_sequences() {
    let a = spatial(&[0.5, 0.5, 0.5]);
    let v = decide_spherical(&a).unwrap();
    let p = backtrack_realization(&a, &v.trace).unwrap();
    let err = enclose_origin(&p, &a).unwrap_err();
    assert!(matches!(err, SphericalError::LengthBelowFenchel { .. }));
}

#[test]
fn enclose_random_realizable_sequences() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut done = 0;
    while done < 25 {
        let n = rng.random_range(4..9);
        let arcs: Vec<f64> = (0..n).map(|_| rng.random_range(0.2..PI - 0.2)).collect();
        if arcs.iter().sum::<f64>() < 2.0 * PI + 0.05 {
            continue;
        }
        let a = spatial(&arcs);
        let v = decide_spherical(&a).unwrap();
        if !v.realizable || v.margin < 1e-3 {
            continue;
        }
        let p = backtrack_realization(&a, &v.trace).unwrap();
        let q = enclose_origin(&p, &a)
            .unwrap_or_else(|e| panic!("enclosure failed on {arcs:?}: {e}"));
        let w = origin_in_relint_conv(q.vertices()).expect("origin enclosed");
        assert!(w.residual < 1e-10, "weak witness: {}", w.residual);
        assert_realizes(&q, &arcs, 1e-8);
        done += 1;
    }
}

// --- zones versus the sampling oracle ---------------------------------------

#[test]
fn zones_bound_what_the_oracle_reaches() {
    // The oracle anchors its chain at the vertex *after* the closing arc, so
    // its depth-k polar hull corresponds to the zone trace of the sequence
    // rotated by one.
    let cases: Vec<Vec<f64>> = vec![
        vec![1.2, 0.7, 2.0, 1.1],
        vec![PI / 2.0; 5],
        vec![0.4, 2.8, 1.5, 0.9],
        vec![2.2, 2.2, 1.0, 0.6, 1.4],
    ];
    let config = SamplerConfig {
        resolution: 240,
        ..SamplerConfig::default()
    };
    for arcs in cases {
        let n = arcs.len();
        let rotated: Vec<f64> = (0..n).map(|k| arcs[(k + 1) % n]).collect();
        let trace = propagate_zones(&spatial(&rotated)).unwrap();
        let sample = sample_spherical_closure(&arcs, &config).unwrap();
        assert_eq!(sample.achieved_polar_angles.len(), n - 1);
        for (k, hull) in sample.achieved_polar_angles.iter().enumerate() {
            let iv = &trace.intervals[k];
            assert!(
                hull[0] >= iv.lo - 1e-6 && hull[1] <= iv.hi + 1e-6,
                "depth {k} of {arcs:?}: oracle [{}, {}] escapes zone [{}, {}]",
                hull[0],
                hull[1],
                iv.lo,
                iv.hi
            );
        }
    }
}

#[test]
fn oracle_nearly_fills_the_zones_for_short_chains() {
    let arcs = [1.2, 0.7, 2.0, 1.1];
    let rotated = [0.7, 2.0, 1.1, 1.2];
    let trace = propagate_zones(&spatial(&rotated)).unwrap();
    let config = SamplerConfig {
        resolution: 600,
        ..SamplerConfig::default()
    };
    let sample = sample_spherical_closure(&arcs, &config).unwrap();
    for (k, hull) in sample.achieved_polar_angles.iter().enumerate().take(2) {
        let iv = &trace.intervals[k];
        assert!(
            (hull[0] - iv.lo).abs() < 0.05 && (hull[1] - iv.hi).abs() < 0.05,
            "depth {k}: oracle [{}, {}] vs zone [{}, {}]",
            hull[0],
            hull[1],
            iv.lo,
            iv.hi
        );
    }
}

#[test]
fn decide_matches_oracle_on_fixed_cases() {
    let config = SamplerConfig::default();
    let yes: Vec<Vec<f64>> = vec![
        vec![PI / 2.0, PI / 2.0, PI / 2.0],
        vec![PI / 2.0; 4],
        vec![2.0, 2.0, 2.0],
        vec![1.0, 1.5, 2.0, 0.7],
    ];
    let no: Vec<Vec<f64>> = vec![
        vec![PI - 0.1, PI - 0.1, PI - 0.1, 0.1],
        vec![0.1, 0.1, 2.9],
        vec![3.0, 0.2, 0.3, 0.4],
    ];
    for arcs in yes {
        assert!(decide_spherical(&spatial(&arcs)).unwrap().realizable);
        assert!(
            sample_spherical_closure(&arcs, &config).unwrap().realizable,
            "oracle disagrees on {arcs:?}"
        );
    }
    for arcs in no {
        assert!(!decide_spherical(&spatial(&arcs)).unwrap().realizable);
        let s = sample_spherical_closure(&arcs, &config).unwrap();
        assert!(!s.realizable, "oracle found a closure for {arcs:?}");
        assert!(s.min_gap > 1e-2, "oracle came suspiciously close: {}", s.min_gap);
    }
}

// --- arcs of a backtracked realization agree with plain distances ------------

#[test]
fn backtracked_vertices_are_unit_and_distinct() {
    let a = spatial(&[1.0, 2.0, 1.4, 2.6, 0.9]);
    let v = decide_spherical(&a).unwrap();
    assert!(v.realizable);
    let p = backtrack_realization(&a, &v.trace).unwrap();
    let u = p.vertices();
    for w in u {
        assert!((w.norm() - 1.0).abs() < 1e-12);
    }
    for k in 0..u.len() {
        let d = spherical_distance(&u[k], &u[(k + 1) % u.len()]);
        assert!(d > 1e-9 && d < PI - 1e-9);
    }
}
