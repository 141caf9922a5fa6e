//! The brute-force verifiers must be right on cases simple enough to check
//! by hand, since the rest of the suite trusts them as referees.

mod common;

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use anglepoly::geom::{origin_in_relint_conv, PolarInterval, Vec2, Vec3};
use anglepoly::oracle::{
    allpairs_crossings, hull_contains_origin_sampling, sample_spherical_closure, OracleError,
    SamplerConfig,
};
use common::random_unit_vector;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn allpairs_square_has_no_crossings() {
    let square = [
        Vec2::new(0.0, 0.0),
        Vec2::new(1.0, 0.0),
        Vec2::new(1.0, 1.0),
        Vec2::new(0.0, 1.0),
    ];
    assert_eq!(allpairs_crossings(&square), 0);
}

#[test]
fn allpairs_regular_star_has_five_crossings() {
    // Vertices of the regular five-pointed star: every second point of a
    // regular pentagon.
    let star: Vec<Vec2> = (0..5)
        .map(|k| {
            let t = 2.0 * TAU * k as f64 / 5.0;
            Vec2::new(t.cos(), t.sin())
        })
        .collect();
    assert_eq!(allpairs_crossings(&star), 5);
}

#[test]
fn allpairs_bowtie_has_one_crossing() {
    let bowtie = [
        Vec2::new(0.0, 0.0),
        Vec2::new(2.0, 0.0),
        Vec2::new(0.0, 1.0),
        Vec2::new(2.0, 1.0),
    ];
    assert_eq!(allpairs_crossings(&bowtie), 1);
}

#[test]
fn hull_oracle_accepts_symmetric_cross() {
    let cross = [
        Vec3::x(),
        -Vec3::x(),
        Vec3::y(),
        -Vec3::y(),
        Vec3::z(),
        -Vec3::z(),
    ];
    assert!(hull_contains_origin_sampling(&cross, 500, 7));
}

#[test]
fn hull_oracle_rejects_halfspace_sets() {
    // All points have strictly positive z, so the origin is outside.
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for _ in 0..20 {
        let pts: Vec<Vec3> = (0..8)
            .map(|_| {
                let mut v = random_unit_vector(&mut rng);
                v.z = v.z.abs().max(0.05);
                v.normalize()
            })
            .collect();
        assert!(!hull_contains_origin_sampling(&pts, 500, 7));
    }
}

#[test]
fn sampler_confirms_the_right_angle_square() {
    let sample = sample_spherical_closure(&[FRAC_PI_2; 4], &SamplerConfig::default())
        .expect("n = 4 is samplable");
    assert!(
        sample.min_gap < 1e-3,
        "equatorial square closes, min_gap = {}",
        sample.min_gap
    );
    assert!(sample.realizable);
}

#[test]
fn sampler_rejects_three_wide_one_narrow() {
    let sample = sample_spherical_closure(
        &[PI - 0.1, PI - 0.1, PI - 0.1, 0.1],
        &SamplerConfig::default(),
    )
    .expect("n = 4 is samplable");
    assert!(
        sample.min_gap > 0.05,
        "gap bounded away from zero, got {}",
        sample.min_gap
    );
    assert!(!sample.realizable);
}

#[test]
fn sampler_three_arcs_reproduce_the_propagated_interval() {
    // With three arcs the chain has a single free circle; the reachable
    // polar angles of its end must fill the first propagated interval.
    for arcs in [[1.0, 0.8, 0.5], [FRAC_PI_2, 1.0, 2.0], [2.4, 1.1, 0.6]] {
        let cfg = SamplerConfig {
            resolution: 600,
            ..SamplerConfig::default()
        };
        let sample = sample_spherical_closure(&arcs, &cfg).expect("n = 3 is samplable");
        // The chain starts along arcs[1], so the free endpoint's reach is the
        // point interval at arcs[1] spread by arcs[2].
        let interval = PolarInterval::point(arcs[1])
            .expect("arc in range")
            .fold(arcs[2]);
        let [lo, hi] = *sample
            .achieved_polar_angles
            .last()
            .expect("tracked depths present");
        let grid = 1.0 / cfg.resolution as f64;
        assert!((lo - interval.lo).abs() <= TAU * grid, "lo {lo} vs {}", interval.lo);
        assert!((hi - interval.hi).abs() <= TAU * grid, "hi {hi} vs {}", interval.hi);
    }
}

#[test]
fn sampler_rejects_oversized_chains() {
    let arcs = [1.0; 7];
    match sample_spherical_closure(&arcs, &SamplerConfig::default()) {
        Err(OracleError::TooLarge { n: 7 }) => {}
        other => panic!("expected TooLarge, got {other:?}"),
    }
}

#[test]
fn sampler_rejects_out_of_range_arcs() {
    for arcs in [[1.0, 1.0, PI], [1.0, 1.0, 0.0], [1.0, 1.0, -0.3]] {
        assert!(matches!(
            sample_spherical_closure(&arcs, &SamplerConfig::default()),
            Err(OracleError::BadInput(_))
        ));
    }
}

#[test]
fn hull_oracle_agrees_with_witness_search() {
    // Six uniform points enclose the origin about half the time, so both
    // answers get exercised.
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let mut enclosing = 0usize;
    for _ in 0..200 {
        let pts: Vec<Vec3> = (0..6).map(|_| random_unit_vector(&mut rng)).collect();
        let witness = origin_in_relint_conv(&pts).is_some();
        let sampled = hull_contains_origin_sampling(&pts, 500, 7);
        assert_eq!(witness, sampled, "disagreement on {pts:?}");
        enclosing += usize::from(witness);
    }
    assert!(
        enclosing > 40 && enclosing < 160,
        "generator should produce both kinds, got {enclosing}/200 enclosing"
    );
}
