//! Brute-force oracles, kept deliberately independent of the constructive
//! solvers so the two can check each other: an orientation-predicate crossing
//! counter, a facet-enumeration / direction-sampling origin-in-hull test, and
//! a configuration-space search for closed spherical chains.

use nalgebra::SymmetricEigen;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::geom::{point_at, spherical_distance, tangent_towards, Vec2, Vec3};

#[derive(Debug, Error)]
pub enum OracleError {
    /// Exhaustive closure search is exponential in the chain length.
    #[error("closure sampling supports 3..=6 arcs, got {n}")]
    TooLarge { n: usize },
    #[error("bad oracle input: {0}")]
    BadInput(String),
}

/// Count proper self-crossings of a closed polygon by raw orientation signs.
///
/// No tolerances: two non-adjacent edges cross iff each strictly separates
/// the other's endpoints. Independent of the parametric intersection route
/// used elsewhere, which is the point.
pub fn allpairs_crossings(vertices: &[Vec2]) -> usize {
    fn orient(a: &Vec2, b: &Vec2, c: &Vec2) -> f64 {
        (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
    }
    let n = vertices.len();
    let mut count = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            let (p, p2) = (&vertices[i], &vertices[(i + 1) % n]);
            let (q, q2) = (&vertices[j], &vertices[(j + 1) % n]);
            let d1 = orient(p, p2, q) * orient(p, p2, q2);
            let d2 = orient(q, q2, p) * orient(q, q2, p2);
            if d1 < 0.0 && d2 < 0.0 {
                count += 1;
            }
        }
    }
    count
}

const INSIDE_MARGIN: f64 = 1e-6;

/// Does the origin lie strictly inside the convex hull of `points`, relative
/// to their span?
///
/// Small full-rank inputs get exact facet enumeration over all triples; rank
/// 2 and rank 1 inputs are reduced to their span first (a rank-deficient
/// second-moment matrix forces the points into a subspace through the
/// origin). Large inputs fall back to seeded direction sampling, which can
/// only err by answering "inside" for a point on the boundary.
pub fn hull_contains_origin_sampling(points: &[Vec3], trials: usize, seed: u64) -> bool {
    let n = points.len();
    if n == 0 {
        return false;
    }
    let mut m = nalgebra::Matrix3::<f64>::zeros();
    for p in points {
        m += p * p.transpose();
    }
    let eig = SymmetricEigen::new(m);
    let maxeig = eig.eigenvalues.iter().fold(0.0_f64, |a, &b| a.max(b));
    if maxeig <= 0.0 {
        return false;
    }
    let rank = eig.eigenvalues.iter().filter(|&&l| l > 1e-10 * maxeig).count();
    let cols: Vec<Vec3> = (0..3)
        .filter(|&i| eig.eigenvalues[i] > 1e-10 * maxeig)
        .map(|i| eig.eigenvectors.column(i).into_owned())
        .collect();

    match rank {
        1 => {
            let e = cols[0];
            let mut pos = false;
            let mut neg = false;
            for p in points {
                let s = e.dot(p);
                pos |= s > INSIDE_MARGIN;
                neg |= s < -INSIDE_MARGIN;
            }
            pos && neg
        }
        2 => {
            let (e1, e2) = (cols[0], cols[1]);
            let pts2: Vec<Vec2> = points.iter().map(|p| Vec2::new(e1.dot(p), e2.dot(p))).collect();
            origin_inside_polygon_hull(&pts2)
        }
        _ => {
            if n <= 20 {
                origin_inside_facets(points)
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..trials.max(1) {
                    let d = random_unit(&mut rng);
                    let support = points.iter().map(|p| d.dot(p)).fold(f64::MIN, f64::max);
                    if support < INSIDE_MARGIN {
                        return false;
                    }
                }
                true
            }
        }
    }
}

fn random_unit(rng: &mut ChaCha8Rng) -> Vec3 {
    loop {
        let v = Vec3::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v / n;
        }
    }
}

/// Exact strict-interior test for a full-rank 3D point set: every supporting
/// plane through three points must keep the origin at depth > margin.
fn origin_inside_facets(points: &[Vec3]) -> bool {
    let n = points.len();
    let scale = points.iter().map(|p| p.norm()).fold(1.0_f64, f64::max);
    let tol = 1e-9 * scale;
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let nrm = (points[j] - points[i]).cross(&(points[k] - points[i]));
                let ln = nrm.norm();
                if ln < 1e-12 {
                    continue;
                }
                let nh = nrm / ln;
                let c = nh.dot(&points[i]);
                let mut above = false;
                let mut below = false;
                for p in points {
                    let s = nh.dot(p) - c;
                    above |= s > tol;
                    below |= s < -tol;
                }
                // A supporting plane: all points on one closed side. Origin
                // must sit strictly on that same side.
                if !above && c < INSIDE_MARGIN {
                    return false;
                }
                if !below && -c < INSIDE_MARGIN {
                    return false;
                }
            }
        }
    }
    true
}

/// Strict-interior test in the plane by supporting-line enumeration.
fn origin_inside_polygon_hull(points: &[Vec2]) -> bool {
    let n = points.len();
    if n < 2 {
        return false;
    }
    let scale = points.iter().map(|p| p.norm()).fold(1.0_f64, f64::max);
    let tol = 1e-9 * scale;
    for i in 0..n {
        for j in (i + 1)..n {
            let d = points[j] - points[i];
            if d.norm() < 1e-12 {
                continue;
            }
            let nh = Vec2::new(-d.y, d.x).normalize();
            let c = nh.dot(&points[i]);
            let mut above = false;
            let mut below = false;
            for p in points {
                let s = nh.dot(p) - c;
                above |= s > tol;
                below |= s < -tol;
            }
            if !above && c < INSIDE_MARGIN {
                return false;
            }
            if !below && -c < INSIDE_MARGIN {
                return false;
            }
        }
    }
    true
}

/// Knobs for the closure search. `resolution` is the number of grid samples
/// per free axis; the seed only matters for chains long enough to need random
/// sampling.
#[derive(Debug, Clone)]
pub struct SamplerConfig {
    pub resolution: usize,
    pub closure_tolerance: f64,
    pub seed: u64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            resolution: 400,
            closure_tolerance: 1e-3,
            seed: 0xA17_C0DE,
        }
    }
}

/// Outcome of the closure search.
#[derive(Debug, Clone)]
pub struct ClosureSample {
    /// Smallest |dist(w_last, w_0) - arcs[0]| found.
    pub min_gap: f64,
    /// Direction parameters attaining it, one per chain vertex after w_1.
    pub best_thetas: Vec<f64>,
    /// Observed [min, max] polar distance from w_0, for each of w_1.. w_last.
    pub achieved_polar_angles: Vec<[f64; 2]>,
    /// min_gap < closure_tolerance.
    pub realizable: bool,
}

/// Next chain vertex: geodesic of length `arc` from `cur`, leaving at angle
/// `theta` measured from the tangent that points back to `prev`.
pub fn chain_step(prev: &Vec3, cur: &Vec3, arc: f64, theta: f64) -> Vec3 {
    let tref = tangent_towards(cur, prev).expect("consecutive chain points distinct");
    let e2 = cur.cross(&tref);
    let dir = tref * theta.cos() + e2 * theta.sin();
    point_at(cur, &dir, arc)
}

/// Open chain w_0 = north pole, w_1 in the xz-plane at distance arcs[1], then
/// one vertex per theta: w_m at distance arcs[m] from w_{m-1}.
pub fn build_chain(arcs: &[f64], thetas: &[f64]) -> Vec<Vec3> {
    let n = arcs.len();
    debug_assert_eq!(thetas.len(), n - 2);
    let mut w: Vec<Vec3> = Vec::with_capacity(n);
    w.push(Vec3::z());
    w.push(Vec3::new(arcs[1].sin(), 0.0, arcs[1].cos()));
    for m in 2..n {
        let next = chain_step(&w[m - 2], &w[m - 1], arcs[m], thetas[m - 2]);
        w.push(next);
    }
    w
}

/// |dist(w_last, w_0) - arcs[0]| for the chain generated by `thetas`.
pub fn chain_gap(arcs: &[f64], thetas: &[f64]) -> f64 {
    let w = build_chain(arcs, thetas);
    (spherical_distance(w.last().unwrap(), &w[0]) - arcs[0]).abs()
}

const TOP_K: usize = 8;

#[derive(Clone)]
struct Accum {
    min_gap: f64,
    best: Vec<f64>,
    /// Best candidates seen, sorted by gap, for later local refinement.
    topk: Vec<(f64, Vec<f64>)>,
    /// Per chain depth 1..n-1: observed [zmin, zmax] of the vertex.
    zhull: Vec<[f64; 2]>,
}

impl Accum {
    fn new(depths: usize) -> Self {
        Self {
            min_gap: f64::INFINITY,
            best: Vec::new(),
            topk: Vec::new(),
            zhull: vec![[f64::INFINITY, f64::NEG_INFINITY]; depths],
        }
    }

    fn note_z(&mut self, depth: usize, z: f64) {
        let e = &mut self.zhull[depth];
        e[0] = e[0].min(z);
        e[1] = e[1].max(z);
    }

    fn note_candidate(&mut self, gap: f64, thetas: Vec<f64>) {
        if gap < self.min_gap {
            self.min_gap = gap;
            self.best = thetas.clone();
        }
        if self.topk.len() < TOP_K || gap < self.topk.last().unwrap().0 {
            let pos = self.topk.partition_point(|(g, _)| *g < gap);
            self.topk.insert(pos, (gap, thetas));
            self.topk.truncate(TOP_K);
        }
    }

    fn merge(&mut self, other: Accum) {
        if other.min_gap < self.min_gap {
            self.min_gap = other.min_gap;
            self.best = other.best;
        }
        for (gap, thetas) in other.topk {
            if self.topk.len() < TOP_K || gap < self.topk.last().unwrap().0 {
                let pos = self.topk.partition_point(|(g, _)| *g < gap);
                self.topk.insert(pos, (gap, thetas));
                self.topk.truncate(TOP_K);
            }
        }
        for (mine, theirs) in self.zhull.iter_mut().zip(other.zhull) {
            mine[0] = mine[0].min(theirs[0]);
            mine[1] = mine[1].max(theirs[1]);
        }
    }
}

/// Last chain vertex, handled in closed form: its height above the pole is
/// z(theta) = A + R cos(theta - phi), so the reachable closing distances form
/// the exact interval [acos(A+R), acos(A-R)] and the best theta is explicit.
fn process_leaf(
    arcs: &[f64],
    target: f64,
    prefix: &[f64],
    prev: &Vec3,
    cur: &Vec3,
    acc: &mut Accum,
) {
    let n = arcs.len();
    let a = arcs[n - 1];
    let tref = tangent_towards(cur, prev).expect("consecutive chain points distinct");
    let e2 = cur.cross(&tref);
    let az = cur.z * a.cos();
    let bz = tref.z * a.sin();
    let cz = e2.z * a.sin();
    let r = bz.hypot(cz);
    let phi = cz.atan2(bz);
    let zmax = (az + r).clamp(-1.0, 1.0);
    let zmin = (az - r).clamp(-1.0, 1.0);
    acc.note_z(n - 2, zmin);
    acc.note_z(n - 2, zmax);
    let lo = zmax.acos();
    let hi = zmin.acos();

    let (gap, theta) = if target < lo {
        (lo - target, phi)
    } else if target > hi {
        (target - hi, phi + std::f64::consts::PI)
    } else if r < 1e-15 {
        ((lo - target).abs(), 0.0)
    } else {
        let u = ((target.cos() - az) / r).clamp(-1.0, 1.0);
        (0.0, phi + u.acos())
    };
    let mut thetas = Vec::with_capacity(prefix.len() + 1);
    thetas.extend_from_slice(prefix);
    thetas.push(theta);
    acc.note_candidate(gap, thetas);
}

fn grid(res: usize) -> Vec<f64> {
    let step = std::f64::consts::TAU / res as f64;
    (0..res).map(|k| k as f64 * step).collect()
}

/// Deterministic local refinement: coordinate-wise pattern search on the full
/// parameter vector, shrinking the step when stuck. Only ever lowers the gap.
fn pattern_search(arcs: &[f64], start: &[f64], init_step: f64) -> (f64, Vec<f64>) {
    let mut x = start.to_vec();
    let mut best = chain_gap(arcs, &x);
    let mut step = init_step;
    for _ in 0..60 {
        let mut improved = false;
        for i in 0..x.len() {
            for s in [step, -step] {
                let old = x[i];
                x[i] = old + s;
                let g = chain_gap(arcs, &x);
                if g < best {
                    best = g;
                    improved = true;
                } else {
                    x[i] = old;
                }
            }
        }
        if !improved {
            step *= 0.7;
            if step < 1e-12 {
                break;
            }
        }
    }
    (best, x)
}

/// Search for a closed spherical chain with the prescribed arc lengths.
///
/// Arc indexing matches closed polygons elsewhere in the crate: arcs[m] is
/// the length of the arc arriving at vertex m, and arcs[0] is the closing arc
/// from the last vertex back to w_0. All free leaving-directions are swept on
/// a grid (randomly for the longest chains) except the last one, which is
/// optimized in closed form; the best grid candidates then get pattern-search
/// refinement.
pub fn sample_spherical_closure(
    arcs: &[f64],
    config: &SamplerConfig,
) -> Result<ClosureSample, OracleError> {
    let n = arcs.len();
    if !(3..=6).contains(&n) {
        return Err(OracleError::TooLarge { n });
    }
    for (i, &a) in arcs.iter().enumerate() {
        if !a.is_finite() || a <= 0.0 || a >= std::f64::consts::PI {
            return Err(OracleError::BadInput(format!(
                "arc {i} = {a} outside (0, pi)"
            )));
        }
    }
    let res = config.resolution.max(8);
    let target = arcs[0];
    let w0 = Vec3::z();
    let w1 = Vec3::new(arcs[1].sin(), 0.0, arcs[1].cos());

    let mut acc = Accum::new(n - 1);
    acc.note_z(0, w1.z);

    match n {
        3 => process_leaf(arcs, target, &[], &w0, &w1, &mut acc),
        4 => {
            for &t2 in &grid(res) {
                let w2 = chain_step(&w0, &w1, arcs[2], t2);
                acc.note_z(1, w2.z);
                process_leaf(arcs, target, &[t2], &w1, &w2, &mut acc);
            }
        }
        5 => {
            let axis = grid(res);
            let locals: Vec<Accum> = axis
                .par_iter()
                .map(|&t2| {
                    let mut local = Accum::new(n - 1);
                    let w2 = chain_step(&w0, &w1, arcs[2], t2);
                    local.note_z(1, w2.z);
                    for &t3 in &grid(res) {
                        let w3 = chain_step(&w1, &w2, arcs[3], t3);
                        local.note_z(2, w3.z);
                        process_leaf(arcs, target, &[t2, t3], &w2, &w3, &mut local);
                    }
                    local
                })
                .collect();
            for local in locals {
                acc.merge(local);
            }
        }
        6 => {
            let total: usize = (res * res * res).min(2_000_000);
            let chunks: usize = 64;
            let per_chunk = total.div_ceil(chunks);
            let locals: Vec<Accum> = (0..chunks)
                .into_par_iter()
                .map(|c| {
                    let mut rng = ChaCha8Rng::seed_from_u64(
                        config.seed.wrapping_add((c as u64).wrapping_mul(0x9E3779B97F4A7C15)),
                    );
                    let mut local = Accum::new(n - 1);
                    for _ in 0..per_chunk {
                        let t2 = rng.random_range(0.0..std::f64::consts::TAU);
                        let t3 = rng.random_range(0.0..std::f64::consts::TAU);
                        let t4 = rng.random_range(0.0..std::f64::consts::TAU);
                        let w2 = chain_step(&w0, &w1, arcs[2], t2);
                        local.note_z(1, w2.z);
                        let w3 = chain_step(&w1, &w2, arcs[3], t3);
                        local.note_z(2, w3.z);
                        let w4 = chain_step(&w2, &w3, arcs[4], t4);
                        local.note_z(3, w4.z);
                        process_leaf(arcs, target, &[t2, t3, t4], &w3, &w4, &mut local);
                    }
                    local
                })
                .collect();
            for local in locals {
                acc.merge(local);
            }
        }
        _ => unreachable!(),
    }

    // Refine the shortlist; refinement only improves, so taking the overall
    // minimum keeps the grid answer as a floor.
    let init_step = std::f64::consts::TAU / res as f64;
    let mut min_gap = acc.min_gap;
    let mut best = acc.best.clone();
    for (_, cand) in &acc.topk {
        let (g, x) = pattern_search(arcs, cand, init_step);
        if g < min_gap {
            min_gap = g;
            best = x;
        }
    }

    let achieved_polar_angles = acc
        .zhull
        .iter()
        .map(|&[zmin, zmax]| [zmax.clamp(-1.0, 1.0).acos(), zmin.clamp(-1.0, 1.0).acos()])
        .collect();

    Ok(ClosureSample {
        min_gap,
        best_thetas: best,
        achieved_polar_angles,
        realizable: min_gap < config.closure_tolerance,
    })
}
