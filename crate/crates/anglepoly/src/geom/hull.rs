//! Does the origin lie in the relative interior of a convex hull?
//!
//! The spatial solver needs an exact-ish certificate: strictly positive convex
//! coefficients κ with Σ κᵢ uᵢ = 0. We get one by solving
//!
//!   maximize μ  s.t.  Σ λᵢ uᵢ + μ c = 0,  Σ λᵢ = 1,  λ ≥ 0, μ ≥ 0,
//!
//! where c is the centroid. μ* > 0 holds exactly when the origin is interior
//! (relative to the affine hull, which contains 0 whenever the LP is
//! feasible), and then κᵢ ∝ μ*/n + λᵢ is a strictly positive witness.

use super::{Vec2, Vec3, TOL_WITNESS};

/// Strictly positive convex coefficients certifying 0 ∈ relint conv(points).
#[derive(Debug, Clone)]
pub struct ConvexWitness {
    /// One coefficient per input point; all > 0, summing to 1.
    pub coefficients: Vec<f64>,
    /// |Σ κᵢ uᵢ| actually achieved.
    pub residual: f64,
}

/// Smallest interiority margin accepted as "strictly inside".
const MU_MIN: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-11;
const RCOST_TOL: f64 = 1e-9;

fn pivot(t: &mut [Vec<f64>], basis: &mut [usize], r: usize, j: usize) {
    let p = t[r][j];
    for x in t[r].iter_mut() {
        *x /= p;
    }
    let row = t[r].clone();
    for (i, ti) in t.iter_mut().enumerate() {
        if i == r {
            continue;
        }
        let f = ti[j];
        if f != 0.0 {
            for (x, &rx) in ti.iter_mut().zip(&row) {
                *x -= f * rx;
            }
        }
    }
    basis[r] = j;
}

/// Primal simplex on an equality-form tableau, maximizing `cost`.
/// Bland's rule throughout, so it cannot cycle. Only columns below
/// `enter_limit` may enter the basis. Ok(()) at optimality, None if
/// unbounded or the iteration cap trips.
fn run_simplex(
    t: &mut [Vec<f64>],
    basis: &mut [usize],
    cost: &[f64],
    enter_limit: usize,
) -> Option<()> {
    let m = t.len();
    let ncols = cost.len();
    let max_iter = 200 + 50 * (m + ncols);
    for _ in 0..max_iter {
        let mut enter = None;
        for j in 0..enter_limit {
            let mut rc = cost[j];
            for i in 0..m {
                rc -= cost[basis[i]] * t[i][j];
            }
            if rc > RCOST_TOL {
                enter = Some(j);
                break;
            }
        }
        let Some(j) = enter else {
            return Some(());
        };
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            if t[i][j] > PIVOT_TOL {
                let ratio = t[i][ncols] / t[i][j];
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < lr - 1e-12 || (ratio < lr + 1e-12 && basis[i] < basis[li]) {
                            Some((i, ratio))
                        } else {
                            Some((li, lr))
                        }
                    }
                };
            }
        }
        let (r, _) = leave?;
        pivot(t, basis, r, j);
    }
    None
}

/// Maximize c·x subject to A x = b, x ≥ 0. Dense two-phase simplex.
/// None when infeasible, unbounded, or stalled.
pub fn simplex_max(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Option<(f64, Vec<f64>)> {
    let m = a.len();
    let k = c.len();
    let ncols = k + m;
    let mut t = vec![vec![0.0_f64; ncols + 1]; m];
    for i in 0..m {
        let sign = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..k {
            t[i][j] = sign * a[i][j];
        }
        t[i][k + i] = 1.0;
        t[i][ncols] = sign * b[i];
    }
    let mut basis: Vec<usize> = (k..ncols).collect();

    let phase1: Vec<f64> = (0..ncols).map(|j| if j < k { 0.0 } else { -1.0 }).collect();
    run_simplex(&mut t, &mut basis, &phase1, ncols)?;
    let art_left: f64 = (0..m)
        .filter(|&i| basis[i] >= k)
        .map(|i| t[i][ncols])
        .sum();
    if art_left > 1e-9 {
        return None;
    }
    // Artificials still basic sit at zero. Pivot them onto a real column when
    // one is available; a row with no real coefficient is redundant and inert
    // (real-column pivots never change it), so it can simply stay.
    for i in 0..m {
        if basis[i] >= k {
            if let Some(j) = (0..k).find(|&j| t[i][j].abs() > PIVOT_TOL) {
                pivot(&mut t, &mut basis, i, j);
            }
        }
    }

    let mut phase2 = vec![0.0_f64; ncols];
    phase2[..k].copy_from_slice(c);
    run_simplex(&mut t, &mut basis, &phase2, k)?;

    let mut x = vec![0.0_f64; k];
    for i in 0..m {
        if basis[i] < k {
            x[basis[i]] = t[i][ncols];
        }
    }
    let obj = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
    Some((obj, x))
}

fn lp_for_subset(points: &[Vec3], centroid: &Vec3, subset: &[usize]) -> Option<(f64, Vec<f64>)> {
    let k = subset.len() + 1;
    let mut a = vec![vec![0.0_f64; k]; 4];
    for (col, &idx) in subset.iter().enumerate() {
        a[0][col] = points[idx].x;
        a[1][col] = points[idx].y;
        a[2][col] = points[idx].z;
        a[3][col] = 1.0;
    }
    a[0][k - 1] = centroid.x;
    a[1][k - 1] = centroid.y;
    a[2][k - 1] = centroid.z;
    let b = vec![0.0, 0.0, 0.0, 1.0];
    let mut c = vec![0.0_f64; k];
    c[k - 1] = 1.0;
    let (mu, x) = simplex_max(&a, &b, &c)?;
    let mut lambda = vec![0.0_f64; points.len()];
    for (col, &idx) in subset.iter().enumerate() {
        lambda[idx] += x[col];
    }
    Some((mu, lambda))
}

fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if f(&idx) {
            return;
        }
        // advance to next combination in lexicographic order
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Strictly positive convex combination of `points` equal to the origin, when
/// one exists. Points are expected roughly unit scale.
///
/// An optimal basis of the margin LP uses at most four columns, so for small
/// inputs scanning every 4-subset of points (with μ always included) finds the
/// true optimum with only 4×5 tableaux; larger inputs get one big LP.
pub fn origin_in_relint_conv(points: &[Vec3]) -> Option<ConvexWitness> {
    let n = points.len();
    if n == 0 {
        return None;
    }
    let centroid: Vec3 = points.iter().sum::<Vec3>() / n as f64;
    if centroid.norm() < 1e-12 {
        // Uniform coefficients already witness the origin: Σ uᵢ/n = centroid.
        return Some(ConvexWitness {
            coefficients: vec![1.0 / n as f64; n],
            residual: centroid.norm(),
        });
    }

    let solved = if n <= 20 {
        let k = n.min(4);
        let mut best: Option<(f64, Vec<f64>)> = None;
        for_each_combination(n, k, |subset| {
            if let Some((mu, lambda)) = lp_for_subset(points, &centroid, subset) {
                if best.as_ref().is_none_or(|(bm, _)| mu > *bm) {
                    let good_enough = mu > 0.25;
                    best = Some((mu, lambda));
                    return good_enough;
                }
            }
            false
        });
        best
    } else {
        let k = n + 1;
        let mut a = vec![vec![0.0_f64; k]; 4];
        for (col, p) in points.iter().enumerate() {
            a[0][col] = p.x;
            a[1][col] = p.y;
            a[2][col] = p.z;
            a[3][col] = 1.0;
        }
        a[0][k - 1] = centroid.x;
        a[1][k - 1] = centroid.y;
        a[2][k - 1] = centroid.z;
        let b = vec![0.0, 0.0, 0.0, 1.0];
        let mut c = vec![0.0_f64; k];
        c[k - 1] = 1.0;
        simplex_max(&a, &b, &c).map(|(mu, x)| (mu, x[..n].to_vec()))
    };

    let (mu, lambda) = solved?;
    if mu < MU_MIN {
        return None;
    }
    let mut coeff: Vec<f64> = lambda
        .iter()
        .map(|&l| (mu / n as f64 + l) / (1.0 + mu))
        .collect();
    let s: f64 = coeff.iter().sum();
    for kf in coeff.iter_mut() {
        *kf /= s;
    }
    let r: Vec3 = points
        .iter()
        .zip(&coeff)
        .map(|(u, &kf)| u * kf)
        .sum::<Vec3>();
    let residual = r.norm();
    if residual >= TOL_WITNESS {
        return None;
    }
    Some(ConvexWitness {
        coefficients: coeff,
        residual,
    })
}

/// Does some strictly positive combination of the given plane directions
/// vanish? Equivalently, is the origin in the relative interior of their
/// convex hull?
///
/// Decided combinatorially on angle classes; only in the razor-thin band
/// where the largest angular gap is ≈ π does it fall back to scanning
/// candidate separating normals (each ±90° off an input class — these are the
/// only extreme rays the dual cone can have).
pub fn strictly_positive_hull_2d(dirs: &[Vec2]) -> bool {
    use std::f64::consts::{PI, TAU};
    const TOL: f64 = 1e-9;
    if dirs.is_empty() {
        return false;
    }
    let mut angles: Vec<f64> = dirs.iter().map(|v| v.y.atan2(v.x)).collect();
    angles.sort_by(f64::total_cmp);
    let mut classes: Vec<f64> = Vec::new();
    for &a in &angles {
        if classes.last().is_none_or(|&c| a - c > TOL) {
            classes.push(a);
        }
    }
    if classes.len() > 1 {
        let first = classes[0];
        let last = *classes.last().unwrap();
        if first + TAU - last <= TOL {
            classes.pop();
        }
    }
    match classes.len() {
        1 => return false,
        2 => return (classes[1] - classes[0] - PI).abs() < TOL,
        _ => {}
    }
    let mut maxgap = 0.0_f64;
    for i in 0..classes.len() {
        let next = if i + 1 == classes.len() {
            classes[0] + TAU
        } else {
            classes[i + 1]
        };
        maxgap = maxgap.max(next - classes[i]);
    }
    if maxgap < PI - TOL {
        return true;
    }
    if maxgap > PI + TOL {
        return false;
    }
    for &th in &classes {
        for d in [
            Vec2::new(-th.sin(), th.cos()),
            Vec2::new(th.sin(), -th.cos()),
        ] {
            let mut all_nonneg = true;
            let mut some_pos = false;
            for v in dirs {
                let dot = d.dot(v);
                if dot < -TOL {
                    all_nonneg = false;
                    break;
                }
                if dot > TOL {
                    some_pos = true;
                }
            }
            if all_nonneg && some_pos {
                return false;
            }
        }
    }
    true
}

/// Convenience wrapper: relative-interior test for plane points via the z = 0
/// embedding.
pub fn origin_in_relint_conv_2d(points: &[Vec2]) -> Option<ConvexWitness> {
    let lifted: Vec<Vec3> = points.iter().map(super::embed2).collect();
    origin_in_relint_conv(&lifted)
}
