//! Rigid surgeries that move a spherical polygon, arc lengths fixed, until
//! the origin lies in the relative interior of the convex hull of its
//! vertices.
//!
//! The driver loop checks for a witness first and otherwise applies one
//! transformation per pass:
//!  * a maximal coplanar edge run spanning at least a half circle is either
//!    rotated about an antipodal vertex pair or, when the whole polygon sits
//!    in one hemisphere of the run's plane, pushed out of that hemisphere by
//!    a chain of two-vertex re-solves;
//!  * a flat vertex whose two arcs sum below π is merged away and the
//!    smaller polygon handled recursively, then subdivided back;
//!  * otherwise a two-vertex straightening surgery manufactures a flat
//!    vertex or a spur, spurs being cut open and reattached.
//!
//! Every move re-solves the touched arcs from their requested values, so
//! errors do not accumulate across passes.

use nalgebra::Matrix3;

use crate::geom::{
    extend_geodesic, origin_in_relint_conv, point_at, rotate_about, spherical_turning_angle,
    tangent_towards, wrap_to_pi, AngleSequence, PolarInterval, SphericalPolygon, Vec3,
    TOL_ROUNDTRIP,
};

use super::straighten::{circles_meet, straighten_arcs, StraightenOutcome, TOL_TURN};
use super::SphericalError;

/// Membership of a vertex in the plane of an edge run.
const TOL_PLANE: f64 = 1e-9;
/// Looser plane membership used when hunting for the first return to a
/// hemisphere boundary.
const TOL_PLANE_LOOSE: f64 = 1e-8;
/// Two vertices count as an antipodal pair only this tightly, so that chain
/// rotations about their common axis keep arc lengths within budget.
const TOL_ANTIPODAL: f64 = 1e-9;
const HALVINGS: usize = 60;

/// Move the polygon, arc lengths fixed, until the origin lies in the
/// relative interior of the convex hull of its vertices.
pub fn enclose_origin(
    p: &SphericalPolygon,
    a: &AngleSequence,
) -> Result<SphericalPolygon, SphericalError> {
    let arcs = super::arc_lengths_of(a)?;
    if p.len() != arcs.len() {
        return Err(SphericalError::PreconditionViolation(format!(
            "polygon has {} vertices, sequence {}",
            p.len(),
            arcs.len()
        )));
    }
    let sum: f64 = arcs.iter().sum();
    if sum < std::f64::consts::TAU - 1e-9 {
        return Err(SphericalError::LengthBelowFenchel { sum });
    }
    for (got, &want) in p.arc_lengths().iter().zip(&arcs) {
        if (got - want).abs() > 1e-6 {
            return Err(SphericalError::PreconditionViolation(format!(
                "polygon arc {got} does not realize requested {want}"
            )));
        }
    }

    let out = enclose_rec(p.vertices().to_vec(), arcs.clone(), 0)?;
    let poly = SphericalPolygon::new(out)?;
    for (i, (got, &want)) in poly.arc_lengths().iter().zip(&arcs).enumerate() {
        if (got - want).abs() > TOL_ROUNDTRIP {
            return Err(SphericalError::InternalInconsistency(format!(
                "enclosure drifted arc {i}: {got} vs {want}"
            )));
        }
    }
    Ok(poly)
}

fn witness_ok(u: &[Vec3]) -> bool {
    origin_in_relint_conv(u).is_some()
}

fn renorm(u: &mut [Vec3]) {
    for v in u {
        *v = v.normalize();
    }
}

fn max_move(a: &[Vec3], b: &[Vec3]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn turning(u: &[Vec3], k: usize) -> Option<f64> {
    let n = u.len();
    spherical_turning_angle(&u[(k + n - 1) % n], &u[k], &u[(k + 1) % n]).ok()
}

fn removed_index(k: usize, t: usize) -> usize {
    if k < t {
        k
    } else {
        k - 1
    }
}

fn enclose_rec(
    mut u: Vec<Vec3>,
    arcs: Vec<f64>,
    depth: usize,
) -> Result<Vec<Vec3>, SphericalError> {
    if depth > 64 {
        return Err(SphericalError::RecursionExhausted);
    }
    let n = u.len();
    let passes = 10 * n + 100;
    for _ in 0..passes {
        renorm(&mut u);
        if witness_ok(&u) {
            return Ok(u);
        }
        if n == 3 {
            // A real triangle's perimeter cannot exceed 2π, so here it is 2π
            // up to drift: the polygon is a full great circle and snapping it
            // onto one encloses the origin in its plane.
            let total: f64 = arcs.iter().sum();
            if (total - std::f64::consts::TAU).abs() > 1e-6 {
                return Err(SphericalError::InternalInconsistency(
                    "triangle with impossible perimeter".into(),
                ));
            }
            let snapped = snap_triangle(&u, &arcs)?;
            if witness_ok(&snapped) {
                return Ok(snapped);
            }
            return Err(SphericalError::InternalInconsistency(
                "great-circle triangle does not enclose the origin".into(),
            ));
        }
        u = step(&u, &arcs, depth)?;
    }
    Err(SphericalError::RecursionExhausted)
}

/// One transformation pass over a polygon that does not yet enclose.
fn step(u: &[Vec3], arcs: &[f64], depth: usize) -> Result<Vec<Vec3>, SphericalError> {
    let n = u.len();
    let runs = coplanar_runs(u);
    if let Some(run) = runs
        .iter()
        .filter(|r| r.span >= std::f64::consts::PI - 1e-9)
        .max_by(|a, b| a.span.total_cmp(&b.span))
    {
        if let Some(v) = half_circle_case(u, arcs, run)? {
            return Ok(v);
        }
    }
    if let Some(t) = (0..n).find(|&t| {
        turning(u, t).is_some_and(|x| x <= TOL_TURN)
            && arcs[t] + arcs[(t + 1) % n] < std::f64::consts::PI - 1e-9
    }) {
        return merge_and_recurse(u, arcs, t, depth);
    }
    if n == 4 {
        force_flat_quad(u, arcs)
    } else {
        shrink_smallest_arc(u, arcs, depth)
    }
}

/// Rebuild a degenerate triangle exactly on the great circle of its own
/// best-fit plane, spacing the vertices by the requested arcs.
fn snap_triangle(u: &[Vec3], arcs: &[f64]) -> Result<Vec<Vec3>, SphericalError> {
    let newell = u[0].cross(&u[1]) + u[1].cross(&u[2]) + u[2].cross(&u[0]);
    let nrm = newell.norm();
    if nrm < 1e-9 {
        return Err(SphericalError::InternalInconsistency(
            "triangle has no usable plane".into(),
        ));
    }
    let nh = newell / nrm;
    let e1 = (u[0] - nh * nh.dot(&u[0])).normalize();
    let mut e2 = nh.cross(&e1);
    if u[1].dot(&e2).atan2(u[1].dot(&e1)) < 0.0 {
        e2 = -e2;
    }
    let t1 = arcs[1];
    let t2 = arcs[1] + arcs[2];
    Ok(vec![
        e1,
        e1 * t1.cos() + e2 * t1.sin(),
        e1 * t2.cos() + e2 * t2.sin(),
    ])
}

// ---------------------------------------------------------------------------
// coplanar edge runs

struct Run {
    /// Vertex indices along the run, in chain order (edges + 1 entries; for a
    /// fully coplanar polygon the first index repeats at the end).
    verts: Vec<usize>,
    normal: Vec3,
    /// Angular extent of the run on its carrier circle.
    span: f64,
}

fn edge_normal(u: &[Vec3], s: usize) -> Option<Vec3> {
    let c = u[s].cross(&u[(s + 1) % u.len()]);
    let nrm = c.norm();
    (nrm > 1e-9).then(|| c / nrm)
}

fn coplanar_runs(u: &[Vec3]) -> Vec<Run> {
    let n = u.len();
    let mut runs = Vec::new();
    if let Some(nh0) = edge_normal(u, 0) {
        if u.iter().all(|p| p.dot(&nh0).abs() <= TOL_PLANE) {
            let verts: Vec<usize> = (0..n).chain([0]).collect();
            let span = run_span(u, &verts, &nh0);
            runs.push(Run { verts, normal: nh0, span });
            return runs;
        }
    }
    for s in 0..n {
        let Some(nh) = edge_normal(u, s) else { continue };
        if u[(s + n - 1) % n].dot(&nh).abs() <= TOL_PLANE {
            continue; // extends backwards, not a maximal start
        }
        let mut verts = vec![s, (s + 1) % n];
        while verts.len() <= n {
            let next = (*verts.last().unwrap() + 1) % n;
            if u[next].dot(&nh).abs() <= TOL_PLANE {
                verts.push(next);
            } else {
                break;
            }
        }
        if verts.len() < 3 {
            continue; // one edge is shorter than π by itself
        }
        let span = run_span(u, &verts, &nh);
        runs.push(Run { verts, normal: nh, span });
    }
    runs
}

/// Unwrapped angular extent of the run's vertices on its carrier circle.
/// Steps between consecutive vertices are shorter than π, so unwrapping by
/// the principal difference is exact; reversals (spurs) fold back naturally.
fn run_span(u: &[Vec3], verts: &[usize], nh: &Vec3) -> f64 {
    let base = u[verts[0]];
    let e1 = (base - nh * nh.dot(&base)).normalize();
    let e2 = nh.cross(&e1);
    let mut prev = 0.0;
    let mut acc = 0.0;
    let (mut lo, mut hi) = (0.0_f64, 0.0_f64);
    for (idx, &k) in verts.iter().enumerate() {
        let th = u[k].dot(&e2).atan2(u[k].dot(&e1));
        if idx == 0 {
            prev = th;
        } else {
            acc += wrap_to_pi(th - prev);
            prev = th;
        }
        lo = lo.min(acc);
        hi = hi.max(acc);
    }
    hi - lo
}

// ---------------------------------------------------------------------------
// half-circle handling

enum Attempt {
    Witness(Vec<Vec3>),
    Progress(Vec<Vec3>),
    Nothing,
}

fn half_circle_case(
    u: &[Vec3],
    arcs: &[f64],
    run: &Run,
) -> Result<Option<Vec<Vec3>>, SphericalError> {
    let n = u.len();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b && (u[a] + u[b]).norm() <= TOL_ANTIPODAL {
                pairs.push((a, b));
            }
        }
    }
    pairs.truncate(8);

    let mut progress: Option<Vec<Vec3>> = None;
    for &(a, b) in &pairs {
        match rotate_between_poles(u, a, b)? {
            Attempt::Witness(v) => return Ok(Some(v)),
            Attempt::Progress(v) => {
                progress.get_or_insert(v);
            }
            Attempt::Nothing => {}
        }
    }
    if let Some(v) = progress {
        return Ok(Some(v));
    }
    match open_half_circle(u, arcs, run)? {
        Attempt::Witness(v) | Attempt::Progress(v) => Ok(Some(v)),
        Attempt::Nothing => Ok(None),
    }
}

/// Rotate the chain strictly between vertices b and a (cyclically) about the
/// axis through u[a]; u[b] = -u[a], so both cut arcs are preserved.
fn rotate_chain(u: &[Vec3], a: usize, b: usize, t: f64) -> Vec<Vec3> {
    let n = u.len();
    let mut v = u.to_vec();
    let mut k = (b + 1) % n;
    while k != a {
        v[k] = rotate_about(&u[a], t, &u[k]).normalize();
        k = (k + 1) % n;
    }
    v
}

/// Half-circle case with both endpoints at vertices: sweep the complementary
/// chain around the axis, trying first the angle that flattens the polygon at
/// the pivot, then perturbations of it, then a full grid — accepting the
/// first rotation whose result encloses the origin. If none does, the
/// flattening rotation is still progress (it manufactures a flat vertex).
fn rotate_between_poles(u: &[Vec3], a: usize, b: usize) -> Result<Attempt, SphericalError> {
    let n = u.len();
    if (b + 1) % n == a {
        return Ok(Attempt::Nothing); // nothing strictly between
    }
    let am1 = (a + n - 1) % n;
    let ap1 = (a + 1) % n;
    let (Ok(tau_q), Ok(tau_p)) = (
        tangent_towards(&u[a], &u[am1]),
        tangent_towards(&u[a], &u[ap1]),
    ) else {
        return Ok(Attempt::Nothing);
    };
    // angle rotating the incoming tangent onto the reversal of the outgoing
    let tstar = (-tau_p.dot(&u[a].cross(&tau_q))).atan2(-tau_p.dot(&tau_q));

    let mut schedule = Vec::with_capacity(2 * HALVINGS + 722);
    schedule.push(tstar);
    let mut delta = 0.1;
    for _ in 0..HALVINGS {
        schedule.push(tstar + delta);
        schedule.push(tstar - delta);
        delta *= 0.5;
    }
    for k in 1..720 {
        schedule.push(std::f64::consts::TAU * k as f64 / 720.0);
    }
    for t in schedule {
        if t.abs() < 1e-12 {
            continue;
        }
        let v = rotate_chain(u, a, b, t);
        if witness_ok(&v) {
            return Ok(Attempt::Witness(v));
        }
    }
    if tstar.abs() > TOL_ANTIPODAL {
        return Ok(Attempt::Progress(rotate_chain(u, a, b, tstar)));
    }
    Ok(Attempt::Nothing)
}

fn relabel<T: Copy>(xs: &[T], shift: usize) -> Vec<T> {
    let n = xs.len();
    (0..n).map(|k| xs[(shift + k) % n]).collect()
}

/// Half-circle case without an antipodal vertex pair: the polygon must then
/// sit in one closed hemisphere of the run's plane. Walk the first chain
/// leaving the boundary, migrating its first transversal turn down to the
/// run's endpoint by two-vertex re-solves, then swing that endpoint's
/// neighbour out of the hemisphere until a witness appears.
fn open_half_circle(u: &[Vec3], arcs: &[f64], run: &Run) -> Result<Attempt, SphericalError> {
    let n = u.len();
    if run.verts.len() > n {
        return Ok(Attempt::Nothing); // fully coplanar polygon: nothing to push out
    }
    let mut nh = run.normal;
    let dots: Vec<f64> = u.iter().map(|p| p.dot(&nh)).collect();
    let min = dots.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = dots.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if min < -TOL_PLANE && max > TOL_PLANE {
        return Ok(Attempt::Nothing); // both open sides already populated
    }
    if max <= TOL_PLANE {
        nh = -nh;
    }

    let shift = *run.verts.last().unwrap();
    let mut v = relabel(u, shift);
    let b = relabel(arcs, shift);
    let mut changed = false;

    for _ in 0..2 * n + 4 {
        let Some(jp) = (1..n).find(|&k| v[k].dot(&nh).abs() <= TOL_PLANE_LOOSE) else {
            break;
        };
        let Some(jt) = (1..jp).find(|&k| {
            turning(&v, k).is_some_and(|t| t > TOL_TURN && t < std::f64::consts::PI - TOL_TURN)
        }) else {
            break;
        };
        if jt == 1 {
            // swing v0 along its circle about v_{n-1}, re-solving v1
            let mut schedule = Vec::with_capacity(2 * HALVINGS + 72);
            let mut s = 0.1;
            for _ in 0..HALVINGS {
                schedule.push(s);
                schedule.push(-s);
                s *= 0.5;
            }
            for k in 1..72 {
                schedule.push(std::f64::consts::TAU * k as f64 / 72.0);
            }
            for s in schedule {
                let v0 = rotate_about(&v[n - 1], s, &v[0]).normalize();
                let Ok(v1) = circles_meet(&v[2], b[2], &v0, b[1], &v[1]) else {
                    continue;
                };
                let mut cand = v.clone();
                cand[0] = v0;
                cand[1] = v1.normalize();
                if witness_ok(&cand) {
                    return Ok(Attempt::Witness(relabel(&cand, (n - shift % n) % n)));
                }
            }
            break;
        }
        // migrate the transversal turn one step closer to the boundary
        let mut applied = false;
        let mut theta = 0.05;
        'mags: for _ in 0..HALVINGS {
            for sgn in [1.0, -1.0] {
                let c = rotate_about(&v[jt + 1], sgn * theta, &v[jt]).normalize();
                let Ok(p1) = circles_meet(&v[jt - 2], b[jt - 1], &c, b[jt], &v[jt - 1]) else {
                    continue;
                };
                if c.dot(&nh) < -TOL_PLANE || p1.dot(&nh) < -TOL_PLANE {
                    continue;
                }
                let Ok(t1) = spherical_turning_angle(&v[jt - 2], &p1, &c) else {
                    continue;
                };
                if t1 < 1e-6 || t1 > std::f64::consts::PI - 1e-6 {
                    continue;
                }
                v[jt - 1] = p1.normalize();
                v[jt] = c;
                changed = true;
                applied = true;
                break 'mags;
            }
            theta *= 0.5;
        }
        if !applied {
            break;
        }
    }

    if changed {
        Ok(Attempt::Progress(relabel(&v, (n - shift % n) % n)))
    } else {
        Ok(Attempt::Nothing)
    }
}

// ---------------------------------------------------------------------------
// flat-vertex merging

/// Remove a flat vertex, enclose the smaller polygon, and subdivide the
/// merged edge back at the original arc lengths (the hull only grows).
fn merge_and_recurse(
    u: &[Vec3],
    arcs: &[f64],
    t: usize,
    depth: usize,
) -> Result<Vec<Vec3>, SphericalError> {
    let n = u.len();
    let tp1 = (t + 1) % n;
    let mut v = Vec::with_capacity(n - 1);
    let mut b = Vec::with_capacity(n - 1);
    for k in 0..n {
        if k == t {
            continue;
        }
        v.push(u[k]);
        b.push(if k == tp1 { arcs[t] + arcs[tp1] } else { arcs[k] });
    }
    let q = enclose_rec(v, b, depth + 1)?;
    let prev = removed_index((t + n - 1) % n, t);
    let next = removed_index(tp1, t);
    let dir = tangent_towards(&q[prev], &q[next])?;
    let w = point_at(&q[prev], &dir, arcs[t]);
    Ok((0..n)
        .map(|k| if k == t { w } else { q[removed_index(k, t)] })
        .collect())
}

// ---------------------------------------------------------------------------
// quadrilaterals

/// Elbow of a two-arc chain from `from` that has straightened out: it lies
/// on the great circle leaving `from` along `dir`, between the endpoints if
/// the chain is shorter than π and wrapped the long way round otherwise.
/// Intersecting circles would be ill-conditioned exactly here (tangency), so
/// build the point directly; flatness then holds to machine precision.
fn flat_elbow(from: &Vec3, dir: &Vec3, first: f64, second: f64) -> Vec3 {
    if first + second <= std::f64::consts::PI {
        point_at(from, dir, first)
    } else {
        point_at(from, dir, -first)
    }
}

/// For n = 4 move u0 to the outer boundary of whichever two-arc reach zone
/// around u2 is tighter; that side's elbow then straightens, which the run
/// and merging cases pick up next pass.
fn force_flat_quad(u: &[Vec3], arcs: &[f64]) -> Result<Vec<Vec3>, SphericalError> {
    let z_plus = PolarInterval::point(arcs[2]).expect("arc in range").fold(arcs[1]);
    let z_minus = PolarInterval::point(arcs[3]).expect("arc in range").fold(arcs[0]);
    let dstar = z_plus.hi.min(z_minus.hi);
    let dir0 = tangent_towards(&u[2], &u[0]).or_else(|_| tangent_towards(&u[2], &u[1]))?;
    let u0 = point_at(&u[2], &dir0, dstar);
    let both = (z_plus.hi - z_minus.hi).abs() <= 1e-9;
    let u1 = if z_plus.hi <= z_minus.hi || both {
        flat_elbow(&u[2], &dir0, arcs[2], arcs[1])
    } else {
        circles_meet(&u[2], arcs[2], &u0, arcs[1], &u[1])?
    };
    let u3 = if z_minus.hi <= z_plus.hi || both {
        flat_elbow(&u[2], &dir0, arcs[3], arcs[0])
    } else {
        circles_meet(&u[2], arcs[3], &u0, arcs[0], &u[3])?
    };
    let v = vec![u0.normalize(), u1.normalize(), u[2], u3.normalize()];
    if max_move(u, &v) > 1e-12 {
        return Ok(v);
    }
    // Already tangent to the boundary: fall back to two-vertex surgeries.
    for i in 0..4 {
        if let Ok((w, _)) = straighten_arcs(u, arcs, i) {
            if max_move(u, &w) > 1e-12 {
                return Ok(w);
            }
        }
    }
    Err(SphericalError::InternalInconsistency(
        "quadrilateral surgery cannot advance".into(),
    ))
}

// ---------------------------------------------------------------------------
// straightening around the smallest arc (n >= 5)

fn shrink_smallest_arc(
    u: &[Vec3],
    arcs: &[f64],
    depth: usize,
) -> Result<Vec<Vec3>, SphericalError> {
    let n = u.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| arcs[x].total_cmp(&arcs[y]));
    for &slot in &order {
        // slot plays the role of i+2: straighten so its arc is the one a
        // spur would have to retrace.
        let i = (slot + n - 2) % n;
        let ip1 = (i + 1) % n;
        if arcs[slot] > arcs[ip1] + 1e-9 {
            continue; // spur resolution needs the retraced arc to be shorter
        }
        let Ok((v, out)) = straighten_arcs(u, arcs, i) else {
            continue;
        };
        match out {
            StraightenOutcome::FlatAtPrev | StraightenOutcome::FlatAtNext => {
                if max_move(u, &v) > 1e-12 {
                    return Ok(v);
                }
            }
            StraightenOutcome::SpurAtNext => {
                return resolve_spur(&v, arcs, i, depth);
            }
        }
    }
    Err(SphericalError::InternalInconsistency(
        "no straightening surgery advances the polygon".into(),
    ))
}

fn frame(p: &Vec3, q: &Vec3) -> Result<Matrix3<f64>, SphericalError> {
    let t = tangent_towards(p, q)?;
    Ok(Matrix3::from_columns(&[*p, t, p.cross(&t)]))
}

/// The polygon `v` has a spur at i+1 (arcs a_{i+1}, a_{i+2} leave it in the
/// same direction, a_{i+2} <= a_{i+1}). Convert it into a flat vertex, either
/// directly (equal arcs) or by cutting the retraced part off, straightening
/// the smaller polygon, and grafting the spur back on.
fn resolve_spur(
    v: &[Vec3],
    arcs: &[f64],
    i: usize,
    depth: usize,
) -> Result<Vec<Vec3>, SphericalError> {
    let n = v.len();
    let ip1 = (i + 1) % n;
    let ip2 = (i + 2) % n;
    let ip3 = (i + 3) % n;
    let a1 = arcs[ip1];
    let a2 = arcs[ip2];
    let a3 = arcs[ip3];

    if (a1 - a2).abs() <= 1e-9 {
        // the spur exactly retraces its arc: collapse u_i onto u_{i+2} and
        // aim the doubled edge away from u_{i+3}, flattening u_{i+2}
        let mut w = v.to_vec();
        w[i] = w[ip2];
        let dir = tangent_towards(&w[ip2], &v[ip3])?;
        w[ip1] = point_at(&w[ip2], &-dir, a2);
        return Ok(w);
    }

    // cut the retraced length a2 off the spur
    let mut qv = Vec::with_capacity(n - 1);
    let mut qa = Vec::with_capacity(n - 1);
    for k in 0..n {
        if k == ip1 {
            continue;
        }
        qv.push(v[k]);
        qa.push(if k == ip2 { a1 - a2 } else { arcs[k] });
    }
    let iq = removed_index(i, ip1);
    let (w2, out2) = straighten_arcs(&qv, &qa, iq)?;
    let ui2 = w2[iq];
    let umid = w2[removed_index(ip2, ip1)];
    let u3 = w2[removed_index(ip3, ip1)];

    let mut full: Vec<Vec3> = (0..n)
        .map(|k| {
            if k == ip1 {
                Vec3::zeros() // placeholder
            } else {
                w2[removed_index(k, ip1)]
            }
        })
        .collect();

    match out2 {
        StraightenOutcome::FlatAtPrev | StraightenOutcome::SpurAtNext => {
            // grafting the spur tip back flips a spur into a flat vertex and
            // keeps a flat one flat
            full[ip1] = extend_geodesic(&ui2, &umid, a2)?.normalize();
            Ok(full)
        }
        StraightenOutcome::FlatAtNext => {
            // the cut polygon straightened into a geodesic through the graft
            // site: the grafted spur would fold back onto it (a crimp)
            let d0 = a1 - a2 + a3;
            let span = a1.max(d0);
            if span >= std::f64::consts::PI - 1e-9 {
                // grafting yields a coplanar run spanning a half circle,
                // which the run cases handle next pass
                full[ip1] = extend_geodesic(&ui2, &umid, a2)?.normalize();
                return Ok(full);
            }
            if a1 + a3 < std::f64::consts::PI - 1e-12 {
                // re-solve the crimp as a triangle, flattening at the new
                // u_{i+2}
                let x = circles_meet(&ui2, a1, &u3, a2 + a3, &v[ip1])?;
                let dir = tangent_towards(&x, &u3)?;
                let y = point_at(&x, &dir, a2);
                full[ip1] = x.normalize();
                full[ip2] = y.normalize();
                Ok(full)
            } else {
                // long crimp: enclose the four-vertex sub-polygon recursively
                // and graft it back between the fixed endpoints
                let w = extend_geodesic(&ui2, &umid, a2)?.normalize();
                let sub = vec![ui2, w, umid, u3];
                let c4 = vec![d0, a1, a2, a3];
                let r = enclose_rec(sub, c4, depth + 1)?;
                let rot = frame(&ui2, &u3)? * frame(&r[0], &r[3])?.transpose();
                full[ip1] = (rot * r[1]).normalize();
                full[ip2] = (rot * r[2]).normalize();
                Ok(full)
            }
        }
    }
}
