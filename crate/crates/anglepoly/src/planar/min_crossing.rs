//! Recursive construction of a minimum-crossing realization.
//!
//! Each step eliminates one sign change that is not essential: the two
//! angles merge into their sum (one vertex fewer), the smaller polygon is
//! realized, and the merged vertex is split back apart by a local splice
//! whose footprint shrinks until it disturbs nothing else. The recursion
//! bottoms out at single-sign sequences (spiral case) or at turning number
//! zero with two essential changes (two-loop case).

use nalgebra::Matrix2;

use crate::geom::{
    crossing_report, wrap_to_pi, AngleSequence, CrossingReport, PlanarPolygon, Vec2,
    TOL_ROUNDTRIP,
};

use super::{
    check_consistency, is_essential, minimal_crossing_number, realize_spiral,
    realize_two_essential, sign_changes, PlanarError,
};

/// Angles this small count as "no turn at all": the vertex is dropped before
/// realization and re-inserted afterwards on a straight edge.
const STRIP_TOL: f64 = 1e-13;

#[derive(Debug, Clone)]
pub struct PlanarRealization {
    pub polygon: PlanarPolygon,
    pub crossings: CrossingReport,
    pub turning_number: i64,
}

/// Construct a closed polygon attaining the given signed turning angles with
/// the minimum possible number of transversal self-crossings.
pub fn realize_min_crossing(seq: &AngleSequence) -> Result<PlanarRealization, PlanarError> {
    let verdict = check_consistency(seq);
    if !verdict.consistent() {
        return Err(PlanarError::InconsistentSequence(verdict));
    }
    let target = minimal_crossing_number(seq)?;
    let angles = seq.angles();

    let core_pos: Vec<usize> = (0..angles.len())
        .filter(|&i| angles[i].abs() > STRIP_TOL)
        .collect();
    let core: Vec<f64> = core_pos.iter().map(|&i| angles[i]).collect();
    if core.len() < 3 {
        // A consistent sequence always keeps at least three real turns.
        return Err(PlanarError::InternalInconsistency(format!(
            "only {} nonzero turning angles",
            core.len()
        )));
    }

    // The recursion's merge choices depend heavily on where the index circle
    // is cut and on sign orientation, while its rare dead ends are local
    // accidents of those choices. Restarting on rotated and sign-flipped
    // relabelings of the same problem makes the attempts nearly independent:
    // rotating by r and realizing gives the same polygon with labels shifted,
    // and negating every angle realizes the mirror image.
    let nc = core.len();
    let mut last_err = None;
    for attempt in 0..RESTARTS {
        let r = ((attempt / 2) * nc.div_ceil(RESTARTS / 2)) % nc;
        let flip = attempt % 2 == 1;
        let sign = if flip { -1.0 } else { 1.0 };
        let relabeled: Vec<f64> = (0..nc).map(|q| sign * core[(q + r) % nc]).collect();
        match realize_relabeled(&relabeled, target, attempt as u64) {
            Ok(pts) => {
                let core_pts: Vec<Vec2> = (0..nc)
                    .map(|j| {
                        let p = pts[(j + nc - r) % nc];
                        if flip {
                            Vec2::new(p.x, -p.y)
                        } else {
                            p
                        }
                    })
                    .collect();
                match finish_realization(angles, &core_pos, core_pts, target) {
                    Ok(done) => return Ok(done),
                    Err(e) => last_err = Some(e),
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err
        .unwrap_or_else(|| PlanarError::InternalInconsistency("no attempts ran".into())))
}

const RESTARTS: usize = 12;

fn realize_relabeled(
    core: &[f64],
    target: usize,
    seed: u64,
) -> Result<Vec<Vec2>, PlanarError> {
    let mut budget = 200 + 20 * core.len();
    let mut shuffle = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    let built = recurse(core, &mut budget, &mut shuffle)?;
    // One more global rebalancing pass: the zero-turn reinsertion and the
    // final report are happiest when no edge is much shorter than the rest.
    Ok(relax_lengths(built, core, target))
}

fn finish_realization(
    angles: &[f64],
    core_pos: &[usize],
    core_pts: Vec<Vec2>,
    target: usize,
) -> Result<PlanarRealization, PlanarError> {
    let full = if core_pos.len() == angles.len() {
        core_pts
    } else {
        reinsert_zeros(angles, core_pos, &core_pts)?
    };
    let out = normalize_last_edge(full);

    let mut polygon = PlanarPolygon::new(out)?;
    let mut crossings = crossing_report(&polygon);
    if crossings.count == target && !crossings.generic {
        // The pattern is right but some pair of features nearly coincides;
        // length-only jiggling separates them without moving any angle.
        if let Some(vs) = nudge_generic(polygon.vertices(), target) {
            polygon = PlanarPolygon::new(vs)?;
            crossings = crossing_report(&polygon);
        }
    }
    if crossings.count != target || !crossings.generic {
        return Err(PlanarError::InternalInconsistency(format!(
            "final polygon has {} crossings (generic: {}), expected {}",
            crossings.count, crossings.generic, target
        )));
    }
    let realized = polygon.turning_angles()?;
    if let Some((i, (r, a))) = realized
        .iter()
        .zip(angles)
        .enumerate()
        .find(|(_, (r, a))| (*r - *a).abs() > TOL_ROUNDTRIP)
    {
        return Err(PlanarError::InternalInconsistency(format!(
            "angle {i} reproduced as {r}, wanted {a}"
        )));
    }
    let turning_number = polygon.turning_number()?;
    Ok(PlanarRealization {
        polygon,
        crossings,
        turning_number,
    })
}

fn recurse(
    angles: &[f64],
    budget: &mut usize,
    shuffle: &mut u64,
) -> Result<Vec<Vec2>, PlanarError> {
    let n = angles.len();
    let changes = sign_changes(angles);
    if changes.is_empty() {
        return realize_spiral(angles);
    }

    // Candidate merges: adjacent pairs whose merged turn stays a valid angle
    // and whose shared edge direction can be deleted without breaking
    // consistency. Same-sign pairs reduce by a corner cut, which keeps both
    // new vertices strictly inside existing edges and so creates no fragile
    // incidences; they are preferred over the opposite-sign detours.
    // Sorting by the pair's combined magnitude spreads successive merges
    // around the polygon instead of piling detours onto a single site.
    let mut candidates: Vec<(bool, f64, usize)> = Vec::new();
    for i in 0..n {
        let a0 = angles[i];
        let a1 = angles[(i + 1) % n];
        let merged = a0 + a1;
        let cancelling = merged.abs() <= 1e-12;
        if cancelling && n < 5 {
            continue;
        }
        if !cancelling && (n < 4 || merged.abs() >= std::f64::consts::PI - 1e-9) {
            continue;
        }
        if is_essential(angles, i) {
            continue;
        }
        let same_sign = a0 * a1 > 0.0;
        candidates.push((same_sign, a0.abs() + a1.abs(), i));
    }
    candidates.sort_by(|x, y| (!x.0, x.1).partial_cmp(&(!y.0, y.1)).expect("finite"));
    // The greedy order is deterministic, so retries that keep it would walk
    // the same dead end every time. A nonzero shuffle state rotates the
    // preference list pseudo-randomly at every level, making separate
    // top-level attempts explore genuinely different merge trees. State zero
    // is the plain greedy pass.
    if *shuffle != 0 && candidates.len() > 1 {
        *shuffle = shuffle
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        let k = (*shuffle >> 33) as usize % candidates.len();
        candidates.rotate_left(k);
    }

    if candidates.is_empty() {
        if changes.len() == 2 && wrap_to_pi(angles.iter().sum()).abs() < 1e-6 {
            return realize_two_essential(angles);
        }
        return Err(PlanarError::InternalInconsistency(format!(
            "{} sign changes but no reducible pair",
            changes.len()
        )));
    }

    let mut last_err = None;
    for (same_sign, _, s) in candidates.into_iter().take(8) {
        if *budget == 0 {
            break;
        }
        *budget -= 1;

        // Work with labels rotated so the merging pair sits at (0, 1).
        let b: Vec<f64> = (0..n).map(|q| angles[(q + s) % n]).collect();
        let merged = b[0] + b[1];
        let attempt = (|| {
            if merged.abs() <= 1e-12 {
                let reduced: Vec<f64> = b[2..].to_vec();
                let host = recurse(&reduced, budget, shuffle)?;
                splice_trapezoid(&host, &b)
            } else {
                let mut reduced = Vec::with_capacity(n - 1);
                reduced.push(merged);
                reduced.extend_from_slice(&b[2..]);
                let host = recurse(&reduced, budget, shuffle)?;
                if same_sign {
                    splice_corner(&host, &b)
                } else {
                    splice_triangle(&host, &b)
                }
            }
        })();
        match attempt {
            Ok(spliced) => return Ok((0..n).map(|p| spliced[(p + n - s) % n]).collect()),
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap_or_else(|| {
        PlanarError::InternalInconsistency("merge attempts exhausted".into())
    }))
}

fn rotate2(u: Vec2, a: f64) -> Vec2 {
    let (sn, cs) = a.sin_cos();
    Vec2::new(cs * u.x - sn * u.y, sn * u.x + cs * u.y)
}

fn level_target(angles: &[f64]) -> Result<usize, PlanarError> {
    let seq = AngleSequence::planar(angles.to_vec())?;
    Ok(minimal_crossing_number(&seq)?)
}

fn splice_valid(verts: &[Vec2], angles: &[f64], target: usize) -> bool {
    let poly = match PlanarPolygon::new(verts.to_vec()) {
        Ok(p) => p,
        Err(_) => return false,
    };
    let report = crossing_report(&poly);
    if report.count != target || !report.generic {
        return false;
    }
    match poly.turning_angles() {
        Ok(realized) => realized
            .iter()
            .zip(angles)
            .all(|(r, a)| (r - a).abs() < 3e-9),
        Err(_) => false,
    }
}

/// Least-norm closure repair along fixed edge directions: adjusts lengths so
/// the edge walk returns to its start, spreading the correction over the
/// edges in proportion to their weights and leaving zero-weight edges
/// untouched. Returns false if the weighted directions fail to span the
/// plane or a length would go nonpositive.
fn close_lengths(lengths: &mut [f64], dirs: &[Vec2], weights: &[f64]) -> bool {
    let mut gram = Matrix2::zeros();
    let mut closure = Vec2::zeros();
    for ((lj, u), w) in lengths.iter().zip(dirs).zip(weights) {
        closure += u * *lj;
        gram += u * u.transpose() * *w;
    }
    let Some(inv) = gram.try_inverse() else {
        return false;
    };
    let c = inv * closure;
    for ((lj, u), w) in lengths.iter_mut().zip(dirs).zip(weights) {
        *lj -= *w * u.dot(&c);
    }
    lengths.iter().all(|&x| x > 0.0)
}

/// Vertex list of the edge walk `origin + Σ lengths[j]·dirs[j]`.
fn walk_from(origin: Vec2, dirs: &[Vec2], lengths: &[f64]) -> Vec<Vec2> {
    let mut out = Vec::with_capacity(dirs.len());
    let mut w = origin;
    for (lj, u) in lengths.iter().zip(dirs) {
        out.push(w);
        w += u * *lj;
    }
    out
}

/// Break near-degeneracies — vertex pairs almost coinciding, or a vertex
/// almost on an edge it is not part of — by rescaling edge lengths at random
/// and re-closing the walk. Edge directions never change, so turning angles
/// are untouched. Perturbations start tiny and grow geometrically until the
/// crossing report is clean while still showing the wanted count, so the
/// crossing pattern itself is never walked past.
fn nudge_generic(verts: &[Vec2], target: usize) -> Option<Vec<Vec2>> {
    let n = verts.len();
    let mut base = Vec::with_capacity(n);
    let mut dirs = Vec::with_capacity(n);
    for j in 0..n {
        let e = verts[(j + 1) % n] - verts[j];
        let l = e.norm();
        if !(l > 0.0) {
            return None;
        }
        base.push(l);
        dirs.push(e / l);
    }
    let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
    let mut unit = move || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut eps = 1e-7;
    for _ in 0..22 {
        let mut cand: Vec<f64> = base
            .iter()
            .map(|l| l * (eps * (2.0 * unit() - 1.0)).exp())
            .collect();
        let weights: Vec<f64> = cand.iter().map(|l| l * l).collect();
        if close_lengths(&mut cand, &dirs, &weights) {
            let vs = walk_from(verts[0], &dirs, &cand);
            if let Ok(poly) = PlanarPolygon::new(vs.clone()) {
                let report = crossing_report(&poly);
                if report.count == target && report.generic {
                    return Some(vs);
                }
            }
        }
        eps *= 2.0;
    }
    None
}

/// Rebalance edge lengths towards uniformity while keeping every edge
/// direction (hence every turning angle) fixed and revalidating the crossing
/// pattern after each step. Without this, each nested splice shrinks its
/// detour relative to its host edges and deep recursions run the local
/// features below the resolution that absolute vertex coordinates can
/// express.
///
/// A detour produced by a splice is a contiguous run of short edges, and it
/// tolerates only moves that scale it as one rigid similarity: its interior
/// incidences sit exactly at its own scale. Steps therefore apply a common
/// multiplicative boost per run of short edges (nested runs boost further,
/// recursively), and the closure defect is absorbed by a length^2-weighted
/// correction on the untouched long edges, which slides each run along its
/// host line without deforming it.
fn relax_lengths(verts: Vec<Vec2>, angles: &[f64], target: usize) -> Vec<Vec2> {
    let n = verts.len();
    if n < 4 {
        return verts;
    }
    let spread = |l: &[f64]| {
        l.iter().fold(f64::INFINITY, |m, &x| m.min(x)) / l.iter().fold(0.0_f64, |m, &x| m.max(x))
    };
    let mut lengths = Vec::with_capacity(n);
    let mut dirs = Vec::with_capacity(n);
    for j in 0..n {
        let e = verts[(j + 1) % n] - verts[j];
        let l = e.norm();
        if !(l > 0.0) {
            return verts;
        }
        lengths.push(l);
        dirs.push(e / l);
    }
    if spread(&lengths) > 0.1 {
        return verts;
    }
    let all_sq: Vec<f64> = lengths.iter().map(|l| l * l).collect();
    if !close_lengths(&mut lengths, &dirs, &all_sq) {
        return verts;
    }
    let mut best = walk_from(verts[0], &dirs, &lengths);
    if !splice_valid(&best, angles, target) {
        return verts;
    }
    for _ in 0..40 {
        if spread(&lengths) > 0.1 {
            break;
        }
        let boosts = run_boosts(&lengths);
        if boosts.iter().all(|&b| b == 0.0) {
            break;
        }
        // Try the full hierarchical boost, then geometrically gentler ones.
        let mut scale = 1.0;
        let mut accepted = false;
        for _ in 0..14 {
            let mut cand: Vec<f64> = lengths
                .iter()
                .zip(&boosts)
                .map(|(l, b)| l * (b * scale).exp())
                .collect();
            let weights: Vec<f64> = cand
                .iter()
                .zip(&boosts)
                .map(|(l, b)| if *b == 0.0 { l * l } else { 0.0 })
                .collect();
            let spanning = weights.iter().filter(|&&w| w > 0.0).count() >= 3;
            let w = if spanning { weights } else { cand.iter().map(|l| l * l).collect() };
            if close_lengths(&mut cand, &dirs, &w) {
                let vs = walk_from(verts[0], &dirs, &cand);
                if splice_valid(&vs, angles, target) {
                    lengths = cand;
                    best = vs;
                    accepted = true;
                    break;
                }
            }
            scale *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    best
}

/// Logarithmic boost per edge that inflates every maximal run of short edges
/// towards a fixed fraction of its surroundings, recursing into runs so that
/// nested detours gain proportionally more. Edges outside any run get zero.
fn run_boosts(lengths: &[f64]) -> Vec<f64> {
    const SHORT: f64 = 0.25;
    const MAX_BOOST: f64 = 2.772; // ln 16
    let n = lengths.len();
    let mut boosts = vec![0.0; n];
    let cut = (0..n)
        .max_by(|&a, &b| lengths[a].partial_cmp(&lengths[b]).expect("finite"))
        .expect("nonempty");
    // Linearize starting just past a longest edge so no short run wraps.
    let order: Vec<usize> = (1..=n).map(|t| (cut + t) % n).collect();
    // Work queue of (range in `order`, parent scale).
    let mut stack = vec![(0usize, n - 1, lengths[cut])];
    while let Some((lo, hi, parent)) = stack.pop() {
        let threshold = SHORT * parent;
        let mut t = lo;
        while t < hi {
            if lengths[order[t]] >= threshold {
                t += 1;
                continue;
            }
            let start = t;
            let mut run_max = 0.0_f64;
            while t < hi && lengths[order[t]] < threshold {
                run_max = run_max.max(lengths[order[t]]);
                t += 1;
            }
            let boost = (threshold / run_max).ln().min(MAX_BOOST);
            if boost > 0.0 {
                for q in start..t {
                    boosts[order[q]] += boost;
                }
            }
            if t - start > 1 {
                stack.push((start, t, run_max));
            }
        }
    }
    boosts
}

/// Split host vertex 0 (turn b[0] + b[1], both of the same sign) into two
/// vertices with turns b[0] and b[1] by cutting the corner: the new vertices
/// sit strictly inside the two incident edges and one new edge spans the
/// corner. Locally this adds no crossings and leaves no near-incidences.
fn splice_corner(host: &[Vec2], b: &[f64]) -> Result<Vec<Vec2>, PlanarError> {
    let nh = host.len();
    let v = host[0];
    let w_prev = host[nh - 1];
    let w_next = host[1];
    let len_in = (v - w_prev).norm();
    let len_out = (w_next - v).norm();
    let u_in = (v - w_prev) / len_in;
    let u_out = (w_next - v) / len_out;
    let merged = b[0] + b[1];

    // Sine rule in the cut triangle: per unit of cut-edge length the new
    // vertices sit sin(b1)/sin(merged) into the incoming edge and
    // sin(b0)/sin(merged) into the outgoing edge. Same signs make both
    // ratios positive.
    let r_in = b[1].sin() / merged.sin();
    let r_out = b[0].sin() / merged.sin();
    if !(r_in > 0.0 && r_out > 0.0) {
        return Err(PlanarError::InternalInconsistency(format!(
            "corner cut ratios r_in={r_in}, r_out={r_out} not positive"
        )));
    }

    let target = level_target(b)?;
    let mut sigma = 0.9 * (len_in / r_in).min(len_out / r_out);
    for _ in 0..60 {
        let p1 = v - u_in * (sigma * r_in);
        let p2 = v + u_out * (sigma * r_out);
        let mut verts = Vec::with_capacity(nh + 1);
        verts.push(p1);
        verts.push(p2);
        verts.extend_from_slice(&host[1..]);
        if splice_valid(&verts, b, target) {
            return Ok(relax_lengths(verts, b, target));
        }
        sigma *= 0.5;
    }
    Err(PlanarError::InternalInconsistency(
        "corner cut failed at every scale".into(),
    ))
}

/// Split host vertex 0 (turn b[0] + b[1]) into two vertices with turns b[0]
/// and b[1], inserting one new edge between the incoming and outgoing lines.
/// The detour lives inside a ball of radius O(sigma) around the old vertex,
/// so a small enough sigma leaves the rest of the polygon untouched.
fn splice_triangle(host: &[Vec2], b: &[f64]) -> Result<Vec<Vec2>, PlanarError> {
    let nh = host.len();
    let v = host[0];
    let w_prev = host[nh - 1];
    let w_next = host[1];
    let len_in = (v - w_prev).norm();
    let len_out = (w_next - v).norm();
    let u_in = (v - w_prev) / len_in;
    let u_out = (w_next - v) / len_out;
    let merged = b[0] + b[1];

    // Exactly one variant has both lengths positive, depending on whether the
    // inserted edge leans towards the incoming or the outgoing side.
    let variant_a = merged * b[0] > 0.0;
    let (la, lb) = if variant_a {
        (-b[1].sin() / b[0].sin(), merged.sin() / b[0].sin())
    } else {
        (-b[0].sin() / b[1].sin(), merged.sin() / b[1].sin())
    };
    if !(la > 0.0 && lb > 0.0) {
        return Err(PlanarError::InternalInconsistency(format!(
            "triangle splice lengths la={la}, lb={lb} not positive"
        )));
    }

    let target = level_target(b)?;
    // The only hard geometric cap is that the shortened incident edge keeps
    // positive length; start near it and shrink until the global crossing
    // pattern is undisturbed.
    let mut sigma = 0.9 * if variant_a { len_out } else { len_in };
    for _ in 0..60 {
        let (p1, p2) = if variant_a {
            (v + u_in * (sigma * la), v + u_out * sigma)
        } else {
            (v - u_in * sigma, v - u_out * (sigma * la))
        };
        let mut verts = Vec::with_capacity(nh + 1);
        verts.push(p1);
        verts.push(p2);
        verts.extend_from_slice(&host[1..]);
        if splice_valid(&verts, b, target) {
            return Ok(relax_lengths(verts, b, target));
        }
        sigma *= 0.5;
    }
    Err(PlanarError::InternalInconsistency(
        "triangle splice failed at every scale".into(),
    ))
}

/// Re-insert a cancelling pair (b[0], b[1] = -b[0]) in front of host vertex 0
/// as a flat detour: leave the incoming line, run one edge at angle b[0],
/// come back to the incoming line, and continue to the outgoing line. The
/// fourth corner lands on the outgoing line on whichever side makes the
/// geometry consistent.
fn splice_trapezoid(host: &[Vec2], b: &[f64]) -> Result<Vec<Vec2>, PlanarError> {
    let nh = host.len();
    let v = host[0];
    let w_prev = host[nh - 1];
    let w_next = host[1];
    let len_in = (v - w_prev).norm();
    let len_out = (w_next - v).norm();
    let u_in = (v - w_prev) / len_in;
    let u_out = (w_next - v) / len_out;
    let vs = rotate2(u_in, b[0]);
    let b2 = b[2];

    let m = if b2 * b[0] > 0.0 { 1.0 } else { -1.0 };
    let lb = m * b2.sin() / b[0].sin();
    let dd = m * (b[0] - b2).sin() / b[0].sin();
    let la = dd.abs() + lb + 1.0;
    let lc = la + dd;
    if !(lb > 0.0 && lc > 0.0) {
        return Err(PlanarError::InternalInconsistency(format!(
            "trapezoid splice lengths lb={lb}, lc={lc} not positive"
        )));
    }

    let target = level_target(b)?;
    // Hard caps: the shortened tail of the incoming edge stays positive, and
    // when the fourth corner lands inside the outgoing edge so does that tail.
    let cap_out = if m > 0.0 { len_out } else { f64::INFINITY };
    let mut sigma = 0.9 * (len_in / la).min(cap_out);
    for _ in 0..60 {
        let p1 = v - u_in * (sigma * la);
        let p2 = p1 + vs * (sigma * lb);
        let p3 = v + u_out * (sigma * m);
        let mut verts = Vec::with_capacity(nh + 3);
        verts.push(p1);
        verts.push(p2);
        verts.push(p3);
        verts.extend_from_slice(&host[1..]);
        if splice_valid(&verts, b, target) {
            return Ok(relax_lengths(verts, b, target));
        }
        sigma *= 0.5;
    }
    Err(PlanarError::InternalInconsistency(
        "trapezoid splice failed at every scale".into(),
    ))
}

/// Distribute the stripped zero-turn vertices back onto the realized edges,
/// equally spaced up to a common shift chosen so no new vertex lands on a
/// crossing point (which would break genericity).
fn reinsert_zeros(
    angles: &[f64],
    core_pos: &[usize],
    core_pts: &[Vec2],
) -> Result<Vec<Vec2>, PlanarError> {
    let n = angles.len();
    let nc = core_pos.len();
    let poly = PlanarPolygon::new(core_pts.to_vec())?;
    let report = crossing_report(&poly);

    let mut out = vec![Vec2::zeros(); n];
    for i in 0..nc {
        out[core_pos[i]] = core_pts[i];
        let next_pos = core_pos[(i + 1) % nc];
        let gap = (next_pos + n - core_pos[i]) % n - 1;
        if gap == 0 {
            continue;
        }
        let forbid: Vec<f64> = report
            .crossings
            .iter()
            .flat_map(|c| {
                let mut ts = Vec::new();
                if c.edge_a == i {
                    ts.push(c.t_a);
                }
                if c.edge_b == i {
                    ts.push(c.t_b);
                }
                ts
            })
            .collect();
        let params = place_params(gap, &forbid).ok_or_else(|| {
            PlanarError::InternalInconsistency(format!(
                "could not place {gap} collinear vertices on edge {i}"
            ))
        })?;
        let a = core_pts[i];
        let bb = core_pts[(i + 1) % nc];
        for (z, t) in params.into_iter().enumerate() {
            out[(core_pos[i] + 1 + z) % n] = a + (bb - a) * t;
        }
    }
    Ok(out)
}

fn place_params(count: usize, forbid: &[f64]) -> Option<Vec<f64>> {
    let denom = (count + 1) as f64;
    for att in 0..64u32 {
        let shift = (att as f64 + 0.5) / 64.0;
        let params: Vec<f64> = (0..count).map(|j| (j as f64 + shift) / denom).collect();
        let clear = params.iter().all(|t| {
            *t > 1e-6 && *t < 1.0 - 1e-6 && forbid.iter().all(|f| (t - f).abs() > 1e-6)
        });
        if clear {
            return Some(params);
        }
    }
    None
}

/// Rotate the polygon rigidly so its closing edge points along +x, which is
/// the orientation convention every construction in this module uses.
fn normalize_last_edge(pts: Vec<Vec2>) -> Vec<Vec2> {
    let n = pts.len();
    let e = pts[0] - pts[n - 1];
    let theta = e.y.atan2(e.x);
    if theta.abs() < 1e-15 {
        return pts;
    }
    pts.into_iter().map(|p| rotate2(p, -theta)).collect()
}
