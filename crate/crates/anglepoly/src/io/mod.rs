//! Request/response plumbing behind the `anglepoly` binary: JSON parsing,
//! command runners, batch processing, and SVG/OBJ writers.
//!
//! Every command consumes a [`Request`] (turning angles plus unit and
//! dimension) and produces a [`Response`] carrying the outcome, the realized
//! vertices when one exists, and a map of numeric diagnostics so callers can
//! assert tolerances without recomputing anything.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{
    origin_in_relint_conv, spherical_distance, AngleSequence, PlanarPolygon, Vec2, Vec3,
};
use crate::lift::{
    forced_planar_thrackle_check, great_circle_normal, realize_3d, LiftError, Realization,
    SpacePolygon, UnrealizableReason, TOL_PLANAR,
};
use crate::oracle::{allpairs_crossings, hull_contains_origin_sampling, sample_spherical_closure, SamplerConfig};
use crate::planar::{check_consistency, minimal_crossing_number, realize_min_crossing, PlanarError, PlanarRealization};
use crate::spherical::{backtrack_realization, decide_spherical, SphericalError};

/// Environment variable fixing every randomized perturbation and tie-break.
pub const SEED_ENV: &str = "ANGLEPOLY_SEED";
/// Seed used when [`SEED_ENV`] is unset.
pub const DEFAULT_SEED: u64 = 0xA17_C0DE;

/// Read the reproducibility seed from the environment (decimal or 0x-hex).
pub fn seed_from_env() -> u64 {
    std::env::var(SEED_ENV)
        .ok()
        .and_then(|s| {
            let t = s.trim();
            if let Some(hex) = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
                u64::from_str_radix(hex, 16).ok()
            } else {
                t.parse().ok()
            }
        })
        .unwrap_or(DEFAULT_SEED)
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("invalid input: {0}")]
    Parse(String),
    #[error("no drawing for a negative result: {0}")]
    Negative(String),
    #[error("oracle disagreement: {0}")]
    VerifyMismatch(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("internal error: {0}")]
    Internal(String),
}

impl IoError {
    /// Process exit code carried by this error: 1 for negative results
    /// surfaced as errors, 2 for malformed input and internal failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            IoError::Negative(_) => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Unit {
    #[default]
    Radians,
    Degrees,
}

/// One unit of work: a turning-angle sequence plus interpretation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Request {
    pub angles: Vec<f64>,
    #[serde(default)]
    pub unit: Unit,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<u8>,
}

impl Request {
    pub fn new(angles: Vec<f64>, unit: Unit, dimension: u8) -> Self {
        Self {
            angles,
            unit,
            dimension: Some(dimension),
        }
    }

    /// Angles converted to radians.
    pub fn angles_in_radians(&self) -> Vec<f64> {
        match self.unit {
            Unit::Radians => self.angles.clone(),
            Unit::Degrees => self.angles.iter().map(|a| a.to_radians()).collect(),
        }
    }

    /// The dimension this request targets, falling back to the command
    /// default; a contradictory explicit dimension is a parse error.
    pub fn resolve_dimension(&self, expected: u8) -> Result<u8, IoError> {
        match self.dimension {
            None => Ok(expected),
            Some(d) if d == expected => Ok(d),
            Some(d) => Err(IoError::Parse(format!(
                "request says dimension {d}, but this command works in dimension {expected}"
            ))),
        }
    }

    fn planar_sequence(&self) -> Result<AngleSequence, IoError> {
        self.resolve_dimension(2)?;
        AngleSequence::planar(self.angles_in_radians()).map_err(|e| IoError::Parse(e.to_string()))
    }

    fn spatial_sequence(&self) -> Result<AngleSequence, IoError> {
        self.resolve_dimension(3)?;
        AngleSequence::spatial(self.angles_in_radians()).map_err(|e| IoError::Parse(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Realized,
    Unrealizable,
    Inconsistent,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    pub boundary: bool,
    pub forced_planar_thrackle: bool,
    pub planar: bool,
}

/// Outcome of one command: `status == Realized` exactly when `polygon` is
/// present. Diagnostics are named numeric residuals (closure error, angle
/// round-trip error, witness residual, decision margins, oracle readings).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Response {
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polygon: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub crossing_number: Option<u64>,
    pub diagnostics: BTreeMap<String, f64>,
    pub flags: Flags,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Response {
    /// 0 for a realization/consistent verdict, 1 for a negative answer.
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Realized => 0,
            Status::Unrealizable | Status::Inconsistent => 1,
        }
    }
}

fn vertices_2d(p: &PlanarPolygon) -> Vec<Vec<f64>> {
    p.vertices().iter().map(|v| vec![v.x, v.y]).collect()
}

fn vertices_3d(vs: &[Vec3]) -> Vec<Vec<f64>> {
    vs.iter().map(|v| vec![v.x, v.y, v.z]).collect()
}

fn inconsistent_response(seq_residue: f64, spanning: bool) -> Response {
    let mut diagnostics = BTreeMap::new();
    diagnostics.insert("sum_residue".into(), seq_residue);
    diagnostics.insert("spanning_directions".into(), f64::from(spanning));
    Response {
        status: Status::Inconsistent,
        polygon: None,
        crossing_number: None,
        diagnostics,
        flags: Flags::default(),
        detail: Some("no generic closed polygon attains these signed angles".into()),
    }
}

/// Largest deviation between requested signed angles and the polygon's
/// turning angles.
fn planar_roundtrip(seq: &AngleSequence, poly: &PlanarPolygon) -> Result<f64, IoError> {
    let turns = poly
        .turning_angles()
        .map_err(|e| IoError::Internal(e.to_string()))?;
    Ok(turns
        .iter()
        .zip(seq.angles())
        .map(|(t, a)| (t - a).abs())
        .fold(0.0, f64::max))
}

fn planar_closure(poly: &PlanarPolygon) -> f64 {
    let vs = poly.vertices();
    let n = vs.len();
    (0..n)
        .map(|i| vs[(i + 1) % n] - vs[i])
        .sum::<Vec2>()
        .norm()
}

fn realized_planar_response(
    seq: &AngleSequence,
    real: &PlanarRealization,
    crossing_number: u64,
) -> Result<Response, IoError> {
    let mut diagnostics = BTreeMap::new();
    diagnostics.insert("closure".into(), planar_closure(&real.polygon));
    diagnostics.insert("angle_roundtrip".into(), planar_roundtrip(seq, &real.polygon)?);
    diagnostics.insert("turning_number".into(), real.turning_number as f64);
    Ok(Response {
        status: Status::Realized,
        polygon: Some(vertices_2d(&real.polygon)),
        crossing_number: Some(crossing_number),
        diagnostics,
        flags: Flags {
            boundary: false,
            forced_planar_thrackle: false,
            planar: true,
        },
        detail: None,
    })
}

/// Consistency report plus minimal crossing number for a signed 2D sequence;
/// a realization witnessing the count is included.
pub fn run_check2d(req: &Request) -> Result<Response, IoError> {
    let seq = req.planar_sequence()?;
    let verdict = check_consistency(&seq);
    if !verdict.consistent() {
        return Ok(inconsistent_response(
            verdict.sum_residue,
            verdict.spanning_directions,
        ));
    }
    let cr = minimal_crossing_number(&seq).map_err(|e| IoError::Internal(e.to_string()))?;
    let real = realize_min_crossing(&seq).map_err(|e| IoError::Internal(e.to_string()))?;
    realized_planar_response(&seq, &real, cr as u64)
}

/// Build a planar polygon attaining the signed angles with the fewest
/// possible self-crossings; `verify` re-counts crossings by brute force.
pub fn run_realize2d(req: &Request, verify: bool) -> Result<Response, IoError> {
    let seq = req.planar_sequence()?;
    let real = match realize_min_crossing(&seq) {
        Ok(real) => real,
        Err(PlanarError::InconsistentSequence(v)) => {
            return Ok(inconsistent_response(v.sum_residue, v.spanning_directions))
        }
        Err(e) => return Err(IoError::Internal(e.to_string())),
    };
    let mut resp = realized_planar_response(&seq, &real, real.crossings.count as u64)?;
    if verify {
        let brute = allpairs_crossings(real.polygon.vertices());
        resp.diagnostics
            .insert("oracle_allpairs".into(), brute as f64);
        if brute != real.crossings.count {
            return Err(IoError::VerifyMismatch(format!(
                "brute-force count {brute} != reported {}",
                real.crossings.count
            )));
        }
    }
    Ok(resp)
}

fn map_spherical_error(e: SphericalError) -> IoError {
    match e {
        SphericalError::PreconditionViolation(msg) => IoError::Parse(msg),
        other => IoError::Internal(other.to_string()),
    }
}

fn map_lift_error(e: LiftError) -> IoError {
    match e {
        LiftError::PreconditionViolation(msg) => IoError::Parse(msg),
        other => IoError::Internal(other.to_string()),
    }
}

/// Realize the arcs on the unit sphere and stop there: the response polygon
/// holds unit vectors whose consecutive spherical distances are the angles.
pub fn run_realize_sphere(req: &Request) -> Result<Response, IoError> {
    let seq = req.spatial_sequence()?;
    let verdict = decide_spherical(&seq).map_err(map_spherical_error)?;
    let thrackle = forced_planar_thrackle_check(&seq);
    let mut diagnostics = BTreeMap::new();
    diagnostics.insert("margin".into(), verdict.margin);
    if !verdict.realizable {
        return Ok(Response {
            status: Status::Unrealizable,
            polygon: None,
            crossing_number: None,
            diagnostics,
            flags: Flags {
                boundary: verdict.boundary,
                forced_planar_thrackle: thrackle.forced_planar,
                planar: false,
            },
            detail: Some("no spherical polygon has these arc lengths".into()),
        });
    }
    let sphere = backtrack_realization(&seq, &verdict.trace).map_err(map_spherical_error)?;
    let u = sphere.vertices();
    let n = u.len();
    let arc_roundtrip = (0..n)
        .map(|i| {
            (spherical_distance(&u[(i + n - 1) % n], &u[i]) - seq.angles()[i]).abs()
        })
        .fold(0.0, f64::max);
    diagnostics.insert("arc_roundtrip".into(), arc_roundtrip);
    Ok(Response {
        status: Status::Realized,
        polygon: Some(vertices_3d(u)),
        crossing_number: None,
        diagnostics,
        flags: Flags {
            boundary: verdict.boundary,
            forced_planar_thrackle: thrackle.forced_planar,
            planar: great_circle_normal(u, TOL_PLANAR).is_some(),
        },
        detail: None,
    })
}

fn space_closure(p: &SpacePolygon) -> f64 {
    let vs = p.vertices();
    let n = vs.len();
    (0..n)
        .map(|i| vs[(i + 1) % n] - vs[i])
        .sum::<Vec3>()
        .norm()
}

/// Full pipeline from an unsigned sequence to a closed polygon in R³.
/// `verify` cross-checks the verdict against the configuration sampler
/// (n ≤ 6) and the realized directions against the brute-force hull oracle.
pub fn run_realize3d(req: &Request, verify: bool, seed: u64) -> Result<Response, IoError> {
    let seq = req.spatial_sequence()?;
    let thrackle = forced_planar_thrackle_check(&seq);
    let mut diagnostics = BTreeMap::new();
    diagnostics.insert("total_curvature".into(), seq.sum());
    diagnostics.insert("thrackle_deficit".into(), thrackle.deficit);

    let gate_open = seq.sum() >= std::f64::consts::TAU - 1e-9;
    let verdict = if gate_open {
        let v = decide_spherical(&seq).map_err(map_spherical_error)?;
        diagnostics.insert("margin".into(), v.margin);
        Some(v)
    } else {
        None
    };
    let boundary = verdict.as_ref().is_some_and(|v| v.boundary);

    let outcome = realize_3d(&seq).map_err(map_lift_error)?;
    let polygon = match outcome {
        Realization::Unrealizable(reason) => {
            if verify {
                if let Some(v) = &verdict {
                    verify_sphere_verdict(&seq, false, v.margin, seed, &mut diagnostics)?;
                }
            }
            let detail = match reason {
                UnrealizableReason::TotalCurvatureBelow2Pi => {
                    "total turning below 2\u{3c0}: no closed space polygon exists"
                }
                UnrealizableReason::NoSphericalRealization => {
                    "no spherical polygon has these arc lengths"
                }
            };
            return Ok(Response {
                status: Status::Unrealizable,
                polygon: None,
                crossing_number: None,
                diagnostics,
                flags: Flags {
                    boundary,
                    forced_planar_thrackle: thrackle.forced_planar,
                    planar: false,
                },
                detail: Some(detail.into()),
            });
        }
        Realization::Polygon(p) => p,
    };

    diagnostics.insert("closure".into(), space_closure(&polygon));
    let roundtrip = polygon
        .turning_angles()
        .iter()
        .zip(seq.angles())
        .map(|(t, a)| (t - a).abs())
        .fold(0.0, f64::max);
    diagnostics.insert("angle_roundtrip".into(), roundtrip);
    let dirs = polygon.unit_edge_directions();
    let witness_residual = origin_in_relint_conv(&dirs)
        .map(|w| w.residual)
        .ok_or_else(|| IoError::Internal("realized directions lost the origin".into()))?;
    diagnostics.insert("witness_residual".into(), witness_residual);

    if verify {
        if let Some(v) = &verdict {
            verify_sphere_verdict(&seq, true, v.margin, seed, &mut diagnostics)?;
        }
        let hull_ok = hull_contains_origin_sampling(&dirs, 500, seed);
        diagnostics.insert("oracle_hull".into(), f64::from(hull_ok));
        if !hull_ok {
            return Err(IoError::VerifyMismatch(
                "hull oracle rejects the realized edge directions".into(),
            ));
        }
    }

    Ok(Response {
        status: Status::Realized,
        crossing_number: polygon.in_plane_crossings().map(|c| c as u64),
        diagnostics,
        flags: Flags {
            boundary,
            forced_planar_thrackle: thrackle.forced_planar,
            planar: polygon.is_planar(),
        },
        polygon: Some(vertices_3d(polygon.vertices())),
        detail: None,
    })
}

/// Compare a realizability verdict against the brute-force configuration
/// sampler. Only decisive when the zone margin clears the sampler's own
/// resolution; skipped silently for sequences too long to sample.
fn verify_sphere_verdict(
    seq: &AngleSequence,
    realizable: bool,
    margin: f64,
    seed: u64,
    diagnostics: &mut BTreeMap<String, f64>,
) -> Result<(), IoError> {
    if seq.len() > 6 {
        return Ok(());
    }
    let cfg = SamplerConfig {
        seed,
        ..SamplerConfig::default()
    };
    let sample = sample_spherical_closure(seq.angles(), &cfg)
        .map_err(|e| IoError::Internal(e.to_string()))?;
    diagnostics.insert("oracle_min_gap".into(), sample.min_gap);
    if margin.abs() > cfg.closure_tolerance && sample.realizable != realizable {
        return Err(IoError::VerifyMismatch(format!(
            "sampler min_gap {} contradicts margin {margin}",
            sample.min_gap
        )));
    }
    Ok(())
}

/// Full pipeline plus the forced-planar diagnosis: does every realization of
/// this sequence have to be a flat, self-crossing polygon?
pub fn run_thrackle_check(req: &Request, seed: u64) -> Result<Response, IoError> {
    let seq = req.spatial_sequence()?;
    let thrackle = forced_planar_thrackle_check(&seq);
    let mut resp = run_realize3d(req, false, seed)?;
    resp.diagnostics
        .insert("n_odd".into(), f64::from(u8::from(thrackle.n_odd)));
    resp.detail = Some(if thrackle.forced_planar {
        "every realization is planar and self-crossing".into()
    } else {
        "realizations are not forced to be planar self-crossing".into()
    });
    Ok(resp)
}

/// What [`render_scene`] produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderKind {
    Svg,
    Obj,
}

impl RenderKind {
    pub fn extension(&self) -> &'static str {
        match self {
            RenderKind::Svg => "svg",
            RenderKind::Obj => "obj",
        }
    }
}

/// Realize the request and draw it: SVG with marked crossings for 2D input,
/// an OBJ polyline for 3D input. Negative results become [`IoError::Negative`].
pub fn render_scene(req: &Request) -> Result<(String, RenderKind), IoError> {
    let dimension = req
        .dimension
        .ok_or_else(|| IoError::Parse("render needs an explicit dimension (2 or 3)".into()))?;
    match dimension {
        2 => {
            let seq = req.planar_sequence()?;
            let real = match realize_min_crossing(&seq) {
                Ok(real) => real,
                Err(PlanarError::InconsistentSequence(_)) => {
                    return Err(IoError::Negative("inconsistent signed sequence".into()))
                }
                Err(e) => return Err(IoError::Internal(e.to_string())),
            };
            let points: Vec<[f64; 2]> = real.crossings.crossings.iter().map(|c| c.point).collect();
            Ok((svg_scene(real.polygon.vertices(), &points), RenderKind::Svg))
        }
        3 => {
            let seq = req.spatial_sequence()?;
            match realize_3d(&seq).map_err(map_lift_error)? {
                Realization::Polygon(p) => Ok((obj_polyline(p.vertices()), RenderKind::Obj)),
                Realization::Unrealizable(_) => {
                    Err(IoError::Negative("sequence is unrealizable in 3-space".into()))
                }
            }
        }
        d => Err(IoError::Parse(format!("dimension must be 2 or 3, got {d}"))),
    }
}

/// SVG drawing of a closed polygon with self-crossings marked as circles.
/// The view box is the bounding box padded by 5%; crossing markers have
/// radius 1% of the box diagonal.
pub fn svg_scene(vertices: &[Vec2], crossings: &[[f64; 2]]) -> String {
    // Flip the y axis so the polygon appears in the usual orientation.
    let pts: Vec<(f64, f64)> = vertices.iter().map(|v| (v.x, -v.y)).collect();
    let (mut lo_x, mut lo_y, mut hi_x, mut hi_y) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for &(x, y) in &pts {
        lo_x = lo_x.min(x);
        lo_y = lo_y.min(y);
        hi_x = hi_x.max(x);
        hi_y = hi_y.max(y);
    }
    let diag = ((hi_x - lo_x).powi(2) + (hi_y - lo_y).powi(2)).sqrt().max(1e-12);
    let pad = 0.05 * (hi_x - lo_x).max(hi_y - lo_y).max(1e-12);
    let (x0, y0) = (lo_x - pad, lo_y - pad);
    let (w, h) = (hi_x - lo_x + 2.0 * pad, hi_y - lo_y + 2.0 * pad);

    let mut path = String::new();
    for (i, &(x, y)) in pts.iter().enumerate() {
        let op = if i == 0 { 'M' } else { 'L' };
        path.push_str(&format!("{op} {x:.6} {y:.6} "));
    }
    path.push('Z');

    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{x0:.6} {y0:.6} {w:.6} {h:.6}\">\n\
         <path d=\"{path}\" fill=\"none\" stroke=\"#1a1a2e\" stroke-width=\"{sw:.6}\" \
         stroke-linejoin=\"round\"/>\n",
        sw = diag / 200.0
    );
    for c in crossings {
        svg.push_str(&format!(
            "<circle cx=\"{:.6}\" cy=\"{:.6}\" r=\"{:.6}\" fill=\"#d62828\"/>\n",
            c[0],
            -c[1],
            0.01 * diag
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

/// Wavefront OBJ polyline: one `v` record per vertex and a closed `l` record.
pub fn obj_polyline(vertices: &[Vec3]) -> String {
    let mut obj = String::from("o polygon\n");
    for v in vertices {
        obj.push_str(&format!("v {} {} {}\n", v.x, v.y, v.z));
    }
    obj.push('l');
    for i in 1..=vertices.len() {
        obj.push_str(&format!(" {i}"));
    }
    obj.push_str(" 1\n");
    obj
}

/// Run one request per input line in parallel, preserving input order.
/// Returns the serialized response lines and the worst exit code seen.
pub fn run_batch<F>(input: &str, expected_dimension: u8, runner: F) -> (Vec<String>, i32)
where
    F: Fn(&Request) -> Result<Response, IoError> + Sync,
{
    let lines: Vec<&str> = input
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .collect();
    let results: Vec<(String, i32)> = lines
        .par_iter()
        .map(|line| match serde_json::from_str::<Request>(line) {
            Err(e) => (error_line(&format!("invalid request: {e}")), 2),
            Ok(req) => match req.resolve_dimension(expected_dimension).and_then(|_| runner(&req)) {
                Ok(resp) => {
                    let code = resp.exit_code();
                    (
                        serde_json::to_string(&resp)
                            .unwrap_or_else(|e| error_line(&e.to_string())),
                        code,
                    )
                }
                Err(e) => (error_line(&e.to_string()), e.exit_code()),
            },
        })
        .collect();
    let code = results.iter().map(|(_, c)| *c).max().unwrap_or(0);
    (results.into_iter().map(|(s, _)| s).collect(), code)
}

fn error_line(message: &str) -> String {
    serde_json::to_string(&serde_json::json!({ "error": message }))
        .unwrap_or_else(|_| "{\"error\":\"unserializable error\"}".into())
}
