//! Command-line front end: parse a request, run the chosen pipeline, print
//! one JSON response per request, and exit 0 (realized/consistent),
//! 1 (unrealizable/inconsistent) or 2 (malformed input or internal failure).

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anglepoly::io::{self, IoError, Request, Response, Unit};
use clap::{Args, Parser, Subcommand};

/// Print a line to stdout, treating a closed pipe as a soft stop rather
/// than a panic (e.g. when piped into `head`).
fn emit(line: &str) -> bool {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{line}").is_ok()
}

#[derive(Parser)]
#[command(
    name = "anglepoly",
    version,
    about = "Closed polygons from prescribed turning angles",
    long_about = "Decides whether a cyclic sequence of turning angles is attained by some \
                  closed polygon and constructs one: in the plane with the minimum number of \
                  self-crossings, on the unit sphere as arcs, or in 3-space. Set ANGLEPOLY_SEED \
                  to fix all randomized tie-breaking."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a signed 2D sequence and report its minimal crossing number.
    Check2d(InputArgs),
    /// Build a planar polygon attaining signed angles with minimal crossings.
    Realize2d {
        #[command(flatten)]
        input: InputArgs,
        /// Also write an SVG drawing of the result here.
        #[arg(long, value_name = "FILE")]
        render: Option<PathBuf>,
        /// Re-count crossings with the brute-force oracle.
        #[arg(long)]
        verify: bool,
    },
    /// Realize an unsigned sequence as a closed polygon in 3-space.
    Realize3d {
        #[command(flatten)]
        input: InputArgs,
        /// Also write an OBJ polyline of the result here.
        #[arg(long, value_name = "FILE")]
        render: Option<PathBuf>,
        /// Cross-check the verdict against sampling and hull oracles.
        #[arg(long)]
        verify: bool,
    },
    /// Stop after the spherical stage: realize the angles as arc lengths.
    RealizeSphere(InputArgs),
    /// Diagnose whether every realization must be planar and self-crossing.
    ThrackleCheck(InputArgs),
    /// Write an SVG (dimension 2) or OBJ (dimension 3) drawing.
    Render {
        #[command(flatten)]
        input: InputArgs,
        /// Output file.
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Comma-separated turning angles, e.g. --angles 1.5708,1.5708,1.5708,1.5708
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        conflicts_with = "input"
    )]
    angles: Option<Vec<f64>>,
    /// JSON request file: {"angles": [..], "unit": "radians"|"degrees", "dimension": 2|3}
    #[arg(long, value_name = "FILE", conflicts_with = "batch")]
    input: Option<PathBuf>,
    /// JSON-lines file of requests, processed in parallel, answers in order.
    #[arg(long, value_name = "FILE")]
    batch: Option<PathBuf>,
    /// Unit of --angles values (request files carry their own).
    #[arg(long, value_enum, default_value_t = Unit::Radians)]
    unit: Unit,
    /// Dimension override; defaults to the command's natural dimension.
    #[arg(long = "dim")]
    dimension: Option<u8>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let seed = io::seed_from_env();
    let code = match &cli.command {
        Command::Check2d(input) => drive(input, 2, |r| io::run_check2d(r)),
        Command::Realize2d {
            input,
            render,
            verify,
        } => drive_rendering(input, 2, render.as_deref(), |r| {
            io::run_realize2d(r, *verify)
        }),
        Command::Realize3d {
            input,
            render,
            verify,
        } => drive_rendering(input, 3, render.as_deref(), |r| {
            io::run_realize3d(r, *verify, seed)
        }),
        Command::RealizeSphere(input) => drive(input, 3, io::run_realize_sphere),
        Command::ThrackleCheck(input) => drive(input, 3, |r| io::run_thrackle_check(r, seed)),
        Command::Render { input, out } => render_command(input, out),
    };
    ExitCode::from(code.clamp(0, 255) as u8)
}

/// Run one request (or a batch file) through `runner`, printing JSON lines.
fn drive<F>(input: &InputArgs, expected_dimension: u8, runner: F) -> i32
where
    F: Fn(&Request) -> Result<Response, IoError> + Sync,
{
    drive_rendering(input, expected_dimension, None, runner)
}

fn drive_rendering<F>(
    input: &InputArgs,
    expected_dimension: u8,
    render: Option<&Path>,
    runner: F,
) -> i32
where
    F: Fn(&Request) -> Result<Response, IoError> + Sync,
{
    if let Some(batch_path) = &input.batch {
        let text = match std::fs::read_to_string(batch_path) {
            Ok(text) => text,
            Err(e) => {
                eprintln!("anglepoly: cannot read {}: {e}", batch_path.display());
                return 2;
            }
        };
        let (lines, code) = io::run_batch(&text, expected_dimension, runner);
        for line in lines {
            if !emit(&line) {
                break;
            }
        }
        return code;
    }

    let req = match load_request(input, expected_dimension) {
        Ok(req) => req,
        Err(e) => {
            eprintln!("anglepoly: {e}");
            return e.exit_code();
        }
    };
    let resp = match runner(&req) {
        Ok(resp) => resp,
        Err(e) => {
            eprintln!("anglepoly: {e}");
            return e.exit_code();
        }
    };
    match serde_json::to_string_pretty(&resp) {
        Ok(json) => {
            emit(&json);
        }
        Err(e) => {
            eprintln!("anglepoly: cannot serialize response: {e}");
            return 2;
        }
    }
    if resp.status == io::Status::Realized {
        if let Some(path) = render {
            if let Err(e) = write_drawing(&req, path) {
                eprintln!("anglepoly: {e}");
                return e.exit_code();
            }
        }
    }
    resp.exit_code()
}

fn render_command(input: &InputArgs, out: &Path) -> i32 {
    // Render resolves its dimension from --dim or the request file.
    let req = match load_request_any_dimension(input) {
        Ok(req) => req,
        Err(e) => {
            eprintln!("anglepoly: {e}");
            return e.exit_code();
        }
    };
    match write_drawing(&req, out) {
        Ok(kind) => {
            eprintln!("anglepoly: wrote {} ({})", out.display(), kind.extension());
            0
        }
        Err(e) => {
            eprintln!("anglepoly: {e}");
            e.exit_code()
        }
    }
}

fn write_drawing(req: &Request, path: &Path) -> Result<io::RenderKind, IoError> {
    let (content, kind) = io::render_scene(req)?;
    std::fs::write(path, content)?;
    Ok(kind)
}

/// Build the request from --input or --angles, resolving the dimension
/// against the command's expectation.
fn load_request(input: &InputArgs, expected_dimension: u8) -> Result<Request, IoError> {
    let mut req = base_request(input)?;
    if let Some(d) = input.dimension {
        if req.dimension.is_some_and(|file_d| file_d != d) {
            return Err(IoError::Parse(format!(
                "--dim {d} contradicts the request file's dimension {}",
                req.dimension.unwrap()
            )));
        }
        req.dimension = Some(d);
    }
    req.dimension = Some(req.resolve_dimension(expected_dimension)?);
    Ok(req)
}

/// Like [`load_request`] but the dimension must come from the request itself.
fn load_request_any_dimension(input: &InputArgs) -> Result<Request, IoError> {
    let mut req = base_request(input)?;
    if let Some(d) = input.dimension {
        if req.dimension.is_some_and(|file_d| file_d != d) {
            return Err(IoError::Parse(format!(
                "--dim {d} contradicts the request file's dimension {}",
                req.dimension.unwrap()
            )));
        }
        req.dimension = Some(d);
    }
    if req.dimension.is_none() {
        return Err(IoError::Parse(
            "render needs a dimension: pass --dim 2|3 or set it in the request file".into(),
        ));
    }
    Ok(req)
}

fn base_request(input: &InputArgs) -> Result<Request, IoError> {
    if let Some(path) = &input.input {
        let text = std::fs::read_to_string(path)?;
        return serde_json::from_str(&text)
            .map_err(|e| IoError::Parse(format!("{}: {e}", path.display())));
    }
    if let Some(angles) = &input.angles {
        return Ok(Request {
            angles: angles.clone(),
            unit: input.unit,
            dimension: None,
        });
    }
    Err(IoError::Parse(
        "provide angles via --angles, --input or --batch".into(),
    ))
}
