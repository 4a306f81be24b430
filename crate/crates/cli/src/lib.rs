//! Command-line front end for `oval-core`.

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use oval_core::curve::{curve_metrics, delta_bounds, DEFAULT_QUADRATURE};
use oval_core::geom::validate_polygon;
use oval_core::moduli::{magic_kite, magic_kite_params, minimize_kite_quotient, quadrangle_search, triangle_scan};
use oval_core::oracle::delta_bruteforce;
use oval_core::section::ChordRule;
use oval_core::{compute_delta, ConvexPolygon, DeltaReport, ErrorKind, Point};

pub mod input;
pub mod report;
pub mod svg;

pub use input::{parse_curve_file, parse_polygon_file};
pub use report::{fmt_real, RunReport};
pub use svg::{emit_svg, render_svg};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_DEGENERACY: i32 = 3;
pub const EXIT_HYPOTHESIS: i32 = 4;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}{}: {message}", path.display(), if *line > 0 { format!(":{line}") } else { String::new() })]
    Parse { path: PathBuf, line: usize, message: String },
    #[error(transparent)]
    Core(#[from] oval_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => EXIT_FAILURE,
            CliError::Parse { .. } => EXIT_VALIDATION,
            CliError::Core(e) => match e.kind() {
                ErrorKind::Validation | ErrorKind::Resource => EXIT_VALIDATION,
                ErrorKind::Degeneracy => EXIT_DEGENERACY,
                ErrorKind::Hypothesis => EXIT_HYPOTHESIS,
                ErrorKind::Consistency => EXIT_FAILURE,
            },
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "oval", version, about = "Minimax chord invariant of convex polygons and curves")]
pub struct Cli {
    /// Print the report as a single JSON object.
    #[arg(long, global = true)]
    pub json: bool,
    /// Append wall-clock time to the report.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// δ, perimeter and L/δ of a polygon file.
    Delta { file: PathBuf },
    /// As `delta`, listing every distinguished chord.
    Chords { file: PathBuf },
    /// Brute-force enclosing interval for δ at boundary spacing h.
    Oracle {
        file: PathBuf,
        #[arg(long)]
        spacing: f64,
    },
    /// Bounds on δ of a support-function curve from an inscribed n-gon.
    Approx {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Minimum of L/δ over a grid of triangle moduli.
    ScanTriangles {
        #[arg(long, default_value_t = 200)]
        grid: usize,
    },
    /// Pattern search for the quadrangle minimizing L/δ.
    SearchQuads {
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
        #[arg(long, default_value_t = 2000)]
        iters: usize,
    },
    /// The magic kite.
    Kite,
    /// The unit square.
    Square,
    /// Write an SVG figure of a polygon file.
    Svg {
        file: PathBuf,
        #[arg(short = 'o', long = "output")]
        out: PathBuf,
    },
}

fn point_text(p: Point) -> String {
    format!("({}, {})", fmt_real(p.x), fmt_real(p.y))
}

fn rule_name(r: ChordRule) -> &'static str {
    match r {
        ChordRule::NearestPoint => "nearest-point",
        ChordRule::SharedEndpoint => "shared-endpoint",
    }
}

fn delta_fields(rep: &mut RunReport, poly: &ConvexPolygon, r: &DeltaReport) {
    rep.int("vertices", poly.len())
        .real("perimeter", r.perimeter)
        .real("delta", r.delta)
        .real("quotient", r.quotient)
        .int("sections", r.sections.sections.len())
        .int("refined_sections", r.refined.len())
        .int("chords", r.chords.len())
        .int("degenerate_bisectors", r.sections.degenerate_bisectors.len())
        .flag("upper_bound_holds", r.upper_bound_holds)
        .flag("lower_bound_holds", r.lower_bound_holds);
}

fn chord_fields(rep: &mut RunReport, poly: &ConvexPolygon, r: &DeltaReport) {
    for (k, c) in r.chords.iter().enumerate() {
        rep.text(
            &format!("chord.{k}"),
            format!(
                "{} -> vertex {} {} length {} {}",
                point_text(c.p0.point),
                c.q0,
                point_text(poly.vertex(c.q0)),
                fmt_real(c.length),
                rule_name(c.rule)
            ),
        );
    }
}

fn polygon_input(rep: &mut RunReport, file: &Path) -> Result<ConvexPolygon, CliError> {
    let inp = input::read_input(file)?;
    rep.text("input", file.display().to_string()).text("input_sha256", inp.sha256.clone());
    input::parse_polygon_str(&inp.text, file)
}

pub fn run(cli: &Cli) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let mut rep;
    match &cli.command {
        Command::Delta { file } => {
            rep = RunReport::new("delta");
            let poly = polygon_input(&mut rep, file)?;
            delta_fields(&mut rep, &poly, &compute_delta(&poly)?);
        }
        Command::Chords { file } => {
            rep = RunReport::new("chords");
            let poly = polygon_input(&mut rep, file)?;
            let r = compute_delta(&poly)?;
            delta_fields(&mut rep, &poly, &r);
            chord_fields(&mut rep, &poly, &r);
        }
        Command::Oracle { file, spacing } => {
            rep = RunReport::new("oracle");
            let poly = polygon_input(&mut rep, file)?;
            if !(*spacing > 0.0 && spacing.is_finite()) {
                return Err(oval_core::Error::InvalidParameter(format!("spacing must be positive, got {spacing}")).into());
            }
            let o = delta_bruteforce(&poly, 1.0 / spacing)?;
            let r = compute_delta(&poly)?;
            rep.real("spacing", *spacing)
                .int("samples", o.samples)
                .real("max_gap", o.max_gap)
                .real("lower", o.lower)
                .real("upper", o.upper)
                .real("width", o.width())
                .real("argmin_s", o.argmin_s)
                .real("delta", r.delta)
                .flag("delta_in_interval", o.contains(r.delta));
        }
        Command::Approx { curve, n } => {
            rep = RunReport::new("approx");
            let inp = input::read_input(curve)?;
            rep.text("input", curve.display().to_string()).text("input_sha256", inp.sha256.clone());
            let c = input::parse_curve_str(&inp.text, curve)?;
            let m = curve_metrics(&c, DEFAULT_QUADRATURE.max(16 * c.max_order() as usize))?;
            let b = delta_bounds(&c, *n)?;
            rep.int("n", *n)
                .real("curve_length", m.length)
                .real("max_curvature", m.max_curvature)
                .real("breadth_min", m.breadth_min)
                .real("breadth_max", m.breadth_max)
                .real("lambda", b.lambda)
                .real("lambda_limit", std::f64::consts::FRAC_PI_2 / b.k)
                .real("polygon_perimeter", b.polygon_perimeter)
                .real("delta_polygon", b.delta_p)
                .real("delta_low", b.low)
                .real("delta_high", b.high)
                .real("quotient_low", m.length / b.high)
                .real("quotient_high", m.length / b.low);
        }
        Command::ScanTriangles { grid } => {
            rep = RunReport::new("scan-triangles");
            let s = triangle_scan(*grid)?;
            rep.int("grid", *grid)
                .int("points", s.points)
                .real("min_quotient", s.min_quotient)
                .real("argmin_x", s.argmin.0)
                .real("argmin_y", s.argmin.1)
                .real("equilateral_quotient", 2.0 * 3f64.sqrt())
                .real("max_mismatch", s.max_mismatch)
                .flag("upper_bound_holds", s.upper_bound_holds);
        }
        Command::SearchQuads { seed, restarts, iters } => {
            rep = RunReport::new("search-quads");
            let s = quadrangle_search(*seed, *restarts, *iters)?;
            rep.int("seed", *seed as i64)
                .int("restarts", *restarts)
                .int("iters", *iters)
                .real("best_quotient", s.best_quotient)
                .real("u0", s.best.u0)
                .real("u", s.best.u)
                .real("v0", s.best.v0)
                .real("v", s.best.v)
                .int("evaluations", s.evaluations)
                .int("skipped", s.skipped);
        }
        Command::Kite => {
            rep = RunReport::new("kite");
            let (u, v) = magic_kite_params();
            let poly = magic_kite();
            let r = compute_delta(&poly)?;
            rep.real("u", u).real("v", v);
            delta_fields(&mut rep, &poly, &r);
            let m = minimize_kite_quotient();
            rep.real("kite_minimizer_u", m.u).real("kite_minimum", m.quotient);
        }
        Command::Square => {
            rep = RunReport::new("square");
            let poly = validate_polygon(&[
                Point::new(0.0, 0.0),
                Point::new(1.0, 0.0),
                Point::new(1.0, 1.0),
                Point::new(0.0, 1.0),
            ])?;
            delta_fields(&mut rep, &poly, &compute_delta(&poly)?);
        }
        Command::Svg { file, out } => {
            rep = RunReport::new("svg");
            let poly = polygon_input(&mut rep, file)?;
            let r = compute_delta(&poly)?;
            let svg = emit_svg(&poly, &r, out)?;
            rep.text("output", out.display().to_string())
                .text("output_sha256", input::hex_digest(svg.as_bytes()))
                .int("section_points", r.sections.points.len())
                .int("chords", r.chords.len())
                .real("delta", r.delta);
        }
    }
    if cli.timing {
        rep.real("elapsed_s", start.elapsed().as_secs_f64());
    }
    Ok(rep)
}

/// Parses `argv` (including the program name), runs the command and
/// returns the process exit code.
pub fn dispatch<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind as K;
            return match e.kind() {
                K::DisplayHelp | K::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    match run(&cli) {
        Ok(rep) => {
            let text = if cli.json { rep.to_json() } else { rep.to_text() };
            match out.write_all(text.as_bytes()) {
                Ok(()) => EXIT_OK,
                Err(_) => EXIT_FAILURE,
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
