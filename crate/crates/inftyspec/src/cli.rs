//! Command-line front end: build domains, compute eigenpairs and stability
//! reports, run family sweeps, and render SVG figures.
//!
//! Output contract: data files are byte-deterministic for identical
//! configurations. Floating-point values in JSON/CSV reports are printed with
//! 17 significant digits ({:.16e}); no timestamps are emitted. Files are
//! written to a temporary sibling and renamed, so failures leave no partial
//! output.
//!
//! Exit codes: 0 success, 2 invalid or infeasible domain, 3 resolution or
//! connectivity failures, 4 when a verified theorem flag fails, 1 otherwise.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use crate::domains::{BallSpec, DomainSpec};
use crate::eigenfunc::{self, ConeFunction};
use crate::error::{Error, Result};
use crate::geodesic::{GeodesicConfig, Solver};
use crate::raster::{rasterize, DistanceField, Provenance, RasterDomain, EXTERIOR_VALUE};
use crate::spectra::{
    self, eigenpair_closed_form, sweep, EigenPair, NumericSweep, ReportOptions,
    StabilityReport, SweepConfig, SweepFamily,
};

const SCHEMA_VERSION: u32 = 1;
const DEFAULT_H: f64 = 0.00390625; // 2^-8

#[derive(Parser)]
#[command(
    name = "inftyspec",
    about = "Geometric infinity-eigenvalues of planar domains and ball-stability reports"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute eigenvalues and a stability report for one domain.
    Compute(DomainArgs),
    /// Verify the two-ball sandwich; exits 4 when a theorem flag fails.
    Verify(DomainArgs),
    /// Sweep a parametrized family and report per-index trends.
    Sweep(SweepArgs),
    /// Export the distance-cone eigenfunction, the reference cone, and their
    /// deviation field.
    Eigenfunction(DomainArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolverArg {
    Fmm,
    Dijkstra8,
    Dijkstra16,
}

impl From<SolverArg> for Solver {
    fn from(s: SolverArg) -> Solver {
        match s {
            SolverArg::Fmm => Solver::FastMarching,
            SolverArg::Dijkstra8 => Solver::Dijkstra8,
            SolverArg::Dijkstra16 => Solver::Dijkstra16,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Args)]
struct DomainArgs {
    /// Domain family: ball | annulus | stadium | polygon | ellipse.
    #[arg(long)]
    domain: String,
    /// Reference ball radius (deltas are measured against 1/r).
    #[arg(long, default_value_t = 1.0)]
    r: f64,
    /// Grid spacing.
    #[arg(long, default_value_t = DEFAULT_H)]
    h: f64,
    /// Stadium cap radius or annulus inner radius.
    #[arg(long)]
    eps: Option<f64>,
    /// Stadium straight-segment length.
    #[arg(long)]
    ell: Option<f64>,
    /// Polygon side count.
    #[arg(long)]
    k: Option<u32>,
    /// Ellipse semi-axes, comma separated (ratios when volume-matched).
    #[arg(long, value_delimiter = ',')]
    axes: Option<Vec<f64>>,
    /// Normalize the domain to the volume of a ball of this radius; it also
    /// becomes the reference radius.
    #[arg(long)]
    match_volume: Option<f64>,
    #[arg(long, value_enum, default_value_t = SolverArg::Dijkstra16)]
    solver: SolverArg,
    /// Boundary subsampling stride in the diameter search.
    #[arg(long, default_value_t = 16)]
    stride: usize,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Any of json,csv,svg.
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = vec![Format::Json])]
    formats: Vec<Format>,
}

#[derive(Args)]
struct SweepArgs {
    /// Family: polygon | ellipse | stadium4.
    #[arg(long)]
    family: String,
    /// Indices: a single value "12", a list "10,20,40", or a range "3:64".
    #[arg(long)]
    k: String,
    #[arg(long, default_value_t = 1.0)]
    r: f64,
    /// Grid spacing; when present the sweep runs the numeric path, otherwise
    /// closed forms only.
    #[arg(long)]
    h: Option<f64>,
    /// Ellipse axis-ratio rule (only "1+1/k" is defined).
    #[arg(long)]
    ratio: Option<String>,
    /// Also report the Fraenkel asymmetry per member (numeric path).
    #[arg(long, default_value_t = false)]
    fraenkel: bool,
    #[arg(long, value_enum, default_value_t = SolverArg::Fmm)]
    solver: SolverArg,
    #[arg(long, default_value_t = 64)]
    stride: usize,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = vec![Format::Json, Format::Csv])]
    formats: Vec<Format>,
}

/// Entry point for the binary; returns the process exit code.
pub fn run() -> i32 {
    init_thread_pool();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Compute(args) => cmd_compute(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Sweep(args) => cmd_sweep(&args),
        Command::Eigenfunction(args) => cmd_eigenfunction(&args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParameter(_)
        | Error::Infeasible(_)
        | Error::NotCertified(_)
        | Error::NotConvex(_)
        | Error::BoundVacuous(_)
        | Error::EmptyIntersection(_)
        | Error::Json(_) => 2,
        Error::ResolutionTooCoarse(_) | Error::EmptyRaster(_) | Error::Disconnected(_) => 3,
        Error::Io(_) => 1,
    }
}

/// INFTY_SPEC_THREADS caps the worker count (0 or unset picks the default).
fn init_thread_pool() {
    if let Ok(v) = std::env::var("INFTY_SPEC_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn build_domain(args: &DomainArgs) -> Result<(DomainSpec, f64)> {
    let reference = args.match_volume.unwrap_or(args.r);
    let spec = match args.domain.as_str() {
        "ball" => DomainSpec::disk(args.r)?,
        "annulus" => {
            let eps = args.eps.ok_or_else(|| {
                Error::InvalidParameter("annulus needs --eps (inner radius)".into())
            })?;
            DomainSpec::normalized_annulus(eps, reference)?
        }
        "stadium" => match (args.eps, args.ell) {
            (Some(eps), Some(ell)) => DomainSpec::stadium(eps, ell)?,
            (Some(eps), None) => DomainSpec::normalized_stadium_with_cap(eps, reference)?,
            (None, Some(ell)) => DomainSpec::normalized_stadium(ell, reference)?,
            (None, None) => {
                return Err(Error::InvalidParameter(
                    "stadium needs --eps and/or --ell".into(),
                ))
            }
        },
        "polygon" => {
            let k = args
                .k
                .ok_or_else(|| Error::InvalidParameter("polygon needs --k".into()))?;
            DomainSpec::normalized_polygon(k, reference)?
        }
        "ellipse" => {
            let axes = args
                .axes
                .as_ref()
                .ok_or_else(|| Error::InvalidParameter("ellipse needs --axes".into()))?;
            if args.match_volume.is_some() {
                DomainSpec::normalized_ellipse(axes, reference)?
            } else {
                DomainSpec::ellipse(axes.clone())?
            }
        }
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown domain '{other}' (expected ball|annulus|stadium|polygon|ellipse)"
            )))
        }
    };
    Ok((spec, reference))
}

fn formats(list: &[Format]) -> BTreeSet<Format> {
    list.iter().copied().collect()
}

#[derive(Serialize)]
struct ComputeOutput<'a> {
    schema_version: u32,
    domain: &'a DomainSpec,
    eigenpair_closed_form: EigenPair,
    eigenpair: EigenPair,
    stability: &'a StabilityReport,
}

fn cmd_compute(args: &DomainArgs) -> Result<i32> {
    let (spec, r) = build_domain(args)?;
    let cfg = GeodesicConfig::new(args.solver.into(), args.stride);
    let pair_numeric = spectra::eigenpair_numeric(&spec, args.h, &cfg)?;
    let opts = ReportOptions { geodesic: cfg, eigenfunction: true, ..ReportOptions::default() };
    let report = spectra::stability_report(&spec, r, args.h, &opts)?;

    let fmts = formats(&args.formats);
    if fmts.contains(&Format::Json) {
        let out = ComputeOutput {
            schema_version: SCHEMA_VERSION,
            domain: &spec,
            eigenpair_closed_form: eigenpair_closed_form(&spec),
            eigenpair: pair_numeric,
            stability: &report,
        };
        write_atomic(&args.out.join("report.json"), to_json_17(&out)?.as_bytes())?;
    }
    if fmts.contains(&Format::Svg) {
        write_domain_svg(&args.out.join("domain.svg"), &spec, args.h, &report)?;
    }
    if fmts.contains(&Format::Csv) {
        eprintln!("note: csv output applies to sweeps; ignoring");
    }
    Ok(0)
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    schema_version: u32,
    domain: &'a DomainSpec,
    report: &'a StabilityReport,
}

fn cmd_verify(args: &DomainArgs) -> Result<i32> {
    let (spec, r) = build_domain(args)?;
    let cfg = GeodesicConfig::new(args.solver.into(), args.stride);
    let opts = ReportOptions { geodesic: cfg, ..ReportOptions::default() };
    let report = spectra::stability_report(&spec, r, args.h, &opts)?;

    let fmts = formats(&args.formats);
    if fmts.contains(&Format::Json) {
        let out =
            VerifyOutput { schema_version: SCHEMA_VERSION, domain: &spec, report: &report };
        write_atomic(&args.out.join("verify.json"), to_json_17(&out)?.as_bytes())?;
    }
    if fmts.contains(&Format::Svg) {
        write_domain_svg(&args.out.join("domain.svg"), &spec, args.h, &report)?;
    }
    let pass =
        report.flags.inner_ball && report.flags.outer_ball && report.flags.symdiff_within_bound;
    Ok(if pass { 0 } else { 4 })
}

#[derive(Serialize)]
struct SweepOutput<'a> {
    schema_version: u32,
    family: &'a str,
    r: f64,
    rows: &'a [spectra::SweepRow],
    summary: &'a spectra::SweepSummary,
}

fn cmd_sweep(args: &SweepArgs) -> Result<i32> {
    let family = match args.family.as_str() {
        "polygon" => SweepFamily::Polygon,
        "ellipse" => SweepFamily::Ellipse,
        "stadium4" => SweepFamily::Stadium,
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown family '{other}' (expected polygon|ellipse|stadium4)"
            )))
        }
    };
    if let Some(ratio) = &args.ratio {
        if family != SweepFamily::Ellipse {
            return Err(Error::InvalidParameter("--ratio applies to the ellipse family".into()));
        }
        if ratio != "1+1/k" {
            return Err(Error::InvalidParameter(format!(
                "unsupported ratio rule '{ratio}' (only 1+1/k is defined)"
            )));
        }
    }
    let indices = parse_indices(&args.k)?;
    let numeric = args.h.map(|h| NumericSweep {
        h,
        geodesic: GeodesicConfig::new(args.solver.into(), args.stride),
        fraenkel: args.fraenkel,
        deviation: family == SweepFamily::Stadium,
    });
    let cfg = SweepConfig { family, r: args.r, indices, numeric };
    let result = sweep(&cfg)?;

    let fmts = formats(&args.formats);
    if fmts.contains(&Format::Json) {
        let out = SweepOutput {
            schema_version: SCHEMA_VERSION,
            family: &args.family,
            r: args.r,
            rows: &result.rows,
            summary: &result.summary,
        };
        write_atomic(&args.out.join("sweep.json"), to_json_17(&out)?.as_bytes())?;
    }
    if fmts.contains(&Format::Csv) {
        write_atomic(&args.out.join("sweep.csv"), sweep_csv(&result.rows).as_bytes())?;
    }
    if fmts.contains(&Format::Svg) {
        eprintln!("note: svg output applies to single domains; ignoring");
    }
    Ok(0)
}

#[derive(Serialize)]
struct EigenfunctionOutput<'a> {
    schema_version: u32,
    domain: &'a DomainSpec,
    r: f64,
    h: f64,
    sup_deviation: f64,
    argmax: [f64; 2],
    cone_center: [f64; 2],
}

fn cmd_eigenfunction(args: &DomainArgs) -> Result<i32> {
    let (spec, r) = build_domain(args)?;
    let raster = rasterize(&spec, args.h)?;
    let u = eigenfunc::distance_eigenfunction(&spec, &raster)?;
    let (cheb, _) = u.field.max_value_cell();
    let center = raster.frame.center_of(cheb);
    let cone = ConeFunction::new(center, r)?;
    let deviation = eigenfunc::sup_deviation(&u, &cone)?;

    let frame = raster.frame.clone();
    let cells = frame.cell_count();
    let mut u_values = vec![EXTERIOR_VALUE; cells];
    let mut v_values = vec![EXTERIOR_VALUE; cells];
    let mut d_values = vec![EXTERIOR_VALUE; cells];
    for idx in raster.occupied_cells() {
        let uu = u.eval_cell(idx);
        let vv = cone.eval(frame.center_of(idx));
        u_values[idx] = uu;
        v_values[idx] = vv;
        d_values[idx] = (uu - vv).abs();
    }
    std::fs::create_dir_all(&args.out)?;
    DistanceField::new(frame.clone(), Provenance::Euclidean, u_values)
        .write_binary(&args.out.join("eigenfunction.bin"))?;
    DistanceField::new(frame.clone(), Provenance::Euclidean, v_values)
        .write_binary(&args.out.join("cone.bin"))?;
    DistanceField::new(frame.clone(), Provenance::Euclidean, d_values)
        .write_binary(&args.out.join("deviation.bin"))?;

    if formats(&args.formats).contains(&Format::Json) {
        let out = EigenfunctionOutput {
            schema_version: SCHEMA_VERSION,
            domain: &spec,
            r,
            h: args.h,
            sup_deviation: deviation.value,
            argmax: frame.center_of(deviation.argmax_cell),
            cone_center: center,
        };
        write_atomic(&args.out.join("eigenfunction.json"), to_json_17(&out)?.as_bytes())?;
    }
    Ok(0)
}

/// "12", "10,20,40" or "3:64" (inclusive).
fn parse_indices(text: &str) -> Result<Vec<u32>> {
    let bad = |m: &str| Error::InvalidParameter(format!("cannot parse indices '{text}': {m}"));
    if let Some((a, b)) = text.split_once(':') {
        let lo: u32 = a.trim().parse().map_err(|_| bad("range start"))?;
        let hi: u32 = b.trim().parse().map_err(|_| bad("range end"))?;
        if lo > hi {
            return Err(bad("empty range"));
        }
        return Ok((lo..=hi).collect());
    }
    text.split(',')
        .map(|part| part.trim().parse::<u32>().map_err(|_| bad(part)))
        .collect()
}

// ---------------------------------------------------------------------------
// Deterministic serialization helpers.

/// serde_json formatter printing every f64 with 17 significant digits.
struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serialize with fixed float formatting (17 significant digits).
pub fn to_json_17<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFormatter);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("serializer emits utf-8"))
}

/// Fixed column order; optional columns stay empty when not applicable.
fn sweep_csv(rows: &[spectra::SweepRow]) -> String {
    let mut out = String::from("k,lambda_d,lambda_n,delta1,delta2,hausdorff,fraenkel,sup_deviation\n");
    for row in rows {
        let opt = |v: Option<f64>| v.map(|x| format!("{x:.16e}")).unwrap_or_default();
        out.push_str(&format!(
            "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{},{}\n",
            row.k,
            row.lambda_d,
            row.lambda_n,
            row.delta1,
            row.delta2,
            row.hausdorff,
            opt(row.fraenkel),
            opt(row.sup_deviation),
        ));
    }
    out
}

/// Write via a temporary sibling plus rename.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    let file_name = path
        .file_name()
        .ok_or_else(|| Error::InvalidParameter(format!("bad output path {path:?}")))?;
    let tmp = path.with_file_name(format!(".tmp-{}", file_name.to_string_lossy()));
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Occupancy plus the inner (green) and outer (red) sandwich balls.
fn write_domain_svg(
    path: &Path,
    spec: &DomainSpec,
    h: f64,
    report: &StabilityReport,
) -> Result<()> {
    let raster = rasterize(spec, h)?;
    let inner = BallSpec::new(chebyshev_center(&raster), report.inner_radius);
    let outer = BallSpec::new(raster.centroid(), report.outer_radius_lemma);
    write_atomic(path, render_svg(&raster, &[(inner, "#1a9641"), (outer, "#d7191c")]).as_bytes())
}

fn chebyshev_center(raster: &RasterDomain) -> [f64; 2] {
    let field = crate::raster::edt(raster);
    let (idx, _) = field.max_value_cell();
    raster.frame.center_of(idx)
}

/// Render occupancy as row runs in cell coordinates (y flipped for SVG).
fn render_svg(raster: &RasterDomain, circles: &[(BallSpec, &str)]) -> String {
    let frame = &raster.frame;
    let (w, ht) = (frame.width, frame.height);
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {w} {ht}\" \
         width=\"640\" shape-rendering=\"crispEdges\">\n",
    ));
    svg.push_str("<g fill=\"#b8c4d8\">\n");
    for iy in 0..ht {
        let y = ht - 1 - iy;
        let mut ix = 0;
        while ix < w {
            if raster.is_occupied(ix, iy) {
                let start = ix;
                while ix < w && raster.is_occupied(ix, iy) {
                    ix += 1;
                }
                svg.push_str(&format!(
                    "<rect x=\"{start}\" y=\"{y}\" width=\"{}\" height=\"1\"/>\n",
                    ix - start
                ));
            } else {
                ix += 1;
            }
        }
    }
    svg.push_str("</g>\n");
    for (ball, color) in circles {
        let cx = (ball.center[0] - frame.origin[0]) / frame.h;
        let cy = ht as f64 - (ball.center[1] - frame.origin[1]) / frame.h;
        let r = ball.radius / frame.h;
        svg.push_str(&format!(
            "<circle cx=\"{cx:.3}\" cy=\"{cy:.3}\" r=\"{r:.3}\" fill=\"none\" \
             stroke=\"{color}\" stroke-width=\"1.5\"/>\n"
        ));
    }
    svg.push_str("</svg>\n");
    svg
}
