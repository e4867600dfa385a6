//! Command-line front end: catalog listing, single-point evaluation of the
//! relative frame, grid verification suites, and mesh export.
//!
//! Exit codes are a stable contract: 0 pass, 1 suite failure, 2 usage,
//! 3 geometric error, 4 I/O error.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use relgeo::frame::{
    build_frame, centre_points, curvature_line_directions, LineDirections, SupportSpec,
};
use relgeo::grid::GridSpec;
use relgeo::harness::{run_suite, Suite, SuiteOptions};
use relgeo::mesh::{build_mesh, write_csv, write_obj};
use relgeo::surface::eval_surface;
use relgeo::{Catalog, Error};

#[derive(Parser)]
#[command(
    name = "relgeo",
    about = "Relative differential geometry of surfaces: frames, parallel surfaces, verification suites",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the surface catalog (or the normalization kinds).
    List(ListArgs),
    /// Evaluate the full relative frame at one parameter point as JSON.
    Eval(EvalArgs),
    /// Run a verification suite over a grid and report pass/fail.
    Verify(VerifyArgs),
    /// Export meshes: base surface, parallels, centre sheets, normals.
    Mesh(MeshArgs),
}

#[derive(Args)]
struct CatalogArgs {
    /// Extension catalog file (same grammar as the built-in catalog).
    #[arg(long)]
    catalog: Option<String>,
}

#[derive(Args)]
struct ListArgs {
    #[command(flatten)]
    catalog: CatalogArgs,
    /// List the normalization kinds instead of the surfaces.
    #[arg(long)]
    normalizations: bool,
}

#[derive(Args)]
struct SurfaceArgs {
    #[command(flatten)]
    catalog: CatalogArgs,
    /// Catalog surface name.
    #[arg(long)]
    surface: String,
    /// Bind a named constant, e.g. `--param r=2` (repeatable).
    #[arg(long = "param", value_parser = parse_param)]
    params: Vec<(String, f64)>,
    /// Normalization: euclidean | equiaffine | equiaffine*<c> | expr:<q>.
    #[arg(long, default_value = "euclidean")]
    normalization: String,
    /// Jet order of every analyzed surface.
    #[arg(long, default_value_t = 4)]
    order: usize,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    surface: SurfaceArgs,
    /// Parameter point `u1,u2`.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    at: (f64, f64),
    /// Output format (json only).
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    surface: SurfaceArgs,
    /// Suite name; see the README for the list.
    #[arg(long)]
    suite: String,
    /// Relative distance for the suites that take one.
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    mu: f64,
    /// Grid RxC; defaults to the catalog entry's grid.
    #[arg(long)]
    grid: Option<String>,
    /// Override the suite tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Override the grid-constancy threshold used by hypothesis checks.
    #[arg(long)]
    constancy_tol: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MeshFormat {
    Obj,
    Csv,
}

#[derive(Args)]
struct MeshArgs {
    #[command(flatten)]
    surface: SurfaceArgs,
    /// Relative distance of a parallel sheet (repeatable).
    #[arg(long = "mu", allow_negative_numbers = true)]
    mus: Vec<f64>,
    /// Grid RxC (at least 2x2).
    #[arg(long, default_value = "16x16")]
    grid: String,
    /// Output path.
    #[arg(long)]
    out: String,
    #[arg(long, value_enum, default_value_t = MeshFormat::Obj)]
    format: MeshFormat,
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got `{s}`"))?;
    let v: f64 = v.parse().map_err(|_| format!("bad value in `{s}`"))?;
    Ok((k.to_string(), v))
}

fn parse_point(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected u1,u2, got `{s}`"))?;
    Ok((
        a.trim().parse().map_err(|_| format!("bad u1 in `{s}`"))?,
        b.trim().parse().map_err(|_| format!("bad u2 in `{s}`"))?,
    ))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.kind_name());
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Parse(_)
        | Error::UnknownConstant(_)
        | Error::UnknownSurface(_)
        | Error::UnknownSuite(_) => 2,
        Error::Io(_) => 4,
        _ => 3,
    }
}

fn run(cli: Cli) -> relgeo::Result<ExitCode> {
    match cli.command {
        Command::List(args) => cmd_list(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Mesh(args) => cmd_mesh(args),
    }
}

fn load_catalog(args: &CatalogArgs) -> relgeo::Result<Catalog> {
    let mut cat = Catalog::builtin().clone();
    if let Some(path) = &args.catalog {
        cat.extend_from(&fs::read_to_string(path)?)?;
    }
    Ok(cat)
}

/// Resolve surface + normalization + params; `--param` overrides catalog
/// defaults and binds constants for `expr:` normalizations.
fn resolve(args: &SurfaceArgs) -> relgeo::Result<(relgeo::SurfaceSpec, SupportSpec)> {
    let cat = load_catalog(&args.catalog)?;
    let mut spec = cat.get(&args.surface)?.clone();
    for (k, v) in &args.params {
        spec.params.insert(k.clone(), *v);
    }
    let support: SupportSpec = args.normalization.parse()?;
    Ok((spec, support))
}

fn cmd_list(args: ListArgs) -> relgeo::Result<ExitCode> {
    if args.normalizations {
        println!("euclidean            y is the Euclidean unit normal (q = 1)");
        println!("equiaffine           q = |K~|^(1/4); y is the affine normal");
        println!("equiaffine*<c>       homothetic equiaffine, nonzero real c");
        println!("expr:<q>             custom support function, e.g. expr:1 + 0.1*u1");
        return Ok(ExitCode::SUCCESS);
    }
    let cat = load_catalog(&args.catalog)?;
    for entry in cat.entries() {
        let params: Vec<&str> = entry.params.keys().map(|s| s.as_str()).collect();
        let header = if params.is_empty() {
            entry.name.clone()
        } else {
            format!("{}({})", entry.name, params.join(","))
        };
        println!(
            "{header:28} u1 in [{}, {}], u2 in [{}, {}], grid {}x{}",
            entry.domain[0].0,
            entry.domain[0].1,
            entry.domain[1].0,
            entry.domain[1].1,
            entry.default_grid.0,
            entry.default_grid.1
        );
        if !entry.note.is_empty() {
            println!("{:28}   {}", "", entry.note);
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
#[serde(untagged)]
enum DirectionsOut {
    Umbilic { umbilic: bool },
    Pair { directions: [[f64; 2]; 2] },
}

/// Full frame report at one point; field order is the output key order.
#[derive(Serialize)]
struct EvalReport {
    surface: String,
    normalization: String,
    point: [f64; 2],
    order: usize,
    x: [f64; 3],
    xi: [f64; 3],
    g: [[f64; 2]; 2],
    h: [[f64; 2]; 2],
    e: [[f64; 2]; 2],
    #[serde(rename = "gauss_K")]
    gauss: f64,
    q: f64,
    y: [f64; 3],
    #[serde(rename = "X")]
    covector: [f64; 3],
    #[serde(rename = "G")]
    metric: [[f64; 2]; 2],
    #[serde(rename = "B_cov")]
    shape_cov: [[f64; 2]; 2],
    #[serde(rename = "B_mixed")]
    shape_mixed: [[f64; 2]; 2],
    #[serde(rename = "rel_K")]
    rel_curvature: f64,
    #[serde(rename = "rel_H")]
    rel_mean_curvature: f64,
    kappa: [f64; 2],
    #[serde(rename = "R")]
    radii: [Option<f64>; 2],
    tchebychev: [f64; 3],
    darboux: [[[f64; 2]; 2]; 2],
    curvature_line_dirs: DirectionsOut,
    centre_points: [Option<[f64; 3]>; 2],
}

fn cmd_eval(args: EvalArgs) -> relgeo::Result<ExitCode> {
    if args.format != "json" {
        return Err(Error::Parse(format!(
            "unknown eval format `{}` (json only)",
            args.format
        )));
    }
    let (spec, support) = resolve(&args.surface)?;
    let sj = eval_surface(&spec, args.at, args.surface.order + support.order_cost())?;
    let frame = build_frame(&sj, &support, &spec.params)?;

    let tensor = |t: &relgeo::Tensor2<relgeo::Jet2>| {
        [
            [t.m[0][0].value(), t.m[0][1].value()],
            [t.m[1][0].value(), t.m[1][1].value()],
        ]
    };
    let dirs = match curvature_line_directions(&frame)? {
        LineDirections::Umbilic => DirectionsOut::Umbilic { umbilic: true },
        LineDirections::Pair(d) => DirectionsOut::Pair { directions: d },
    };
    let report = EvalReport {
        surface: spec.name.clone(),
        normalization: support.to_string(),
        point: [args.at.0, args.at.1],
        order: args.surface.order,
        x: sj.position.value().0,
        xi: sj.normal.value().0,
        g: tensor(&sj.first),
        h: tensor(&sj.second),
        e: tensor(&sj.third),
        gauss: sj.gauss.value(),
        q: frame.support.value(),
        y: frame.rel_normal.value().0,
        covector: frame.covector.value().0,
        metric: tensor(&frame.metric),
        shape_cov: tensor(&frame.shape_cov),
        shape_mixed: [
            [frame.shape_mixed.m[0][0], frame.shape_mixed.m[0][1]],
            [frame.shape_mixed.m[1][0], frame.shape_mixed.m[1][1]],
        ],
        rel_curvature: frame.curvature,
        rel_mean_curvature: frame.mean_curvature,
        kappa: frame.principal,
        radii: frame.radii,
        tchebychev: frame.tchebychev.0,
        darboux: frame.darboux,
        curvature_line_dirs: dirs,
        centre_points: centre_points(&frame).map(|p| p.map(|v| v.0)),
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("report serializes")
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> relgeo::Result<ExitCode> {
    let suite: Suite = args.suite.parse()?;
    let (spec, support) = resolve(&args.surface)?;
    let grid = match &args.grid {
        Some(g) => g.parse()?,
        None => GridSpec::new(spec.default_grid.0, spec.default_grid.1),
    };
    let mut opts = SuiteOptions {
        grid,
        order: args.surface.order,
        mu: args.mu,
        tolerance: args.tol,
        ..SuiteOptions::default()
    };
    if let Some(c) = args.constancy_tol {
        opts.constancy_tol = c;
    }
    let report = run_suite(&spec, &support, suite, &opts)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("report serializes")
    );
    Ok(if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_mesh(args: MeshArgs) -> relgeo::Result<ExitCode> {
    let (spec, support) = resolve(&args.surface)?;
    let grid: GridSpec = args.grid.parse()?;
    if grid.rows < 2 || grid.cols < 2 {
        return Err(Error::Parse("mesh grid must be at least 2x2".into()));
    }
    let bundle = build_mesh(
        &spec,
        &support,
        &args.mus,
        grid,
        args.surface.order,
        Default::default(),
    )?;
    let mut out: Vec<u8> = Vec::new();
    match args.format {
        MeshFormat::Obj => write_obj(&bundle, &mut out)?,
        MeshFormat::Csv => write_csv(&bundle, &mut out)?,
    }
    fs::write(&args.out, &out)?;
    let mut summary = BTreeMap::new();
    for object in &bundle.objects {
        summary.insert(object.name.clone(), object.vertices.len());
    }
    eprintln!("wrote {} ({:?} vertices per object)", args.out, summary);
    if !bundle.census.is_empty() {
        let sidecar = format!("{}.census.json", args.out);
        let mut f = fs::File::create(&sidecar)?;
        writeln!(
            f,
            "{}",
            serde_json::to_string_pretty(&bundle.census).expect("census serializes")
        )?;
        eprintln!(
            "censused {} points; reasons in {}",
            bundle.census.len(),
            sidecar
        );
    }
    Ok(ExitCode::SUCCESS)
}
