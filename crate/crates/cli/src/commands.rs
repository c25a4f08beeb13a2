use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use cmcforge::genus0::{self, ExistenceFlag};
use cmcforge::nullcurve::monodromy;
use cmcforge::periodkill::{rigid_family, solve_lambda, su2_residual, synthetic_family, FamilySpec, SolveReport};
use cmcforge::surface::{
    build_checked_mesh, export_json, export_obj, numeric_ta, orbit_generators, reflect_orbit, GridSpec, MeshStats,
    Pipeline, QuadratureSpec,
};
use cmcforge::wdata::{catalog, catalog_names, WeierstrassData};

use crate::config::RunConfig;
use crate::verify;

pub const SCHEMA: &str = "v1";
const MAX_ITER: usize = 20;
const MAX_DOUBLINGS: usize = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] cmcforge::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Parser)]
#[command(name = "cmcforge", version, about = "CMC-1 surfaces in hyperbolic 3-space")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the built-in surfaces.
    Catalog {
        #[arg(long)]
        json: bool,
    },
    /// Existence ranges of c and total absolute curvature for symmetry (m, n).
    Ranges {
        #[arg(long, requires = "n")]
        m: Option<usize>,
        #[arg(long, requires = "m")]
        n: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Solve the period problem and print a JSON report.
    Solve(RunArgs),
    /// Write an OBJ mesh and a JSON report next to it.
    Mesh(RunArgs),
    /// Run invariant suites; exit status 2 if any check fails.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub surface: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Radial and angular vertex counts, e.g. `32,32`.
    #[arg(long, value_parser = parse_grid)]
    pub grid: Option<(usize, usize)>,
    #[arg(long)]
    pub orbit_depth: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Run outside the certified range of c.
    #[arg(long)]
    pub force: bool,
    /// Omit the `meta` block (version, timestamp) from JSON output.
    #[arg(long)]
    pub no_meta: bool,
    /// JSON file with default values for the flags above.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected `nu,nv`")?;
    let a: usize = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b: usize = b.trim().parse().map_err(|e| format!("{e}"))?;
    if a < 2 || b < 2 {
        return Err("grid needs at least 2 vertices per direction".into());
    }
    Ok((a, b))
}

impl RunArgs {
    fn config(&self) -> Result<RunConfig, CliError> {
        let flags = RunConfig {
            surface: self.surface.clone(),
            c: self.c,
            tol: self.tol,
            grid: self.grid,
            orbit_depth: self.orbit_depth,
            out: self.out.clone(),
            force: self.force,
            no_meta: self.no_meta,
        };
        Ok(match &self.config {
            Some(p) => RunConfig::load(p)?.merged(flags),
            None => flags,
        })
    }
}

/// Bounds rayon's pool by `CMCFORGE_THREADS` when set.
pub fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("CMCFORGE_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| CliError::Usage(format!("CMCFORGE_THREADS must be a positive integer, got `{v}`")))?;
    if n == 0 {
        return Err(CliError::Usage("CMCFORGE_THREADS must be positive".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

/// `Ok(false)` means a verification failed.
pub fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Catalog { json } => {
            print!("{}", cmd_catalog(json)?);
            Ok(true)
        }
        Command::Ranges { m, n, json } => {
            print!("{}", cmd_ranges(m.zip(n), json)?);
            Ok(true)
        }
        Command::Solve(args) => {
            print!("{}", cmd_solve(&args.config()?)?);
            Ok(true)
        }
        Command::Mesh(args) => {
            print!("{}", cmd_mesh(&args.config()?)?);
            Ok(true)
        }
        Command::Verify { suite } => {
            let results = verify::run_suite(&suite)?;
            for r in &results {
                println!("{} {}: {}", if r.pass { "PASS" } else { "FAIL" }, r.name, r.detail);
            }
            Ok(results.iter().all(|r| r.pass))
        }
    }
}

fn pretty(v: &Value) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

pub fn cmd_catalog(json: bool) -> Result<String, CliError> {
    let mut rows = Vec::new();
    for name in catalog_names() {
        let d = catalog(&name)?;
        rows.push(json!({
            "name": name,
            "ends": d.ends(),
            "symmetry": d.symmetry,
            "mesh": d.piece.is_some(),
        }));
    }
    rows.push(json!({"name": "synthetic", "ends": 2, "symmetry": null, "mesh": false}));
    if json {
        return pretty(&json!({"schema": SCHEMA, "surfaces": rows}));
    }
    let mut out = String::new();
    for r in rows {
        let sym = match &r["symmetry"] {
            Value::Array(a) => format!("({},{})", a[0], a[1]),
            _ => "-".into(),
        };
        out.push_str(&format!("{:<20} ends {:<3} symmetry {:<6} mesh {}\n", r["name"].as_str().unwrap_or(""), r["ends"].to_string(), sym, if r["mesh"] == true { "yes" } else { "no" }));
    }
    Ok(out)
}

pub fn cmd_ranges(mn: Option<(usize, usize)>, json: bool) -> Result<String, CliError> {
    let rows = match mn {
        Some((m, n)) => {
            let solid = genus0::platonic_table()?
                .into_iter()
                .find(|r| (r.m, r.n) == (m, n))
                .map(|r| r.solid)
                .unwrap_or_else(|| format!("({m},{n})"));
            vec![genus0::table_row(&solid, m, n)?]
        }
        None => genus0::platonic_table()?,
    };
    if json {
        return pretty(&json!({"schema": SCHEMA, "rows": rows}));
    }
    if let [r] = rows.as_slice() {
        if mn.is_some() {
            return Ok(format!("{} ∪ {}\n", r.c_negative, r.c_positive));
        }
    }
    Ok(genus0::format_table(&rows))
}

/// Weierstrass data and period family for a surface name.
fn lookup(name: &str) -> Result<(Option<WeierstrassData>, FamilySpec), CliError> {
    if name.trim().eq_ignore_ascii_case("synthetic") {
        return Ok((None, synthetic_family()));
    }
    let d = catalog(name)?;
    Ok((Some(d.clone()), rigid_family(d)))
}

/// Rejects `c` outside the range where existence is known, unless forced.
fn check_range(d: Option<&WeierstrassData>, fam: &FamilySpec, c: f64, force: bool) -> Result<Value, CliError> {
    let existence = match d.and_then(|d| d.symmetry) {
        Some((m, n)) => {
            let e = genus0::exists_cmc(m, n, c)?;
            let certified = e.exists == Some(true) && (e.flag != ExistenceFlag::BeyondTheorem || m == 2);
            if !certified && !force {
                return Err(CliError::Usage(format!(
                    "c = {c} is outside the certified range for symmetry ({m},{n}) ({:?}); pass --force to run anyway",
                    e.flag
                )));
            }
            serde_json::to_value(e)?
        }
        None => {
            if d.is_none() && c.abs() > fam.c_limit && !force {
                return Err(CliError::Usage(format!("|c| = {} exceeds {} for {}; pass --force", c.abs(), fam.c_limit, fam.name)));
            }
            Value::Null
        }
    };
    Ok(existence)
}

fn meta(cfg: &RunConfig) -> Option<Value> {
    if cfg.no_meta {
        return None;
    }
    let secs = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    Some(json!({"version": env!("CARGO_PKG_VERSION"), "unix_time": secs}))
}

struct Solved {
    data: WeierstrassData,
    report: SolveReport,
    existence: Value,
    tol: f64,
}

fn solve(cfg: &RunConfig) -> Result<Solved, CliError> {
    let name = cfg.surface()?;
    let c = cfg.c()?;
    let tol = cfg.tol()?;
    let (data, mut fam) = lookup(name)?;
    let existence = check_range(data.as_ref(), &fam, c, cfg.force)?;
    if data.is_some() || cfg.force {
        fam.c_limit = f64::INFINITY;
    }
    let report = solve_lambda(&fam, c, tol, MAX_ITER)?;
    let data = match data {
        Some(d) => d,
        None => (fam.data)(&report.lambda)?,
    };
    Ok(Solved { data, report, existence, tol })
}

fn residuals(s: &Solved) -> Value {
    json!({
        "period": s.report.residual,
        "period_history": s.report.residual_history,
        "su2": s.report.su2_defect,
        "gamma": su2_residual(&s.report.rep),
    })
}

fn reducibility(s: &Solved) -> Value {
    json!({"reducible": s.report.reducible, "commutant": s.report.commutant})
}

pub fn cmd_solve(cfg: &RunConfig) -> Result<String, CliError> {
    let s = solve(cfg)?;
    let c = s.report.c;
    let mut loops = Vec::new();
    for name in s.data.loops.keys() {
        let m = monodromy(&s.data, c, name, s.tol.min(1e-10))?;
        let tr = m.rho.trace();
        loops.push(json!({
            "loop": name,
            "trace": [tr.re, tr.im],
            "abs_trace": tr.norm(),
            "sign": m.sign_flag,
            "residual_constancy": m.residual_constancy,
        }));
    }
    let mut v = json!({
        "schema": SCHEMA,
        "surface": s.data.name,
        "c": c,
        "tol": s.tol,
        "lambda": s.report.lambda,
        "iterations": s.report.iterations,
        "residuals": residuals(&s),
        "reducibility": reducibility(&s),
        "existence": s.existence,
        "monodromy": loops,
        "reflections": s.report.rep,
    });
    if let Some(m) = meta(cfg) {
        v["meta"] = m;
    }
    pretty(&v)
}

#[derive(Serialize)]
struct MeshReport<'a> {
    schema: &'static str,
    surface: &'a str,
    c: f64,
    lambda: &'a [f64],
    residuals: Value,
    reducibility: Value,
    #[serde(rename = "TA_numeric")]
    ta_numeric: f64,
    #[serde(rename = "TA_formula")]
    ta_formula: Option<f64>,
    mesh_stats: MeshStats,
    obj: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    meta: Option<Value>,
}

fn report_path(obj: &Path) -> PathBuf {
    obj.with_extension("json")
}

pub fn cmd_mesh(cfg: &RunConfig) -> Result<String, CliError> {
    let out = cfg.out.clone().ok_or_else(|| CliError::Usage("--out is required".into()))?;
    let s = solve(cfg)?;
    if s.data.piece.is_none() {
        return Err(CliError::Usage(format!("{} has no fundamental piece to mesh", s.data.name)));
    }
    let c = s.report.c;
    let pipeline = Pipeline { data: &s.data, c, tol: s.tol.max(1e-13), gauge: s.report.rep.gauge, rep: Some(s.report.rep.clone()) };
    let mut grid = GridSpec::default();
    if let Some((nu, nv)) = cfg.grid {
        grid.n_radial = nu;
        grid.n_angular = nv;
    }
    let piece = build_checked_mesh(&pipeline, &grid, MAX_DOUBLINGS)?;
    let mut mesh = reflect_orbit(&piece, &orbit_generators(&s.data), cfg.orbit_depth.unwrap_or(0))?;
    mesh.provenance.lambda = s.report.lambda.clone();
    let ta_numeric = numeric_ta(&pipeline, &QuadratureSpec::default())?;
    let ta_formula = genus0::total_abs_curvature(s.data.ends(), c).ok();
    export_obj(&mesh, &out)?;
    let report = MeshReport {
        schema: SCHEMA,
        surface: &s.data.name,
        c,
        lambda: &s.report.lambda,
        residuals: residuals(&s),
        reducibility: reducibility(&s),
        ta_numeric,
        ta_formula,
        mesh_stats: MeshStats::of(&mesh),
        obj: out.display().to_string(),
        meta: meta(cfg),
    };
    let json_path = report_path(&out);
    export_json(&report, &json_path)?;
    Ok(format!("wrote {} and {}\n", out.display(), json_path.display()))
}
