//! Command-line front end.
//!
//! Structured results go out as JSON, grids and series as CSV. When `--out`
//! names a file, a manifest `<file>.manifest.json` is written next to it with
//! the parsed options, SHA-256 digests of inputs and outputs, the tool
//! version and a timestamp. Data files carry no timestamps, so repeated runs
//! produce identical bytes.

mod close;
mod manifest;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::basis::{adapt_quadrature, GasModel, MomentBasis, MomentVector, Statistics};
use crate::error::{Error, Result};
use crate::hyperbolic::{check_lower_bound, equilibrium_spectrum, hyperbolicity_region_scan, DirectionSet, RegionConfig};
use crate::mep::{realizability_probe_1d, JunkPath};
use crate::relativistic::{coefficient_sweep_csv, table_csv, table_rows, RelGas};
use crate::sim1d::{run, snapshot_csv, SimClosure, SimConfig};

pub use close::{default_order, BasisSpec};
pub use manifest::{sha256_hex, CommandManifest, FileDigest};

/// Number formatting shared by every CSV writer: 17 significant digits.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Parser, Debug)]
#[command(name = "mepkit", version, about = "Maximum-entropy moment closures and moment-system tools")]
struct Cli {
    /// Log progress to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Moments JSON in, multipliers and closing fluxes JSON out.
    Close(CloseArgs),
    /// Characteristic speeds of the full order-N system at equilibrium.
    Speeds(SpeedsArgs),
    /// Hyperbolicity mask of the linearized 13-moment closure.
    Region(RegionArgs),
    /// Relativistic equilibrium and closure coefficients over an (alpha, gamma) grid.
    RelCoeffs(RelCoeffsArgs),
    /// Regime table of the relativistic integrals with numeric companion rows.
    RelTable(RelTableArgs),
    /// Dual-solver failure probe along a path of 1D five-moment states.
    ProbeJunk(ProbeArgs),
    /// Runs the 1D moment-system solver.
    Simulate(SimulateArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum StatArg {
    Classical,
    Fermi,
    Bose,
}

impl From<StatArg> for Statistics {
    fn from(s: StatArg) -> Self {
        match s {
            StatArg::Classical => Statistics::Classical,
            StatArg::Fermi => Statistics::Fermi,
            StatArg::Bose => Statistics::Bose,
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct CloseArgs {
    /// Moments JSON (`basis`, `values`, optional `gas`, `quadrature_order`).
    #[arg(required_unless_present = "from_multipliers", conflicts_with = "from_multipliers")]
    moments: Option<PathBuf>,
    /// Multipliers JSON (`basis`, `multipliers`), e.g. the output of a previous `close`.
    #[arg(long)]
    from_multipliers: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct SpeedsArgs {
    /// Truncation order of the full basis (1 selects the Euler basis).
    #[arg(long = "N")]
    n: u32,
    #[arg(long, value_enum, default_value = "classical")]
    statistics: StatArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct RegionArgs {
    /// Scan configuration JSON; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    sigma_points: Option<usize>,
    #[arg(long)]
    q_points: Option<usize>,
    #[arg(long, value_enum)]
    directions: Option<DirArg>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum DirArg {
    Icosahedral,
    Axis,
}

#[derive(Args, Debug, Serialize)]
struct RelCoeffsArgs {
    /// Comma-separated alpha values.
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    alphas: Vec<f64>,
    /// Comma-separated gamma values.
    #[arg(long, value_delimiter = ',', required = true)]
    gammas: Vec<f64>,
    #[arg(long, value_enum, default_value = "classical")]
    statistics: StatArg,
    /// Gas constants JSON (`m`, `c`, `kb`, `y`).
    #[arg(long)]
    gas: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct RelTableArgs {
    #[arg(long)]
    gas: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct ProbeArgs {
    /// Path JSON `{"start": [5 moments], "end": [5 moments]}`; the documented
    /// path when absent.
    #[arg(long)]
    path: Option<PathBuf>,
    #[arg(long, default_value_t = 20)]
    steps: usize,
    #[arg(long, default_value_t = 64)]
    order: usize,
    #[arg(long, default_value_t = 1e-3)]
    resolution: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct SimulateArgs {
    /// Simulation config JSON.
    config: PathBuf,
    /// Directory for snapshot CSVs and the run manifest.
    #[arg(long)]
    out_dir: PathBuf,
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code: 0 on success, 2 on validation errors, 3 on numerical
/// failures. Errors are written to stderr as JSON.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let report = serde_json::json!({"error": "UsageError", "message": e.to_string().trim_end()});
            eprintln!("{report}");
            return 2;
        }
    };
    if cli.verbose {
        let _ = env_logger::Builder::new().filter_level(log::LevelFilter::Info).try_init();
    }
    match execute(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", serde_json::to_string(&e.report()).unwrap_or_else(|_| e.to_string()));
            if e.is_numerical() {
                3
            } else {
                2
            }
        }
    }
}

fn read(path: &Path) -> Result<(String, FileDigest)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let digest = FileDigest::of(path, text.as_bytes());
    Ok((text, digest))
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Writes `data` to `out` plus its manifest, or to stdout.
fn emit(out: Option<&Path>, data: &str, mut manifest: CommandManifest) -> Result<()> {
    match out {
        None => {
            print!("{data}");
            Ok(())
        }
        Some(p) => {
            write_file(p, data)?;
            manifest.outputs.push(FileDigest::of(p, data.as_bytes()));
            manifest.write_next_to(p)
        }
    }
}

fn write_file(p: &Path, data: &str) -> Result<()> {
    std::fs::write(p, data).map_err(|e| Error::Io(format!("{}: {e}", p.display())))
}

fn execute(cmd: &Command) -> Result<()> {
    match cmd {
        Command::Close(a) => {
            let (name, path) = match (&a.moments, &a.from_multipliers) {
                (Some(p), _) => ("close", p),
                (None, Some(p)) => ("close --from-multipliers", p),
                (None, None) => return Err(Error::InvalidInput("no input given".into())),
            };
            let (text, digest) = read(path)?;
            let out = if a.from_multipliers.is_some() {
                close::from_multipliers(&text)?
            } else {
                close::from_moments(&text)?
            };
            let m = CommandManifest::new(name, a, vec![digest]);
            emit(a.out.as_deref(), &json(&out)?, m)
        }
        Command::Speeds(a) => {
            let gas = GasModel::with_statistics(a.statistics.into());
            let (_, spec) = equilibrium_spectrum(a.n, &gas)?;
            let lb = check_lower_bound(a.n, &spec);
            let out = serde_json::json!({
                "N": a.n,
                "statistics": a.statistics,
                "bound": lb.bound,
                "ratio": lb.ratio,
                "margin": lb.margin,
                "satisfied": lb.satisfied,
                "lambda_max": spec.lambda_max,
                "c0": spec.c0,
                "direction": spec.direction,
                "eigenvalues": spec.eigenvalues,
            });
            emit(a.out.as_deref(), &json(&out)?, CommandManifest::new("speeds", a, vec![]))
        }
        Command::Region(a) => {
            let mut inputs = vec![];
            let mut cfg = match &a.config {
                Some(p) => {
                    let (text, d) = read(p)?;
                    inputs.push(d);
                    serde_json::from_str::<RegionConfig>(&text)?
                }
                None => RegionConfig::default(),
            };
            if let Some(n) = a.sigma_points {
                cfg.sigma_points = n;
            }
            if let Some(n) = a.q_points {
                cfg.q_points = n;
            }
            if let Some(d) = a.directions {
                cfg.directions = match d {
                    DirArg::Icosahedral => DirectionSet::Icosahedral,
                    DirArg::Axis => DirectionSet::Axis,
                };
            }
            let scan = hyperbolicity_region_scan(&cfg, &GasModel::default())?;
            let mut m = CommandManifest::new("region", a, inputs);
            m.extra = Some(serde_json::to_value(&cfg).map_err(|e| Error::Io(e.to_string()))?);
            emit(a.out.as_deref(), &scan.to_csv(), m)
        }
        Command::RelCoeffs(a) => {
            let (gas, inputs) = rel_gas(a.gas.as_deref())?;
            let gas = gas.with_statistics(a.statistics.into());
            gas.validate()?;
            let csv = coefficient_sweep_csv(&a.alphas, &a.gammas, &gas);
            emit(a.out.as_deref(), &csv, CommandManifest::new("rel-coeffs", a, inputs))
        }
        Command::RelTable(a) => {
            let (gas, inputs) = rel_gas(a.gas.as_deref())?;
            gas.validate()?;
            let csv = table_csv(&table_rows(&gas)?);
            emit(a.out.as_deref(), &csv, CommandManifest::new("rel-table", a, inputs))
        }
        Command::ProbeJunk(a) => {
            let mut inputs = vec![];
            let path = match &a.path {
                Some(p) => {
                    let (text, d) = read(p)?;
                    inputs.push(d);
                    parse_junk_path(&text)?
                }
                None => JunkPath::documented(),
            };
            if !(a.resolution > 0.0) {
                return Err(Error::InvalidInput("resolution must be positive".into()));
            }
            let gas = GasModel::default();
            let quad = adapt_quadrature(&path.start, a.order, &gas)?;
            let rep = realizability_probe_1d(&path, a.steps, &gas, &quad, a.resolution)?;
            let mut m = CommandManifest::new("probe-junk", a, inputs);
            m.extra = Some(serde_json::json!({
                "start": path.start.values,
                "end": path.end.values,
                "last_realizable": rep.last_realizable,
                "first_failure": rep.first_failure,
                "boundary": rep.boundary,
                "resolution": rep.resolution,
                "monotone": rep.monotone,
                "min_hankel_det": rep.min_hankel_det,
            }));
            emit(a.out.as_deref(), &rep.to_csv(), m)
        }
        Command::Simulate(a) => simulate(a),
    }
}

fn rel_gas(path: Option<&Path>) -> Result<(RelGas, Vec<FileDigest>)> {
    match path {
        Some(p) => {
            let (text, d) = read(p)?;
            Ok((serde_json::from_str(&text)?, vec![d]))
        }
        None => Ok((RelGas::default(), vec![])),
    }
}

fn parse_junk_path(text: &str) -> Result<JunkPath> {
    #[derive(serde::Deserialize)]
    struct Spec {
        start: Vec<f64>,
        end: Vec<f64>,
    }
    let s: Spec = serde_json::from_str(text)?;
    let b = MomentBasis::line(4);
    Ok(JunkPath {
        start: MomentVector::new(b.clone(), s.start)?,
        end: MomentVector::new(b, s.end)?,
    })
}

fn simulate(a: &SimulateArgs) -> Result<()> {
    let (text, digest) = read(&a.config)?;
    let cfg: SimConfig = serde_json::from_str(&text)?;
    let res = run(&cfg)?;
    let closure = SimClosure::new(cfg.closure, &cfg.gas())?;
    std::fs::create_dir_all(&a.out_dir).map_err(|e| Error::Io(format!("{}: {e}", a.out_dir.display())))?;
    let mut m = CommandManifest::new("simulate", a, vec![digest]);
    let mut files = Vec::new();
    for (k, snap) in res.snapshots.iter().enumerate() {
        let p = a.out_dir.join(format!("snapshot_{k:04}.csv"));
        let data = snapshot_csv(&cfg, &closure, snap)?;
        write_file(&p, &data)?;
        m.outputs.push(FileDigest::of(&p, data.as_bytes()));
        files.push(serde_json::json!({"time": snap.time, "file": p.file_name().map(|f| f.to_string_lossy())}));
    }
    if !res.entropy.is_empty() {
        let p = a.out_dir.join("entropy.csv");
        let mut data = String::from("step,total_entropy\n");
        for (k, h) in res.entropy.iter().enumerate() {
            data.push_str(&format!("{k},{}\n", fmt_num(*h)));
        }
        write_file(&p, &data)?;
        m.outputs.push(FileDigest::of(&p, data.as_bytes()));
    }
    m.extra = Some(serde_json::json!({
        "config": cfg,
        "steps": res.steps,
        "snapshots": files,
        "ledger": res.ledger,
        "interventions": res.interventions,
    }));
    let p = a.out_dir.join("manifest.json");
    write_file(&p, &json(&m)?)
}
