//! The `conic-bundle` command.
//!
//! Every subcommand reads one TOML run configuration (see [`crate::config`]) and
//! prints a JSON envelope to stdout:
//!
//! ```json
//! {"engine_version": "0.1.0", "config_sha256": "…", "command": "density", "result": {…}}
//! ```
//!
//! The same envelope is written to `[output] json` when set. `count` and `probe`
//! also write the per-fibre CSV to `[output] csv`: a `bound,y,count` header, then
//! one row per bound and fibre, with y written as its coordinates joined by `:`.
//! Exact integers and fractions are decimal strings; floats carry 12 significant
//! digits.
//!
//! Failures print `{"error": {"kind": …, "message": …}}` to stderr and exit with
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 2 | bad input: config syntax or semantics, preconditions, overflow, I/O |
//! | 3 | a quadrature missed its tolerance |
//! | 4 | an internal consistency check failed |

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bundle::import_cubic_with_line;
use crate::census::{
    asymptotic_probe, bt_probe, count_grid, geometric_grid, northcott_probe, peyre_sum, sha256_hex, CensusReport,
    Metadata,
};
use crate::config::{load_config, surface_spec, ModelSpec, RunConfig};
use crate::conics::{count_fibre, Strategy};
use crate::heights::{HeightModel, Regime};
use crate::localdata::{fibre_report, sigma_p_form, DEFAULT_TOL};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_TOLERANCE: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "conic-bundle",
    version,
    about = "Rational points of bounded height on conic bundle surfaces"
)]
pub struct Cli {
    /// Upper bound on worker threads.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the surface and height model.
    Validate { config: PathBuf },
    /// N(U, H*, B) for `run.bound` or every bound of `run.grid`.
    Count { config: PathBuf },
    /// Class, local data and point count of the fibre over `run.y`.
    Fibre { config: PathBuf },
    /// σ_p, σ_∞ and τ of the fibre over `run.y`; `run.p` adds one more prime.
    Density { config: PathBuf },
    /// Σ c_y over H(y) ≤ `run.t`.
    PeyreSum { config: PathBuf },
    /// Counts on a grid of bounds against the Peyre sum.
    Probe { config: PathBuf },
    /// τ(X_t)·t^{2+α} on the family x₀² + x₁² = t·x₂², t ≤ `run.t_max`.
    BtProbe { config: PathBuf },
    /// Heights of a fixed section when α is large.
    NorthcottProbe { config: PathBuf },
    /// Turn the `[cubic]` section into a surface configuration.
    ImportCubic {
        config: PathBuf,
        /// Write the generated configuration here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Count { .. } => "count",
            Command::Fibre { .. } => "fibre",
            Command::Density { .. } => "density",
            Command::PeyreSum { .. } => "peyre-sum",
            Command::Probe { .. } => "probe",
            Command::BtProbe { .. } => "bt-probe",
            Command::NorthcottProbe { .. } => "northcott-probe",
            Command::ImportCubic { .. } => "import-cubic",
        }
    }

    pub fn config(&self) -> &Path {
        match self {
            Command::Validate { config }
            | Command::Count { config }
            | Command::Fibre { config }
            | Command::Density { config }
            | Command::PeyreSum { config }
            | Command::Probe { config }
            | Command::BtProbe { config }
            | Command::NorthcottProbe { config }
            | Command::ImportCubic { config, .. } => config,
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ToleranceNotMet { .. } => EXIT_TOLERANCE,
        Error::Internal(_) => EXIT_INTERNAL,
        _ => EXIT_INPUT,
    }
}

pub fn error_record(e: &Error) -> Value {
    let mut err = json!({ "kind": e.kind(), "message": e.to_string() });
    if let Error::ConfigSyntax { line, column, .. } = e {
        err["line"] = json!(line);
        err["column"] = json!(column);
    }
    json!({ "error": err })
}

/// What a command produced: the JSON result and, for counts, the CSV.
#[derive(Clone, Debug)]
pub struct Output {
    pub command: &'static str,
    pub config_sha256: String,
    pub result: Value,
    pub csv: Option<String>,
}

impl Output {
    pub fn envelope(&self) -> Value {
        json!({
            "engine_version": crate::ENGINE_VERSION,
            "config_sha256": self.config_sha256,
            "command": self.command,
            "result": self.result,
        })
    }
}

fn to_value<T: Serialize>(v: &T) -> Result<Value, Error> {
    serde_json::to_value(v).map_err(|e| Error::Internal(format!("serialization: {e}")))
}

fn need<T>(v: Option<T>, key: &str) -> Result<T, Error> {
    v.ok_or_else(|| Error::ConfigSemantic(format!("this command needs run.{key}")))
}

fn form_strings(form: &crate::conics::TernaryForm) -> Vec<Vec<String>> {
    form.gram()
        .iter()
        .map(|row| row.iter().map(BigInt::to_string).collect())
        .collect()
}

/// Runs one command on a parsed configuration.
pub fn run(command: &Command, cfg: &RunConfig, config_text: &str) -> Result<Output, Error> {
    let tol = cfg.run.tol.unwrap_or(DEFAULT_TOL);
    let strategy = cfg.run.strategy.unwrap_or(Strategy::Parametrized);
    let mut csv = None;
    let result = match command {
        Command::Validate { .. } => {
            let s = cfg.require_surface()?;
            let m = cfg.model(&s)?;
            let report = s.validate();
            json!({
                "surface": s.to_string(),
                "checks": to_value(&report.checks)?,
                "discriminant": report.discriminant,
                "alpha": m.alpha().to_string(),
                "big_a": m.big_a().to_string(),
                "regime": to_value(&m.regime())?,
                "threshold": HeightModel::threshold_for(&s, m.regime()).to_string(),
            })
        }
        Command::Count { .. } => {
            let s = cfg.require_surface()?;
            let m = cfg.model(&s)?;
            let bounds = match (cfg.grid()?, cfg.bound()?) {
                (Some(g), _) => g,
                (None, Some(b)) => vec![b],
                (None, None) => return Err(Error::ConfigSemantic("count needs run.bound or run.grid".into())),
            };
            let grid = count_grid(&s, &m, &bounds, strategy, &cfg.exclude()?)?;
            let report = CensusReport::new(Metadata::new(&s, &m, strategy), &grid, None);
            csv = Some(report.to_csv());
            to_value(&report)?
        }
        Command::Fibre { .. } => {
            let s = cfg.require_surface()?;
            let m = cfg.model(&s)?;
            let y = need(cfg.y()?, "y")?;
            let class = s.fibre_class(&y)?;
            let mut out = json!({
                "y": y.key(),
                "gram": form_strings(&class.form),
                "disc": class.disc.to_string(),
                "minors_gcd": class.minors_gcd.to_string(),
                "singular": !class.form.is_nondegenerate(),
            });
            if class.form.is_nondegenerate() {
                out["local"] = to_value(&fibre_report(&s, &m, &y, tol)?)?;
                if let Some(b) = cfg.bound()? {
                    out["bound"] = json!(b.to_string());
                    out["count"] = json!(count_fibre(&s, &m, &y, &b, strategy)?.to_string());
                }
            }
            out
        }
        Command::Density { .. } => {
            let s = cfg.require_surface()?;
            let m = cfg.model(&s)?;
            let y = need(cfg.y()?, "y")?;
            let report = fibre_report(&s, &m, &y, tol)?;
            let mut out = to_value(&report)?;
            if let Some(p) = cfg.run.p {
                let form = s.fibre_form(&y)?;
                let method = cfg.run.sigma_method.unwrap_or_default();
                out["p"] = json!(p);
                out["sigma_at_p"] = json!(sigma_p_form(&form, p, method)?.to_string());
            }
            out
        }
        Command::PeyreSum { .. } => {
            let s = cfg.require_surface()?;
            let m = cfg.model(&s)?;
            to_value(&peyre_sum(&s, &m, need(cfg.run.t, "t")?, tol)?)?
        }
        Command::Probe { .. } => {
            let s = cfg.require_surface()?;
            let m = cfg.model(&s)?;
            let grid = cfg.grid()?.unwrap_or_else(|| geometric_grid(10_000, 1_000_000, 2));
            let probe = asymptotic_probe(&s, &m, &grid, strategy, tol)?;
            let report = CensusReport::new(Metadata::new(&s, &m, strategy), &probe.grid, Some(&probe.peyre));
            csv = Some(report.to_csv());
            json!({ "probe": to_value(&probe)?, "census": to_value(&report)? })
        }
        Command::BtProbe { .. } => {
            let alpha = cfg.alpha()?;
            to_value(&bt_probe(
                &alpha,
                cfg.run.t_max.unwrap_or(200),
                cfg.run.count.unwrap_or(6),
                tol,
            )?)?
        }
        Command::NorthcottProbe { .. } => to_value(&northcott_probe(
            cfg.run.a.unwrap_or(12),
            cfg.run.count.unwrap_or(200),
            None,
        )?)?,
        Command::ImportCubic { out, .. } => {
            let (f, p, q) = need_cubic(cfg)?;
            let surface = import_cubic_with_line(&f, &p, &q)?;
            let report = surface.validate();
            // smallest integer α above the threshold of the natural regime
            let regime = if surface.n() == 1 {
                Regime::Curve
            } else {
                Regime::General
            };
            let threshold = HeightModel::threshold_for(&surface, regime);
            let alpha = threshold.floor() + BigRational::from_integer(1.into());
            let generated = RunConfig {
                surface: Some(surface_spec(&surface)),
                model: Some(ModelSpec {
                    alpha: alpha.to_string(),
                    regime: None,
                }),
                ..Default::default()
            };
            let text = generated.to_toml();
            if let Some(path) = out {
                std::fs::write(path, &text)?;
            }
            json!({
                "surface": surface.to_string(),
                "checks": to_value(&report.checks)?,
                "discriminant": report.discriminant,
                "config": text,
            })
        }
    };
    Ok(Output {
        command: command.name(),
        config_sha256: sha256_hex(config_text.as_bytes()),
        result,
        csv,
    })
}

fn need_cubic(
    cfg: &RunConfig,
) -> Result<
    (
        crate::bundle::MultiPoly,
        crate::projgeo::ProjPoint,
        crate::projgeo::ProjPoint,
    ),
    Error,
> {
    cfg.cubic()?
        .ok_or_else(|| Error::ConfigSemantic("import-cubic needs a [cubic] section".into()))
}

fn write_artifacts(cfg: &RunConfig, out: &Output) -> Result<(), Error> {
    if let Some(path) = &cfg.output.json {
        let text = serde_json::to_string_pretty(&out.envelope()).map_err(|e| Error::Internal(e.to_string()))?;
        std::fs::write(path, text + "\n")?;
    }
    if let (Some(path), Some(csv)) = (&cfg.output.csv, &out.csv) {
        std::fs::write(path, csv)?;
    }
    Ok(())
}

/// Loads the configuration, runs the command and writes its artifacts.
pub fn execute(command: &Command) -> Result<Output, Error> {
    let (cfg, text) = load_config(command.config())?;
    let out = run(command, &cfg, &text)?;
    write_artifacts(&cfg, &out)?;
    Ok(out)
}

/// Entry point of the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!(
                "{}",
                json!({ "error": { "kind": "internal", "message": e.to_string() } })
            );
            return EXIT_INTERNAL;
        }
    }
    match execute(&cli.command) {
        Ok(out) => {
            println!("{}", serde_json::to_string_pretty(&out.envelope()).expect("json"));
            EXIT_OK
        }
        Err(e) => {
            eprintln!("{}", error_record(&e));
            exit_code(&e)
        }
    }
}
