//! Subcommand definitions and their in-process implementations.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use ctxdim_core::canonical::{canonical_cglmp4_optimal_setup, canonical_cglmp4_separable_setup, canonical_chsh_setup};
use ctxdim_core::functional::by_name;
use ctxdim_core::{behavior_from, certify, BoundsRegistry, InequalityFunctional, ProbabilitySource};
use ctxdim_photonics::setup::{ResolvedSetup, SetupFile};
use ctxdim_photonics::monte_carlo;
use ctxdim_seesaw::{run, OperatorDoc, SeesawConfig};

use crate::behavior_file::{IngestError, ProbabilityTableFile, TableFormat, MEASURED_TOLERANCE};
use crate::chsh_terms::{ChshTerms, CHSH_TERMS_FORMAT};
use crate::error::{CliError, Result, EXIT_OK};
use crate::io::{read_input, write_atomic};
use crate::report::{bounds_text, CertificationReport, InputDigest, MonteCarloReport, CANONICAL_FORMAT, MONTE_CARLO_FORMAT, TOOL_VERSION};

#[derive(Debug, Parser)]
#[command(name = "ctxdim", version, about = "Contextuality witnesses and dimension certification for prepare-and-measure data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the bound registry of a functional with provenance.
    Bounds { functional: String },
    /// Certify a dimension from a behavior or CHSH-term file.
    Certify(CertifyArgs),
    /// Write a reference assemblage and measurements with their functional value.
    Canonical {
        #[arg(long, value_enum)]
        setup: CanonicalSetup,
        #[arg(long)]
        emit: PathBuf,
    },
    /// Restarted see-saw optimization of the CGLMP4 functional.
    Seesaw(SeesawArgs),
    /// Predict the behavior of an optical setup.
    Simulate {
        #[arg(long)]
        setup: PathBuf,
        /// Behavior file to write; printed when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Propagate plate and counting noise through an optical setup.
    Montecarlo {
        #[arg(long)]
        setup: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Report to write; printed when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    pub file: PathBuf,
    #[arg(long, default_value = "cglmp4")]
    pub functional: String,
    #[arg(long = "stderr")]
    pub std_error: f64,
    #[arg(long = "k", default_value_t = 1.0)]
    pub k_sigma: f64,
    /// Read entries as joint probabilities whatever the header says.
    #[arg(long)]
    pub joint: bool,
    /// Normalization and no-signaling slack.
    #[arg(long, default_value_t = MEASURED_TOLERANCE)]
    pub tolerance: f64,
    /// Structured report; defaults to `<file>.certification.json`.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Seconds since the epoch to record instead of the current time.
    #[arg(long)]
    pub timestamp: Option<u64>,
    /// Parse and ingest only, exiting 0.
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Args)]
pub struct SeesawArgs {
    #[arg(long)]
    pub ppt: bool,
    #[arg(long, default_value_t = 50)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 500)]
    pub max_alternations: usize,
    /// Directory receiving `run.json`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CanonicalSetup {
    Optimal,
    Separable,
    Chsh,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CanonicalDoc {
    pub format: String,
    pub setup: CanonicalSetup,
    pub functional: String,
    pub value: f64,
    /// `assemblage[x][a]`
    pub assemblage: Vec<Vec<OperatorDoc>>,
    /// `povms[y][b]`
    pub povms: Vec<Vec<OperatorDoc>>,
}

/// Functional value with CHSH taken in absolute form.
pub fn functional_value<S: ProbabilitySource + ?Sized>(f: &InequalityFunctional, src: &S) -> ctxdim_core::Result<f64> {
    let v = f.evaluate(src)?;
    Ok(if f.name() == "chsh" { v.abs() } else { v })
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn ingest_error(path: &Path, e: IngestError) -> CliError {
    CliError::Input(format!("{}: {e}", path.display()))
}

fn photonics_error(path: &Path, e: ctxdim_photonics::Error) -> CliError {
    use ctxdim_photonics::Error as E;
    match e {
        E::Parse { line, message } => CliError::Malformed { path: path.to_path_buf(), line, message },
        E::Setup(_) | E::Shape { .. } | E::TooFewSamples(_) => CliError::Input(format!("{}: {e}", path.display())),
        E::Fit(_) | E::Core(_) => CliError::numerical(e),
    }
}

fn is_chsh_terms(text: &str) -> bool {
    text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).find(|l| !l.is_empty()) == Some(CHSH_TERMS_FORMAT)
}

fn now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

fn load_setup(path: &Path) -> Result<(ResolvedSetup, InputDigest)> {
    let (text, sha256) = read_input(path)?;
    let resolved = SetupFile::parse(&text).and_then(|f| f.resolve()).map_err(|e| photonics_error(path, e))?;
    Ok((resolved, InputDigest { path: path.display().to_string(), sha256 }))
}

pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let registry = BoundsRegistry::standard();
    let io = |e: std::io::Error| CliError::Io { path: PathBuf::from("<stdout>"), source: e };
    match &cli.command {
        Command::Bounds { functional } => {
            let text = bounds_text(&registry, functional).map_err(|e| CliError::Input(e.to_string()))?;
            out.write_all(text.as_bytes()).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Certify(args) => certify_command(&registry, args, out, err),
        Command::Canonical { setup, emit } => {
            let (name, built) = match setup {
                CanonicalSetup::Optimal => ("cglmp4", canonical_cglmp4_optimal_setup()),
                CanonicalSetup::Separable => ("cglmp4", canonical_cglmp4_separable_setup()),
                CanonicalSetup::Chsh => ("chsh", canonical_chsh_setup()),
            };
            let f = by_name(name).map_err(CliError::numerical)?;
            let (ass, povms) = built.map_err(CliError::numerical)?;
            let value = functional_value(&f, &behavior_from(&ass, &povms).map_err(CliError::numerical)?).map_err(CliError::numerical)?;
            let doc = CanonicalDoc {
                format: CANONICAL_FORMAT.to_string(),
                setup: *setup,
                functional: name.to_string(),
                value,
                assemblage: ass.sigmas().iter().map(|row| row.iter().map(|s| OperatorDoc::from_matrix(s.matrix())).collect()).collect(),
                povms: povms.iter().map(|p| p.effects().iter().map(|e| OperatorDoc::from_matrix(e.matrix())).collect()).collect(),
            };
            write_atomic(emit, json(&doc).as_bytes())?;
            writeln!(out, "{name} = {value:.10}").map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Seesaw(args) => {
            let config = SeesawConfig {
                restarts: args.restarts,
                master_seed: args.seed,
                max_alternations: args.max_alternations,
                ..SeesawConfig::default()
            };
            let result = run(&config, args.ppt).map_err(|e| match e {
                ctxdim_seesaw::Error::Config(m) => CliError::Input(m),
                other => CliError::numerical(other),
            })?;
            let doc = result.to_doc(args.ppt);
            fs::create_dir_all(&args.out).map_err(|source| CliError::Io { path: args.out.clone(), source })?;
            write_atomic(&args.out.join("run.json"), json(&doc).as_bytes())?;
            writeln!(out, "best {:.10} (restart {}, ppt {})", doc.best_value, doc.best_restart, doc.ppt).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Simulate { setup, out: target } => {
            let (resolved, digest) = load_setup(setup)?;
            for w in &resolved.warnings {
                writeln!(err, "warning: {w}").map_err(io)?;
            }
            let behavior = resolved.layout.behavior().map_err(CliError::numerical)?;
            let value = functional_value(&resolved.functional, &behavior).map_err(CliError::numerical)?;
            let mut file = ProbabilityTableFile::joint(&behavior);
            file.metadata.insert("setup-sha256".into(), digest.sha256);
            file.metadata.insert(resolved.functional.name().to_string(), value.to_string());
            match target {
                Some(path) => {
                    write_atomic(path, file.to_text().as_bytes())?;
                    writeln!(out, "{} = {value:.10}", resolved.functional.name()).map_err(io)?;
                }
                None => out.write_all(file.to_text().as_bytes()).map_err(io)?,
            }
            Ok(EXIT_OK)
        }
        Command::Montecarlo { setup, samples, seed, out: target } => {
            let (resolved, input) = load_setup(setup)?;
            for w in &resolved.warnings {
                writeln!(err, "warning: {w}").map_err(io)?;
            }
            let summary = monte_carlo(&resolved.layout, &resolved.functional, &resolved.noise, *samples, *seed)
                .map_err(|e| photonics_error(setup, e))?;
            let report = MonteCarloReport { format: MONTE_CARLO_FORMAT.to_string(), tool_version: TOOL_VERSION.to_string(), input, summary };
            let text = json(&report);
            match target {
                Some(path) => {
                    write_atomic(path, text.as_bytes())?;
                    let s = &report.summary;
                    writeln!(out, "{} mean {:.6} std {:.6} noiseless {:.6} ({} samples)", s.functional, s.mean, s.std, s.noiseless, s.samples).map_err(io)?;
                }
                None => out.write_all(text.as_bytes()).map_err(io)?,
            }
            Ok(EXIT_OK)
        }
    }
}

fn certify_command(registry: &BoundsRegistry, args: &CertifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let io = |e: std::io::Error| CliError::Io { path: PathBuf::from("<stdout>"), source: e };
    if !(args.std_error.is_finite() && args.std_error >= 0.0) || !(args.k_sigma.is_finite() && args.k_sigma >= 0.0) {
        return Err(CliError::Input("--stderr and --k must be finite and non-negative".into()));
    }
    let path = &args.file;
    let (text, sha256) = read_input(path)?;
    let value = if is_chsh_terms(&text) {
        if args.functional != "chsh" {
            return Err(CliError::Input(format!("{}: CHSH terms can only be certified with --functional chsh", path.display())));
        }
        let terms = ChshTerms::parse(&text).map_err(|e| e.in_file(path))?;
        for (m, p, s) in terms.sign_mismatches() {
            writeln!(err, "warning: term {m} {p} {} has the opposite sign to the pattern", if s { '+' } else { '-' }).map_err(io)?;
        }
        terms.value()
    } else {
        let file = ProbabilityTableFile::parse(&text).map_err(|e| e.in_file(path))?;
        let format = if args.joint { TableFormat::Joint } else { file.format };
        let behavior = file.ingest_as(format, args.tolerance).map_err(|e| ingest_error(path, e))?;
        let f = by_name(&args.functional).map_err(|e| CliError::Input(e.to_string()))?;
        functional_value(&f, &behavior).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?
    };
    if args.check {
        writeln!(out, "parsed {}: {} = {value:.6}", path.display(), args.functional).map_err(io)?;
        return Ok(EXIT_OK);
    }
    let verdict = certify(registry, &args.functional, value, args.std_error, args.k_sigma).map_err(|e| CliError::Input(e.to_string()))?;
    let input = InputDigest { path: path.display().to_string(), sha256 };
    let report = CertificationReport::new(&verdict, input, args.timestamp.unwrap_or_else(now));
    let target = args.report.clone().unwrap_or_else(|| {
        let mut name = path.as_os_str().to_owned();
        name.push(".certification.json");
        PathBuf::from(name)
    });
    write_atomic(&target, json(&report).as_bytes())?;
    out.write_all(report.to_text().as_bytes()).map_err(io)?;
    Ok(report.exit_code)
}
