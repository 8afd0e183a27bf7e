//! Command-line front end. `main.rs` only forwards to [`parse_and_dispatch`].
//!
//! Exit codes: 0 success, 2 usage or config error, 3 I/O error, 4 numerical
//! failure.

use std::ffi::OsString;
use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bandit::Schedule;
use crate::confidence::{bootstrap_cvar_ci, delta_method_ci, ConfidenceInterval};
use crate::config;
use crate::empirical::{sample_cvar, Sample};
use crate::error::{Error, Result};
use crate::estimate::{CvarEstimate, Method};
use crate::evt_estimator::estimate_evt_cvar_with_selection;
use crate::experiments::{
    run_bandit_testbed, run_single_arm, write_metrics, write_metrics_csv, ExperimentConfig, ExperimentKind,
    MetricRow,
};
use crate::rng::RngStream;
use crate::threshold_select::{select_threshold, ThresholdConfig};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_IO: u8 = 3;
pub const EXIT_NUMERIC: u8 = 4;

/// Environment variable supplying the default worker count.
pub const WORKERS_ENV: &str = "EVT_CVAR_WORKERS";

#[derive(Debug, Parser)]
#[command(name = "evt-cvar", version, about = "CVaR estimation for heavy-tailed costs: sample average vs. GPD tail fit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Estimate CVaR of the values in a file by both methods.
    Estimate(EstimateArgs),
    /// Print per-candidate threshold diagnostics as CSV.
    DiagnoseThreshold(DiagnoseArgs),
    /// Run the single-arm estimation study.
    SingleArm(ExperimentArgs),
    /// Run the multi-armed bandit testbed.
    Bandit(ExperimentArgs),
    /// List the named experiment presets.
    Presets(PresetsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CiChoice {
    Bootstrap,
    Delta,
    Both,
}

#[derive(Debug, Args)]
struct SelectionArgs {
    /// CVaR level.
    #[arg(long, default_value_t = 0.999)]
    alpha: f64,
    /// Number of candidate thresholds.
    #[arg(long, default_value_t = 50)]
    candidates: usize,
    /// ForwardStop level.
    #[arg(long, default_value_t = 0.1)]
    gamma: f64,
}

impl SelectionArgs {
    fn check(&self) -> Result<ThresholdConfig> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Config(format!("--alpha must be in (0, 1), got {}", self.alpha)));
        }
        if self.candidates < 2 {
            return Err(Error::Config("--candidates must be at least 2".into()));
        }
        if !(self.gamma > 0.0) {
            return Err(Error::Config("--gamma must be positive".into()));
        }
        Ok(ThresholdConfig {
            candidates: self.candidates,
            gamma: self.gamma,
        })
    }
}

#[derive(Debug, Args)]
struct EstimateArgs {
    /// Newline-delimited values; blank lines and `#` comments are skipped.
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    selection: SelectionArgs,
    /// Confidence interval: bootstrap for SA, delta method for EVT.
    #[arg(long, value_enum)]
    ci: Option<CiChoice>,
    /// Confidence level of the interval.
    #[arg(long, default_value_t = 0.9)]
    level: f64,
    /// Bootstrap resamples.
    #[arg(long = "boot-M", alias = "boot-m", default_value_t = 1000)]
    boot_m: usize,
    /// Seed of the bootstrap stream.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct DiagnoseArgs {
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    selection: SelectionArgs,
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    /// JSON config file.
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Named preset (see `presets`).
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Independent runs M.
    #[arg(long)]
    runs: Option<usize>,
    /// Stages n per run.
    #[arg(long)]
    stages: Option<usize>,
    #[arg(long)]
    candidates: Option<usize>,
    #[arg(long)]
    gamma: Option<f64>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads.
    #[arg(long, env = WORKERS_ENV)]
    workers: Option<usize>,
    /// Record every stage up to this one...
    #[arg(long)]
    stride_dense: Option<usize>,
    /// ...then every this many stages.
    #[arg(long)]
    stride_every: Option<usize>,
    /// Exploration schedule as `until:eps,...`, e.g. `1000:1,5000:0.1`.
    #[arg(long)]
    schedule: Option<String>,
    /// Metrics CSV (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the effective config to this file before running.
    #[arg(long)]
    dump_config: Option<PathBuf>,
    /// No progress output.
    #[arg(long, short)]
    quiet: bool,
}

#[derive(Debug, Args)]
struct PresetsArgs {
    /// Print the full config of one preset as JSON.
    #[arg(long)]
    show: Option<String>,
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// exit code.
pub fn parse_and_dispatch<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::InvalidParameter(_) => EXIT_CONFIG,
        Error::Io { .. } | Error::Csv { .. } => EXIT_IO,
        _ => EXIT_NUMERIC,
    }
}

fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::Estimate(a) => estimate(a),
        Command::DiagnoseThreshold(a) => diagnose(a),
        Command::SingleArm(a) => experiment(a, ExperimentKind::SingleArm),
        Command::Bandit(a) => experiment(a, ExperimentKind::Bandit),
        Command::Presets(a) => list_presets(a),
    }
}

/// Reads newline-delimited values.
pub fn read_values(path: &Path) -> Result<Sample> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: f64 = line
            .parse()
            .map_err(|_| Error::Config(format!("{}:{}: not a number: {line:?}", path.display(), i + 1)))?;
        values.push(v);
    }
    Sample::from_values(values).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct EstimateReport {
    n: usize,
    alpha: f64,
    sa: CvarEstimate,
    evt: CvarEstimate,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    notes: Vec<String>,
}

fn estimate(a: EstimateArgs) -> Result<()> {
    let threshold = a.selection.check()?;
    let alpha = a.selection.alpha;
    if a.ci.is_some() && !(a.level > 0.0 && a.level < 1.0) {
        return Err(Error::Config(format!("--level must be in (0, 1), got {}", a.level)));
    }
    let sample = read_values(&a.input)?;
    let mut sa = sample_cvar(&sample, alpha)?;
    let (mut evt, selection) = estimate_evt_cvar_with_selection(&sample, alpha, &threshold)?;
    let mut notes = Vec::new();

    if matches!(a.ci, Some(CiChoice::Bootstrap | CiChoice::Both)) {
        let mut rng = RngStream::new(a.seed, 0);
        sa = sa.with_ci(bootstrap_cvar_ci(&sample, alpha, a.level, a.boot_m, &mut rng)?);
    }
    if matches!(a.ci, Some(CiChoice::Delta | CiChoice::Both)) {
        match (&evt.fit, evt.threshold, &selection) {
            (Some(fit), Some(u), Some(_)) if evt.method == Method::Evt => {
                let sorted = sample.sorted();
                let excesses: Vec<f64> = sorted[sorted.partition_point(|&v| v <= u)..]
                    .iter()
                    .map(|&y| y - u)
                    .collect();
                match delta_method_ci(fit, u, evt.quantile, &excesses, a.level) {
                    Ok(ci) => evt = evt.with_ci(ci),
                    Err(e) => notes.push(format!("EVT interval: {e}")),
                }
            }
            _ => notes.push("EVT interval: no GPD fit (estimate fell back to SA)".into()),
        }
    }
    if selection.as_ref().is_some_and(|s| s.low_confidence) {
        notes.push("every surviving threshold was rejected; the highest one was used".into());
    }

    let report = EstimateReport {
        n: sample.len(),
        alpha,
        sa,
        evt,
        notes,
    };
    let mut out = std::io::stdout().lock();
    let w = |r: std::io::Result<()>| r.map_err(|e| Error::io("<stdout>", e));
    if a.json {
        w(writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("report serializes")))?;
        return Ok(());
    }
    w(writeln!(out, "n = {}, alpha = {}", report.n, report.alpha))?;
    for e in [&report.sa, &report.evt] {
        w(writeln!(out, "{}", describe(e)))?;
    }
    for n in &report.notes {
        w(writeln!(out, "note: {n}"))?;
    }
    Ok(())
}

fn describe(e: &CvarEstimate) -> String {
    let mut s = format!("{:<16} CVaR = {:.6}  VaR = {:.6}", e.method.to_string(), e.value, e.quantile);
    if let (Some(u), Some(f)) = (e.threshold, &e.fit) {
        s += &format!(
            "  u = {u:.6}  xi = {:.4}  sigma = {:.4}  excesses = {}",
            f.xi_hat, f.sigma_hat, f.n_excesses
        );
    }
    if let Some(ci) = &e.ci {
        s += &format!("\n{:<16} {}", "", describe_ci(ci));
    }
    s
}

fn describe_ci(ci: &ConfidenceInterval) -> String {
    format!(
        "{:.0}% {:?} interval [{:.6}, {:.6}]",
        ci.level * 100.0,
        ci.method,
        ci.lo,
        ci.hi
    )
}

fn diagnose(a: DiagnoseArgs) -> Result<()> {
    let threshold = a.selection.check()?;
    let sample = read_values(&a.input)?;
    let selection = select_threshold(&sample, a.selection.alpha, &threshold)?;
    match &a.out {
        Some(path) => {
            let f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
            selection.write_csv(std::io::BufWriter::new(f)).map_err(|source| Error::Csv {
                path: path.clone(),
                source,
            })
        }
        None => selection.write_csv(std::io::stdout().lock()).map_err(|source| Error::Csv {
            path: "<stdout>".into(),
            source,
        }),
    }
}

/// Parses `until:eps,until:eps,...`.
pub fn parse_schedule(text: &str) -> Result<Schedule> {
    let bad = || Error::Config(format!("malformed schedule {text:?}; expected e.g. 1000:1,5000:0.1"));
    let segments = text
        .split(',')
        .map(|seg| {
            let (until, eps) = seg.trim().split_once(':').ok_or_else(bad)?;
            Ok((
                until.trim().parse().map_err(|_| bad())?,
                eps.trim().parse().map_err(|_| bad())?,
            ))
        })
        .collect::<Result<Vec<(usize, f64)>>>()?;
    Schedule::new(segments).map_err(|e| Error::Config(e.to_string()))
}

fn effective_config(a: &ExperimentArgs, kind: ExperimentKind) -> Result<ExperimentConfig> {
    let mut cfg = match (&a.config, &a.preset) {
        (Some(path), _) => config::load(path)?,
        (None, Some(name)) => config::preset(name)?,
        (None, None) => return Err(Error::Config("give --config FILE or --preset NAME".into())),
    };
    if cfg.kind != kind {
        return Err(Error::Config(format!(
            "config describes a {:?} experiment, not {kind:?}",
            cfg.kind
        )));
    }
    if let Some(v) = a.alpha {
        cfg.alpha = v;
    }
    if let Some(v) = a.runs {
        cfg.runs = v;
    }
    if let Some(v) = a.stages {
        cfg.stages = v;
    }
    if let Some(v) = a.candidates {
        cfg.candidates = v;
    }
    if let Some(v) = a.gamma {
        cfg.gamma = v;
    }
    if let Some(v) = a.seed {
        cfg.seed = v;
    }
    if let Some(v) = a.workers {
        cfg.workers = Some(v);
    }
    if let Some(v) = a.stride_dense {
        cfg.stride.dense_until = v;
    }
    if let Some(v) = a.stride_every {
        cfg.stride.every = v;
    }
    if let Some(s) = &a.schedule {
        cfg.schedule = Some(parse_schedule(s)?);
    }
    if let Some(p) = &a.out {
        cfg.output = Some(p.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn experiment(a: ExperimentArgs, kind: ExperimentKind) -> Result<()> {
    let cfg = effective_config(&a, kind)?;
    if let Some(path) = &a.dump_config {
        config::save(&cfg, path)?;
    }
    let quiet = a.quiet;
    let label = match kind {
        ExperimentKind::SingleArm => "single-arm",
        ExperimentKind::Bandit => "bandit",
    };
    let tty = std::io::stderr().is_terminal();
    let tick = move |done: usize, total: usize| {
        if quiet {
            return;
        }
        if tty {
            eprint!("\r{label}: run {done}/{total}");
            if done == total {
                eprintln!();
            }
        } else if done == total || done.is_multiple_of((total / 10).max(1)) {
            eprintln!("{label}: run {done}/{total}");
        }
    };
    match kind {
        ExperimentKind::SingleArm => emit(&run_single_arm(&cfg, Some(&tick))?, cfg.output.as_deref()),
        ExperimentKind::Bandit => emit(&run_bandit_testbed(&cfg, Some(&tick))?, cfg.output.as_deref()),
    }
}

fn emit<R: MetricRow>(rows: &[R], out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => write_metrics_csv(rows, path),
        None => write_metrics(rows, std::io::stdout().lock()).map_err(|source| Error::Csv {
            path: "<stdout>".into(),
            source,
        }),
    }
}

fn list_presets(a: PresetsArgs) -> Result<()> {
    let mut out = std::io::stdout().lock();
    let w = |r: std::io::Result<()>| r.map_err(|e| Error::io("<stdout>", e));
    if let Some(name) = a.show {
        w(writeln!(out, "{}", config::to_json(&config::preset(&name)?)))?;
        return Ok(());
    }
    for p in config::presets() {
        w(writeln!(out, "{:<6}  {}", p.name, p.description))?;
    }
    Ok(())
}
