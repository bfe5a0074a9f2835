//! `uavsec-lab`: validation runs and parameter sweeps for the aerial relay
//! model.
//!
//! Exit status is 0 on success, 1 when a validation misses its tolerance (or
//! a run fails for a non-configuration reason) and 2 on configuration errors.

mod config;
mod output;
mod sweep;
mod validate;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand, ValueEnum};
use uavsec::checks::specfun_report_with;
use uavsec::specfun::SeriesForm;

use config::{parse_truncation, BaselineName, ExperimentConfig, Overrides};

/// A configuration problem: bad file, bad key, out-of-range value or an
/// option combination the requested command cannot honour.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct ConfigError(pub String);

/// Domain and configuration errors from the library are configuration
/// errors at this level; anything else stays a runtime failure.
pub(crate) fn config_error(e: uavsec::Error) -> anyhow::Error {
    match e {
        uavsec::Error::Config(_) | uavsec::Error::Domain { .. } => ConfigError(e.to_string()).into(),
        other => other.into(),
    }
}

/// `Some` for a computed closed form, `None` where it is undefined.
pub(crate) fn defined<T>(r: uavsec::Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(uavsec::Error::Domain { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

pub(crate) fn form_name(form: SeriesForm) -> &'static str {
    match form {
        SeriesForm::Weighted => "weighted",
        SeriesForm::Taylor => "taylor",
    }
}

#[derive(Debug, Parser)]
#[command(name = "uavsec-lab", version, about = "Secrecy and reliability experiments for a UAV jamming relay")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML configuration; every key is optional.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Monte Carlo seed.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,

    /// Monte Carlo frames per estimate.
    #[arg(long, global = true, value_name = "N")]
    frames: Option<u64>,

    /// Series depths as `D,R,Q`.
    #[arg(long, global = true, value_name = "D,R,Q", value_parser = parse_truncation)]
    truncation: Option<(usize, usize, usize)>,

    /// Output directory for reports and CSV files.
    #[arg(long, global = true, value_name = "DIR", default_value = "results")]
    out: PathBuf,

    #[arg(long, global = true, value_enum)]
    baseline: Option<BaselineArg>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum BaselineArg {
    UavCj,
    UavNoCj,
    GroundRelay,
}

impl From<BaselineArg> for BaselineName {
    fn from(b: BaselineArg) -> Self {
        match b {
            BaselineArg::UavCj => BaselineName::UavCj,
            BaselineArg::UavNoCj => BaselineName::UavNoCj,
            BaselineArg::GroundRelay => BaselineName::GroundRelay,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compare a closed form against Monte Carlo and write a JSON report.
    Validate {
        #[arg(value_enum)]
        metric: Metric,
    },
    /// Write a CSV sweep.
    Sweep {
        #[arg(value_enum)]
        kind: SweepKind,
    },
    /// Compare every special-function evaluator with its oracle.
    SpecfunCheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    Cp,
    Sop,
    Asr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum SweepKind {
    Power,
    LambdaBeta,
    Placement,
    Altitude,
}

fn run(cli: Cli) -> Result<bool> {
    let mut cfg = ExperimentConfig::load(cli.config.as_deref())?;
    cfg.apply(&Overrides { seed: cli.seed, frames: cli.frames, truncation: cli.truncation, baseline: cli.baseline.map(Into::into) });
    let scenario = cfg.scenario()?;
    match cli.command {
        Command::Validate { metric } => validate::run(metric, &cfg, &scenario, &cli.out),
        Command::Sweep { kind } => sweep::run(kind, &cfg, &scenario, &cli.out).map(|()| true),
        Command::SpecfunCheck => {
            let rows = specfun_report_with(&scenario.orders)?;
            for r in &rows {
                println!(
                    "{} {:<22} {} error {:.3e} (tolerance {:.0e})  {}",
                    if r.passed() { "PASS" } else { "FAIL" },
                    r.name,
                    r.error_kind,
                    r.max_error,
                    r.tolerance,
                    r.detail
                );
            }
            let report: Vec<_> = rows
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "name": r.name,
                        "detail": r.detail,
                        "error_kind": r.error_kind,
                        "max_error": r.max_error,
                        "tolerance": r.tolerance,
                        "passed": r.passed(),
                    })
                })
                .collect();
            let passed = rows.iter().all(|r| r.passed());
            output::write_json(&cli.out, "specfun_check.json", &serde_json::json!({ "rows": report, "passed": passed }))?;
            Ok(passed)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if e.downcast_ref::<ConfigError>().is_some() => {
            eprintln!("configuration error: {e:#}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
