//! `sweep`: plot-ready CSV curves and surfaces.

use std::path::Path;

use anyhow::{bail, Result};
use rayon::prelude::*;
use uavsec::analytic::{asr_lower_bound, connection_probability, secrecy_outage_probability};
use uavsec::channel::LinkSet;
use uavsec::montecarlo::{estimate_metrics, MetricEstimates};
use uavsec::optimize::{placement_sweep, sweep_argmax, GridAxis, LambdaPolicy, PlacementAxis, PlacementOptions, PlacementPoint};
use uavsec::protocol::{watts_to_dbw, ProtocolConfig};
use uavsec::scenario::{Baseline, Scenario};

use crate::config::{ExperimentConfig, PlacementLambda};
use crate::output::{opt9, sig9, write_csv};
use crate::{defined, ConfigError, SweepKind};

const METRIC_HEADER: [&str; 15] = [
    "baseline",
    "power_dbw",
    "lambda",
    "beta",
    "cp_analytic",
    "cp_mc",
    "cp_se",
    "sop_analytic",
    "sop_mc",
    "sop_se",
    "asr_bound",
    "asr_mc",
    "asr_se",
    "seed",
    "frames",
];

const PLACEMENT_HEADER: [&str; 15] = [
    "baseline",
    "series",
    "coordinate",
    "relay_x",
    "relay_y",
    "relay_z",
    "power_dbw",
    "beta",
    "lambda_policy",
    "lambda",
    "asr_mc",
    "asr_se",
    "fallback_frames",
    "seed",
    "frames",
];

pub fn run(kind: SweepKind, cfg: &ExperimentConfig, s: &Scenario, out: &Path) -> Result<()> {
    let (name, header, rows): (&str, &[&str], _) = match kind {
        SweepKind::Power => ("sweep_power.csv", &METRIC_HEADER, power(cfg, s)?),
        SweepKind::LambdaBeta => ("sweep_lambda_beta.csv", &METRIC_HEADER, lambda_beta(cfg, s)?),
        SweepKind::Placement => ("sweep_placement.csv", &PLACEMENT_HEADER, placement(cfg, s)?),
        SweepKind::Altitude => ("sweep_altitude.csv", &PLACEMENT_HEADER, altitude(cfg, s)?),
    };
    let path = write_csv(out, name, header, &rows)?;
    println!("{} rows -> {}", rows.len(), path.display());
    Ok(())
}

/// Closed forms (each empty where undefined) next to one Monte Carlo pass.
fn metrics_at(cfg: &ExperimentConfig, s: &Scenario, p: &ProtocolConfig, links: &LinkSet) -> Result<Vec<String>> {
    let cp = defined(connection_probability(p, links, &s.orders))?.map(|x| x.value);
    let sop = defined(secrecy_outage_probability(p, links, &s.orders))?.map(|x| x.sop.value);
    let asr = defined(asr_lower_bound(p, links, &s.orders, cfg.mode.asr_bound_form.into()))?.map(|b| b.value);
    let mc: MetricEstimates = estimate_metrics(p, links, &s.plan)?;
    Ok(vec![
        s.baseline.as_str().to_string(),
        sig9(watts_to_dbw(p.total_power)),
        sig9(p.lambda),
        sig9(p.beta),
        opt9(cp),
        sig9(mc.cp.mean),
        sig9(mc.cp.std_error),
        opt9(sop),
        sig9(mc.sop.mean),
        sig9(mc.sop.std_error),
        opt9(asr),
        sig9(mc.asr.mean),
        sig9(mc.asr.std_error),
        s.plan.seed.to_string(),
        s.plan.frames.to_string(),
    ])
}

fn power(cfg: &ExperimentConfig, s: &Scenario) -> Result<Vec<Vec<String>>> {
    let links = s.links()?;
    cfg.sweep
        .power_dbw
        .iter()
        .map(|&dbw| metrics_at(cfg, s, &s.effective_protocol().with_power_dbw(dbw), &links))
        .collect()
}

fn lambda_beta(cfg: &ExperimentConfig, s: &Scenario) -> Result<Vec<Vec<String>>> {
    if !s.baseline.jamming() {
        bail!(ConfigError(format!("the λ–β surface needs jamming; baseline {} fixes λ = 1", s.baseline.as_str())));
    }
    let links = s.links()?;
    let lambdas = GridAxis::from(cfg.sweep.lambda).values();
    let betas = GridAxis::from(cfg.sweep.beta).values();
    let cells: Vec<(f64, f64)> = lambdas.iter().flat_map(|&l| betas.iter().map(move |&b| (l, b))).collect();
    // Cells run in parallel; each cell's estimate is itself independent of
    // the thread schedule, so the file is identical from run to run.
    let rows: Vec<Vec<String>> = cells
        .par_iter()
        .map(|&(l, b)| metrics_at(cfg, s, &s.protocol.with_split(l, b), &links))
        .collect::<Result<_>>()?;
    let best = rows
        .iter()
        .zip(&cells)
        .map(|(r, c)| (r[11].parse::<f64>().unwrap_or(f64::NEG_INFINITY), c))
        .fold((f64::NEG_INFINITY, &(0.0, 0.0)), |a, b| if b.0 > a.0 { b } else { a });
    println!("ASR argmax (λ, β) = ({}, {}) with ASR {}", sig9(best.1 .0), sig9(best.1 .1), sig9(best.0));
    Ok(rows)
}

fn policy(choice: PlacementLambda, cfg: &ExperimentConfig) -> (LambdaPolicy, &'static str) {
    match choice {
        PlacementLambda::Opsa => (LambdaPolicy::OpsaGrid(cfg.sweep.opsa_lambda.into()), "opsa"),
        PlacementLambda::Fixed => (LambdaPolicy::Fixed, "fixed"),
        PlacementLambda::PerFrame => (LambdaPolicy::PerFrameLambdaStar, "per_frame"),
    }
}

fn placement_rows(
    s: &Scenario,
    p: &ProtocolConfig,
    series: &str,
    policy_name: &str,
    points: &[PlacementPoint],
) -> Vec<Vec<String>> {
    points
        .iter()
        .map(|pt| {
            vec![
                s.baseline.as_str().to_string(),
                series.to_string(),
                sig9(pt.coordinate),
                sig9(pt.relay.x),
                sig9(pt.relay.y),
                sig9(pt.relay.z),
                sig9(watts_to_dbw(p.total_power)),
                sig9(p.beta),
                policy_name.to_string(),
                opt9(pt.lambda),
                sig9(pt.asr.mean),
                sig9(pt.asr.std_error),
                pt.fallback_frames.to_string(),
                s.plan.seed.to_string(),
                s.plan.frames.to_string(),
            ]
        })
        .collect()
}

fn placement(cfg: &ExperimentConfig, s: &Scenario) -> Result<Vec<Vec<String>>> {
    let axis: GridAxis = cfg.sweep.horizontal.into();
    let (policy, name) = policy(cfg.sweep.placement_lambda, cfg);
    let kind = s.baseline.relay_kind();
    let mut rows = Vec::new();
    let mut curves = vec![("no_cj", PlacementOptions { policy: LambdaPolicy::Fixed, jamming: false, relay_kind: kind })];
    if s.baseline.jamming() {
        curves.insert(0, ("cj", PlacementOptions { policy, jamming: true, relay_kind: kind }));
    }
    for (series, opts) in curves {
        let pts = placement_sweep(&s.protocol, &s.geometry, &s.environment, &s.plan, PlacementAxis::Horizontal, &axis, &opts)?;
        if let Some(top) = sweep_argmax(&pts) {
            println!("{series}: ASR peak {} at {} D_x", sig9(top.asr.mean), sig9(top.coordinate));
        }
        let label = if opts.jamming { name } else { "none" };
        rows.extend(placement_rows(s, &s.protocol, series, label, &pts));
    }
    Ok(rows)
}

fn altitude(cfg: &ExperimentConfig, s: &Scenario) -> Result<Vec<Vec<String>>> {
    if s.baseline == Baseline::GroundRelay {
        bail!(ConfigError("the altitude sweep needs an aerial relay, not the ground_relay baseline".into()));
    }
    let axis: GridAxis = cfg.sweep.altitude.into();
    let (policy, name) = policy(cfg.sweep.altitude_lambda, cfg);
    let jamming = s.baseline.jamming();
    let opts = PlacementOptions { policy, jamming, relay_kind: s.baseline.relay_kind() };
    let label = if jamming { name } else { "none" };
    let mut rows = Vec::new();
    for &beta in &cfg.sweep.altitude_betas {
        let p = ProtocolConfig { beta, ..s.protocol };
        let pts = placement_sweep(&p, &s.geometry, &s.environment, &s.plan, PlacementAxis::Altitude, &axis, &opts)?;
        if let Some(top) = sweep_argmax(&pts) {
            println!("β = {beta}: ASR peak {} at H = {}", sig9(top.asr.mean), sig9(top.coordinate));
        }
        rows.extend(placement_rows(s, &p, &format!("beta={}", sig9(beta)), label, &pts));
    }
    Ok(rows)
}
