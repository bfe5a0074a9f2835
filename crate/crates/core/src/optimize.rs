//! Power allocation and relay placement.
//!
//! Two distinct notions of "optimal λ" live here:
//!
//! * [`lambda_star`] — the per-frame closed form `1/(1+√ν)` of the high-SNR
//!   rational approximation of `φ(λ) = (γ_AB - γ_E)/(1 + γ_E)`, which needs
//!   the instantaneous gains (including Eve's);
//! * [`grid_search_opsa`] — the ergodic optimum of the Monte Carlo ASR or CP
//!   over a `(λ, β)` grid, using common random numbers across cells.

use crate::channel::{build_links_for, LinkSet, RelayKind};
use crate::error::{Error, Result};
use crate::geometry::{Environment, NetworkGeometry, NodePosition};
use crate::montecarlo::{estimate_vector, Estimate, SimulationPlan};
use crate::protocol::{sinr_eve, sinr_main, FrameRealization, ProtocolConfig, SecrecyQuantities};

/// Which expression of `φ(λ)` to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhiMode {
    /// `(γ_AB - γ_E)/(1 + γ_E)` through the protocol SINRs.
    #[default]
    Exact,
    /// `c₁c₃c₅ λ(λ-1)² / (b₂λ² + b₁λ + b₀)` built from the normalized gains
    /// alone (large-scale gains omitted), with
    /// `c₂/c₃ = S_ae/S_be` and `c₄/c₅ = S_au/S_ub`.
    HighSnr,
}

/// The coefficients `c₁ … c₅` of the high-SNR rational form.
fn high_snr_coefficients(cfg: &ProtocolConfig, f: &FrameRealization) -> [f64; 5] {
    let (eb, ob, n0, p) = (cfg.eta * cfg.beta, 1.0 - cfg.beta, cfg.noise_power, cfg.total_power);
    let den = |q: f64| eb * (ob + cfg.zeta) * q * n0 + ob * n0;
    let (x, y, z, v, w) = (f.s_au, f.s_ub, f.s_ue, f.s_ae, f.s_be);
    [
        eb * ob * p * x * y / den(y),
        p * v / n0,
        p * w / n0,
        eb * ob * p * x * z / den(z),
        eb * ob * p * y * z / den(z),
    ]
}

pub fn phi_lambda(lambda: f64, cfg: &ProtocolConfig, frame: &FrameRealization, links: &LinkSet, mode: PhiMode) -> f64 {
    match mode {
        PhiMode::Exact => {
            let c = ProtocolConfig { lambda, ..*cfg };
            let gm = sinr_main(&c, frame, links);
            let ge = sinr_eve(&c, frame, links);
            (gm - ge) / (1.0 + ge)
        }
        PhiMode::HighSnr => {
            let [c1, c2, c3, c4, c5] = high_snr_coefficients(cfg, frame);
            let b2 = (c4 - c5) * c3 + c2 * c5;
            let b1 = (2.0 * c5 - c4) * c3 - c2 * c5 - c2 - c4;
            let b0 = -c3 * c5;
            c1 * c3 * c5 * lambda * (lambda - 1.0).powi(2) / (b2 * lambda * lambda + b1 * lambda + b0)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaStarCase {
    /// `ν < 1`: the stationarity condition has no admissible maximizer.
    NoOptimum,
    /// `ν = 1`: `λ* = ½`.
    Half,
    /// `ν > 1`: `λ* = 1/(1+√ν) ∈ (0, ½)`.
    Interior,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaStarResult {
    pub nu: f64,
    pub lambda_star: Option<f64>,
    pub case: LambdaStarCase,
}

/// `ν = S_ae/S_be + S_au/S_ub` and the stationary point of
/// `(ν-1)λ² + 2λ - 1 = 0` in `(0, 1)`.
pub fn lambda_star(frame: &FrameRealization) -> LambdaStarResult {
    let nu = frame.s_ae / frame.s_be + frame.s_au / frame.s_ub;
    if nu < 1.0 {
        LambdaStarResult { nu, lambda_star: None, case: LambdaStarCase::NoOptimum }
    } else if nu == 1.0 {
        LambdaStarResult { nu, lambda_star: Some(0.5), case: LambdaStarCase::Half }
    } else {
        LambdaStarResult { nu, lambda_star: Some(1.0 / (1.0 + nu.sqrt())), case: LambdaStarCase::Interior }
    }
}

fn argmax_by(values: impl Iterator<Item = (f64, f64)>) -> Option<(f64, f64)> {
    let mut best: Option<(f64, f64)> = None;
    for (x, v) in values {
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((x, v));
        }
    }
    best
}

/// Grid maximizer of `φ` over `λ ∈ {k·step} ∩ (0, 1)`.
pub fn brute_force_lambda(
    cfg: &ProtocolConfig,
    frame: &FrameRealization,
    links: &LinkSet,
    grid_step: f64,
    mode: PhiMode,
) -> Result<f64> {
    if !(grid_step > 0.0 && grid_step <= 1e-3) {
        return Err(Error::domain("brute_force_lambda", format!("grid step must lie in (0, 1e-3], got {grid_step}")));
    }
    let n = (1.0 / grid_step).round() as usize;
    let grid = (1..n).map(|k| k as f64 * grid_step);
    Ok(argmax_by(grid.map(|l| (l, phi_lambda(l, cfg, frame, links, mode)))).map(|(l, _)| l).unwrap_or(0.5))
}

/// Evenly spaced closed interval `[min, max]` with `points` nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridAxis {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl GridAxis {
    pub const fn new(min: f64, max: f64, points: usize) -> Self {
        Self { min, max, points }
    }

    pub const fn single(x: f64) -> Self {
        Self { min: x, max: x, points: 1 }
    }

    /// The axis `min, min + step, …` up to `max` (inclusive within rounding).
    pub fn with_step(min: f64, max: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) || !(max >= min) {
            return Err(Error::Config(format!("grid needs step > 0 and max >= min, got [{min}, {max}] step {step}")));
        }
        Ok(Self { min, max, points: ((max - min) / step + 1e-9).floor() as usize + 1 }.snap(step))
    }

    fn snap(self, step: f64) -> Self {
        Self { max: self.min + step * (self.points - 1) as f64, ..self }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.min];
        }
        let h = (self.max - self.min) / (self.points - 1) as f64;
        (0..self.points).map(|k| if k + 1 == self.points { self.max } else { self.min + h * k as f64 }).collect()
    }

    pub fn validate_within(&self, lo: f64, hi: f64, name: &str) -> Result<()> {
        if self.points == 0 || !(self.min >= lo && self.max <= hi && self.min <= self.max) {
            return Err(Error::Config(format!(
                "{name} grid [{}, {}] with {} points must lie in [{lo}, {hi}]",
                self.min, self.max, self.points
            )));
        }
        Ok(())
    }
}

/// The axes used by the sweeps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepGrid {
    pub lambda: GridAxis,
    pub beta: GridAxis,
    /// Relay horizontal position as a fraction of the Alice–Bob distance.
    pub horizontal: GridAxis,
    /// Relay altitude in normalized units.
    pub altitude: GridAxis,
}

impl Default for SweepGrid {
    fn default() -> Self {
        Self {
            lambda: GridAxis::new(0.01, 0.99, 25),
            beta: GridAxis::new(0.01, 0.99, 25),
            horizontal: GridAxis::new(0.05, 1.0, 20),
            altitude: GridAxis::new(0.5, 6.0, 12),
        }
    }
}

impl SweepGrid {
    pub fn validate(&self) -> Result<()> {
        self.lambda.validate_within(0.01, 0.99, "lambda")?;
        self.beta.validate_within(0.01, 0.99, "beta")?;
        self.horizontal.validate_within(0.0, f64::INFINITY, "horizontal")?;
        self.altitude.validate_within(f64::MIN_POSITIVE, f64::INFINITY, "altitude")
    }
}

/// Ergodic objective of the grid search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Objective {
    #[default]
    Asr,
    Cp,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OpsaSurface {
    pub lambdas: Vec<f64>,
    pub betas: Vec<f64>,
    /// Row-major in `λ`: `cells[i * betas.len() + j]` is `(lambdas[i], betas[j])`.
    pub cells: Vec<Estimate>,
    pub lambda_best: f64,
    pub beta_best: f64,
    pub best: Estimate,
}

impl OpsaSurface {
    pub fn cell(&self, i: usize, j: usize) -> &Estimate {
        &self.cells[i * self.betas.len() + j]
    }
}

fn objective_value(obj: Objective, cfg: &ProtocolConfig, f: &FrameRealization, links: &LinkSet) -> f64 {
    let gm = sinr_main(cfg, f, links);
    match obj {
        Objective::Cp => f64::from(u8::from(gm > cfg.delta_t())),
        Objective::Asr => SecrecyQuantities::from_sinrs(gm, sinr_eve(cfg, f, links)).c_secrecy,
    }
}

/// Monte Carlo surface of `objective` over `lambda × beta` with common
/// random numbers, and its first maximal cell in row-major order.
pub fn grid_search_opsa(
    cfg: &ProtocolConfig,
    links: &LinkSet,
    plan: &SimulationPlan,
    lambda: &GridAxis,
    beta: &GridAxis,
    objective: Objective,
) -> Result<OpsaSurface> {
    lambda.validate_within(0.0, 1.0, "lambda")?;
    beta.validate_within(0.0, 1.0, "beta")?;
    let (lambdas, betas) = (lambda.values(), beta.values());
    let configs: Vec<ProtocolConfig> =
        lambdas.iter().flat_map(|&l| betas.iter().map(move |&b| cfg.with_split(l, b))).collect();
    let cells = estimate_vector(links, plan, configs.len(), |_, f, out| {
        for (o, c) in out.iter_mut().zip(&configs) {
            *o = objective_value(objective, c, f, links);
        }
    })?;
    let (k, _) = argmax_by(cells.iter().enumerate().map(|(k, e)| (k as f64, e.mean))).expect("non-empty grid");
    let k = k as usize;
    Ok(OpsaSurface {
        lambda_best: lambdas[k / betas.len()],
        beta_best: betas[k % betas.len()],
        best: cells[k],
        lambdas,
        betas,
        cells,
    })
}

/// How λ is chosen at each point of a placement sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaPolicy {
    /// Use `cfg.lambda` everywhere.
    Fixed,
    /// Per point, the λ on this axis maximizing the Monte Carlo ASR at
    /// `cfg.beta`.
    OpsaGrid(GridAxis),
    /// Per frame, [`lambda_star`]; frames without an interior optimum use the
    /// grid argmax of the exact `φ` over `{0.01, …, 0.99}`.
    PerFrameLambdaStar,
}

/// Which coordinate a placement sweep moves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlacementAxis {
    /// Relay at `(f·x_B, 0, H)` for `f` on the horizontal axis.
    Horizontal,
    /// Relay at `(x_U, y_U, H)` for `H` on the altitude axis.
    Altitude,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlacementPoint {
    /// `f` or `H`, depending on the axis.
    pub coordinate: f64,
    pub relay: NodePosition,
    /// The λ used, when it is one number for the whole point.
    pub lambda: Option<f64>,
    pub asr: Estimate,
    /// Frames that fell back to the grid argmax (per-frame policy only).
    pub fallback_frames: u64,
}

/// Options shared by the placement sweeps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlacementOptions {
    pub policy: LambdaPolicy,
    /// Without jamming every frame uses `λ = 1` (no power to Bob).
    pub jamming: bool,
    pub relay_kind: RelayKind,
}

impl Default for PlacementOptions {
    fn default() -> Self {
        Self { policy: LambdaPolicy::Fixed, jamming: true, relay_kind: RelayKind::Aerial }
    }
}

const FALLBACK_STEPS: usize = 99;

fn per_frame_lambda(cfg: &ProtocolConfig, f: &FrameRealization, links: &LinkSet) -> (f64, bool) {
    match lambda_star(f).lambda_star {
        Some(l) => (l, false),
        None => {
            let grid = (1..=FALLBACK_STEPS).map(|k| k as f64 / (FALLBACK_STEPS + 1) as f64);
            let best = argmax_by(grid.map(|l| (l, phi_lambda(l, cfg, f, links, PhiMode::Exact))));
            (best.map(|(l, _)| l).unwrap_or(0.5), true)
        }
    }
}

fn asr_with_policy(
    cfg: &ProtocolConfig,
    links: &LinkSet,
    plan: &SimulationPlan,
    opts: &PlacementOptions,
) -> Result<(Option<f64>, Estimate, u64)> {
    if !opts.jamming {
        let c = ProtocolConfig { lambda: 1.0, ..*cfg };
        let e = estimate_vector(links, plan, 1, |_, f, out| out[0] = objective_value(Objective::Asr, &c, f, links))?;
        return Ok((Some(1.0), e[0], 0));
    }
    match opts.policy {
        LambdaPolicy::Fixed => {
            let e = estimate_vector(links, plan, 1, |_, f, out| out[0] = objective_value(Objective::Asr, cfg, f, links))?;
            Ok((Some(cfg.lambda), e[0], 0))
        }
        LambdaPolicy::OpsaGrid(axis) => {
            let s = grid_search_opsa(cfg, links, plan, &axis, &GridAxis::single(cfg.beta), Objective::Asr)?;
            Ok((Some(s.lambda_best), s.best, 0))
        }
        LambdaPolicy::PerFrameLambdaStar => {
            let e = estimate_vector(links, plan, 2, |_, f, out| {
                let (l, fell_back) = per_frame_lambda(cfg, f, links);
                out[0] = objective_value(Objective::Asr, &ProtocolConfig { lambda: l, ..*cfg }, f, links);
                out[1] = f64::from(u8::from(fell_back));
            })?;
            let fallback = (e[1].mean * plan.frames as f64).round() as u64;
            Ok((None, e[0], fallback))
        }
    }
}

/// The relay position for coordinate `x` on `axis`.
pub fn placement_relay(template: &NetworkGeometry, axis: PlacementAxis, x: f64) -> NodePosition {
    match axis {
        PlacementAxis::Horizontal => NodePosition::new(x * template.bob.x, 0.0, template.relay.z),
        PlacementAxis::Altitude => NodePosition::new(template.relay.x, template.relay.y, x),
    }
}

/// Monte Carlo ASR along one placement axis. The same frame sequence (same
/// seed) is used at every point.
pub fn placement_sweep(
    cfg: &ProtocolConfig,
    template: &NetworkGeometry,
    env: &Environment,
    plan: &SimulationPlan,
    axis: PlacementAxis,
    coordinates: &GridAxis,
    opts: &PlacementOptions,
) -> Result<Vec<PlacementPoint>> {
    let mut out = Vec::with_capacity(coordinates.points);
    for x in coordinates.values() {
        let relay = placement_relay(template, axis, x);
        let placed = match opts.relay_kind {
            RelayKind::Aerial => template.with_relay(relay),
            RelayKind::Ground => template.with_relay(NodePosition::ground(relay.horizontal_norm(), 0.0)),
        };
        let links = build_links_for(&placed, env, opts.relay_kind)?;
        let (lambda, asr, fallback_frames) = asr_with_policy(cfg, &links, plan, opts)?;
        out.push(PlacementPoint { coordinate: x, relay: placed.relay, lambda, asr, fallback_frames });
    }
    Ok(out)
}

/// The point with the largest ASR (first one on ties).
pub fn sweep_argmax(points: &[PlacementPoint]) -> Option<&PlacementPoint> {
    let (k, _) = argmax_by(points.iter().enumerate().map(|(k, p)| (k as f64, p.asr.mean)))?;
    points.get(k as usize)
}
