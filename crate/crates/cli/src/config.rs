//! Experiment configuration file.
//!
//! Every key is optional and falls back to the reference operating point;
//! unknown keys are rejected. Powers are written in dBW and converted to
//! watts once, here.

use std::path::Path;

use serde::Deserialize;
use uavsec::analytic::LogMeanForm;
use uavsec::geometry::{Environment, KFactorScale, NetworkGeometry, NodePosition};
use uavsec::montecarlo::SimulationPlan;
use uavsec::optimize::GridAxis;
use uavsec::protocol::{dbw_to_watts, ProtocolConfig};
use uavsec::scenario::{Baseline, Scenario};
use uavsec::specfun::{SeriesForm, TruncationOrders};

use crate::ConfigError;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub geometry: GeometrySection,
    pub environment: EnvironmentSection,
    pub protocol: ProtocolSection,
    pub truncation: TruncationSection,
    pub simulation: SimulationSection,
    pub mode: ModeSection,
    pub validate: ValidateSection,
    pub sweep: SweepSection,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GeometrySection {
    /// Horizontal Alice–Bob distance `D_x` (units of 100 m).
    pub dx: f64,
    /// Relay altitude `H`.
    pub altitude: f64,
    /// Explicit coordinates override the reference layout built from
    /// `dx` and `altitude`.
    pub alice: Option<[f64; 3]>,
    pub bob: Option<[f64; 3]>,
    pub eve: Option<[f64; 3]>,
    pub relay: Option<[f64; 3]>,
}

impl Default for GeometrySection {
    fn default() -> Self {
        Self { dx: 10.0, altitude: 1.5, alice: None, bob: None, eve: None, relay: None }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnvironmentSection {
    pub alpha_los: f64,
    pub alpha_nlos: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub kappa_min: f64,
    pub kappa_max: f64,
}

impl Default for EnvironmentSection {
    fn default() -> Self {
        let e = Environment::default();
        Self {
            alpha_los: e.alpha_los,
            alpha_nlos: e.alpha_nlos,
            omega1: e.omega1,
            omega2: e.omega2,
            kappa_min: e.kappa_min,
            kappa_max: e.kappa_max,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProtocolSection {
    pub power_dbw: f64,
    pub lambda: f64,
    pub beta: f64,
    pub eta: f64,
    pub noise_power: f64,
    pub zeta: f64,
    pub rate_t: f64,
    pub rate_s: f64,
}

impl Default for ProtocolSection {
    fn default() -> Self {
        let p = ProtocolConfig::default();
        Self {
            power_dbw: 20.0,
            lambda: p.lambda,
            beta: p.beta,
            eta: p.eta,
            noise_power: p.noise_power,
            zeta: p.zeta,
            rate_t: p.rate_t,
            rate_s: p.rate_s,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum FormName {
    #[default]
    Weighted,
    Taylor,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TruncationSection {
    pub d: usize,
    pub r: usize,
    pub q: usize,
    pub form: FormName,
}

impl Default for TruncationSection {
    fn default() -> Self {
        Self { d: 25, r: 25, q: 25, form: FormName::Weighted }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimulationSection {
    pub frames: u64,
    pub seed: u64,
}

impl Default for SimulationSection {
    fn default() -> Self {
        let p = SimulationPlan::default();
        Self { frames: p.frames, seed: p.seed }
    }
}

#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum BaselineName {
    #[default]
    UavCj,
    UavNoCj,
    GroundRelay,
}

impl From<BaselineName> for Baseline {
    fn from(b: BaselineName) -> Self {
        match b {
            BaselineName::UavCj => Baseline::UavCj,
            BaselineName::UavNoCj => Baseline::UavNoCj,
            BaselineName::GroundRelay => Baseline::GroundRelay,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum KFactorName {
    #[default]
    Linear,
    Decibel,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModeSection {
    pub baseline: BaselineName,
    pub residual_epsilon: bool,
    pub k_factor_interpretation: KFactorName,
    /// Log-mean treatment inside the secrecy-rate lower bound.
    pub asr_bound_form: AsrFormName,
}

#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum AsrFormName {
    #[default]
    Verbatim,
    ScaleCorrected,
}

impl From<AsrFormName> for LogMeanForm {
    fn from(f: AsrFormName) -> Self {
        match f {
            AsrFormName::Verbatim => LogMeanForm::Verbatim,
            AsrFormName::ScaleCorrected => LogMeanForm::ScaleCorrected,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ValidateSection {
    pub power_dbw: Vec<f64>,
    pub cp_tolerance: f64,
    /// Source share used by `validate sop`.
    pub sop_lambda: f64,
    pub sop_tolerance: f64,
    pub asr_power_dbw: f64,
    pub asr_orders: Vec<usize>,
    pub asr_targets: Vec<f64>,
    pub asr_band: f64,
}

impl Default for ValidateSection {
    fn default() -> Self {
        Self {
            power_dbw: vec![10.0, 15.0, 20.0, 25.0, 30.0],
            cp_tolerance: 0.01,
            sop_lambda: 0.7,
            sop_tolerance: 0.02,
            asr_power_dbw: 20.0,
            asr_orders: vec![5, 10, 25],
            asr_targets: vec![0.0907, 0.0617, 0.0512],
            asr_band: 0.03,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AxisSection {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl AxisSection {
    const fn new(min: f64, max: f64, points: usize) -> Self {
        Self { min, max, points }
    }
}

impl From<AxisSection> for GridAxis {
    fn from(a: AxisSection) -> Self {
        GridAxis::new(a.min, a.max, a.points)
    }
}

#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum PlacementLambda {
    /// Best ergodic `λ` on `opsa_lambda` at every position.
    #[default]
    Opsa,
    /// The configured `protocol.lambda`.
    Fixed,
    /// The closed-form per-frame optimum.
    PerFrame,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    pub power_dbw: Vec<f64>,
    pub lambda: AxisSection,
    pub beta: AxisSection,
    /// Relay x-coordinate as a fraction of `D_x`.
    pub horizontal: AxisSection,
    pub altitude: AxisSection,
    pub altitude_betas: Vec<f64>,
    pub placement_lambda: PlacementLambda,
    pub altitude_lambda: PlacementLambda,
    pub opsa_lambda: AxisSection,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            power_dbw: (0..=12).map(|k| 2.5 * k as f64).collect(),
            lambda: AxisSection::new(0.01, 0.99, 25),
            beta: AxisSection::new(0.01, 0.99, 25),
            horizontal: AxisSection::new(0.05, 1.0, 20),
            altitude: AxisSection::new(0.5, 6.0, 12),
            altitude_betas: vec![0.25, 0.5, 0.75, 0.9],
            placement_lambda: PlacementLambda::Opsa,
            altitude_lambda: PlacementLambda::Fixed,
            opsa_lambda: AxisSection::new(0.01, 0.99, 25),
        }
    }
}

/// Command-line overrides applied on top of the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub frames: Option<u64>,
    pub truncation: Option<(usize, usize, usize)>,
    pub baseline: Option<BaselineName>,
}

/// Parses `D,R,Q`.
pub fn parse_truncation(s: &str) -> Result<(usize, usize, usize), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [d, r, q] = parts.as_slice() else {
        return Err(format!("expected D,R,Q, got `{s}`"));
    };
    let num = |x: &str| x.parse::<usize>().map_err(|e| format!("bad truncation order `{x}`: {e}"));
    Ok((num(d)?, num(r)?, num(q)?))
}

impl ExperimentConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, ConfigError> {
        let Some(path) = path else { return Ok(Self::default()) };
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| ConfigError(format!("{}: {}", path.display(), e.0)))
    }

    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError(e.to_string()))
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(s) = o.seed {
            self.simulation.seed = s;
        }
        if let Some(f) = o.frames {
            self.simulation.frames = f;
        }
        if let Some((d, r, q)) = o.truncation {
            self.truncation.d = d;
            self.truncation.r = r;
            self.truncation.q = q;
        }
        if let Some(b) = o.baseline {
            self.mode.baseline = b;
        }
    }

    pub fn series_form(&self) -> SeriesForm {
        match self.truncation.form {
            FormName::Weighted => SeriesForm::Weighted,
            FormName::Taylor => SeriesForm::Taylor,
        }
    }

    pub fn geometry(&self) -> NetworkGeometry {
        let g = &self.geometry;
        let mut net = NetworkGeometry::reference(g.dx, g.altitude);
        let pos = |p: [f64; 3]| NodePosition::new(p[0], p[1], p[2]);
        if let Some(p) = g.alice {
            net.alice = pos(p);
        }
        if let Some(p) = g.bob {
            net.bob = pos(p);
        }
        if let Some(p) = g.eve {
            net.eve = pos(p);
        }
        if let Some(p) = g.relay {
            net.relay = pos(p);
        }
        net
    }

    pub fn environment(&self) -> Environment {
        let e = &self.environment;
        Environment {
            alpha_los: e.alpha_los,
            alpha_nlos: e.alpha_nlos,
            omega1: e.omega1,
            omega2: e.omega2,
            kappa_min: e.kappa_min,
            kappa_max: e.kappa_max,
            k_factor_scale: match self.mode.k_factor_interpretation {
                KFactorName::Linear => KFactorScale::Linear,
                KFactorName::Decibel => KFactorScale::Decibel,
            },
        }
    }

    pub fn protocol(&self) -> ProtocolConfig {
        let p = &self.protocol;
        ProtocolConfig {
            total_power: dbw_to_watts(p.power_dbw),
            lambda: p.lambda,
            beta: p.beta,
            eta: p.eta,
            noise_power: p.noise_power,
            zeta: p.zeta,
            rate_t: p.rate_t,
            rate_s: p.rate_s,
            include_residual_epsilon: self.mode.residual_epsilon,
        }
    }

    /// The validated operating point.
    pub fn scenario(&self) -> Result<Scenario, ConfigError> {
        let t = &self.truncation;
        let s = Scenario {
            geometry: self.geometry(),
            environment: self.environment(),
            protocol: self.protocol(),
            orders: TruncationOrders { d: t.d, r: t.r, q: t.q, form: self.series_form() },
            plan: SimulationPlan::new(self.simulation.frames, self.simulation.seed),
            baseline: self.mode.baseline.into(),
        };
        s.validate().map_err(|e| ConfigError(e.to_string()))?;
        s.links().map_err(|e| ConfigError(format!("layout: {e}")))?;
        self.validate_grids()?;
        Ok(s)
    }

    fn validate_grids(&self) -> Result<(), ConfigError> {
        let cfg = |e: uavsec::Error| ConfigError(e.to_string());
        let v = &self.validate;
        if v.power_dbw.is_empty() || self.sweep.power_dbw.is_empty() {
            return Err(ConfigError("power grids must not be empty".into()));
        }
        if v.asr_orders.len() != v.asr_targets.len() || v.asr_orders.is_empty() {
            return Err(ConfigError(format!(
                "validate.asr_orders ({}) and validate.asr_targets ({}) must be non-empty and of equal length",
                v.asr_orders.len(),
                v.asr_targets.len()
            )));
        }
        if v.asr_orders.contains(&0) {
            return Err(ConfigError("validate.asr_orders must be at least 1".into()));
        }
        if !(v.sop_lambda > 0.0 && v.sop_lambda <= 1.0) {
            return Err(ConfigError(format!("validate.sop_lambda must lie in (0, 1], got {}", v.sop_lambda)));
        }
        let s = &self.sweep;
        GridAxis::from(s.lambda).validate_within(0.0, 1.0, "sweep.lambda").map_err(cfg)?;
        GridAxis::from(s.beta).validate_within(0.0, 1.0, "sweep.beta").map_err(cfg)?;
        GridAxis::from(s.opsa_lambda).validate_within(0.0, 1.0, "sweep.opsa_lambda").map_err(cfg)?;
        GridAxis::from(s.horizontal).validate_within(0.0, f64::INFINITY, "sweep.horizontal").map_err(cfg)?;
        GridAxis::from(s.altitude).validate_within(0.0, f64::INFINITY, "sweep.altitude").map_err(cfg)?;
        if s.altitude_betas.iter().any(|b| !(0.0..=1.0).contains(b)) || s.altitude_betas.is_empty() {
            return Err(ConfigError("sweep.altitude_betas must be a non-empty list in [0, 1]".into()));
        }
        Ok(())
    }
}
