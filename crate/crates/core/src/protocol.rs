//! Per-frame physics of the two-phase relay protocol.
//!
//! Phase one: Alice transmits with power `P_a = λP` while Bob jams with
//! `P_b = (1-λ)P`. The relay splits the received power, harvesting a fraction
//! `β` and processing the rest. Phase two: the relay forwards the processed
//! signal with the harvested power and Bob cancels his own jamming.
//! Eve listens in both phases.

use crate::channel::LinkSet;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolConfig {
    /// Total power budget `P` in watts.
    pub total_power: f64,
    /// Fraction `λ` of the budget given to the source; the rest jams.
    pub lambda: f64,
    /// Power-splitting ratio `β` at the relay.
    pub beta: f64,
    /// Energy-harvesting efficiency `η`.
    pub eta: f64,
    /// Noise power `N₀` in watts.
    pub noise_power: f64,
    /// Processing-noise ratio `ζ = N_p / N₀`.
    pub zeta: f64,
    /// Transmission rate `R_t` in bits/s/Hz.
    pub rate_t: f64,
    /// Secrecy rate `R_s` in bits/s/Hz.
    pub rate_s: f64,
    /// Whether the residual term `ε̃` enters the SINR denominators.
    pub include_residual_epsilon: bool,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        Self {
            total_power: dbw_to_watts(20.0),
            lambda: 0.5,
            beta: 0.5,
            eta: 0.7,
            noise_power: 1e-2,
            zeta: 2.0,
            rate_t: 0.5,
            rate_s: 0.2,
            include_residual_epsilon: false,
        }
    }
}

pub fn dbw_to_watts(dbw: f64) -> f64 {
    10f64.powf(dbw / 10.0)
}

pub fn watts_to_dbw(w: f64) -> f64 {
    10.0 * w.log10()
}

impl ProtocolConfig {
    pub fn with_power_dbw(self, dbw: f64) -> Self {
        Self { total_power: dbw_to_watts(dbw), ..self }
    }

    pub fn with_split(self, lambda: f64, beta: f64) -> Self {
        Self { lambda, beta, ..self }
    }

    pub fn source_power(&self) -> f64 {
        self.lambda * self.total_power
    }

    pub fn jamming_power(&self) -> f64 {
        (1.0 - self.lambda) * self.total_power
    }

    pub fn processing_noise(&self) -> f64 {
        self.zeta * self.noise_power
    }

    /// SINR threshold for the main channel, `2^{2R_t} - 1`.
    pub fn delta_t(&self) -> f64 {
        (2.0 * self.rate_t).exp2() - 1.0
    }

    /// SINR threshold for the wiretap channel, `2^{2(R_t-R_s)} - 1`.
    pub fn delta_e(&self) -> f64 {
        (2.0 * (self.rate_t - self.rate_s)).exp2() - 1.0
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(self.total_power >= 0.0) || !self.total_power.is_finite() {
            return bad(format!("total power must be finite and non-negative, got {}", self.total_power));
        }
        if !(self.lambda >= 0.0 && self.lambda <= 1.0) {
            return bad(format!("lambda must lie in [0, 1], got {}", self.lambda));
        }
        if !(self.beta >= 0.0 && self.beta <= 1.0) {
            return bad(format!("beta must lie in [0, 1], got {}", self.beta));
        }
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return bad(format!("eta must lie in (0, 1], got {}", self.eta));
        }
        if !(self.noise_power >= 0.0) || !(self.zeta >= 0.0) {
            return bad(format!("noise powers must be non-negative, got N0={} zeta={}", self.noise_power, self.zeta));
        }
        if !(self.rate_t > self.rate_s && self.rate_s >= 0.0) {
            return bad(format!("rates need R_t > R_s >= 0, got R_t={} R_s={}", self.rate_t, self.rate_s));
        }
        Ok(())
    }
}

/// One realization of the five normalized power gains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameRealization {
    pub s_au: f64,
    pub s_ub: f64,
    pub s_ue: f64,
    pub s_ae: f64,
    pub s_be: f64,
}

impl FrameRealization {
    pub const UNIT: Self = Self { s_au: 1.0, s_ub: 1.0, s_ue: 1.0, s_ae: 1.0, s_be: 1.0 };

    pub fn scaled(&self, c: f64) -> Self {
        Self { s_au: c * self.s_au, s_ub: c * self.s_ub, s_ue: c * self.s_ue, s_ae: c * self.s_ae, s_be: c * self.s_be }
    }
}

/// Received power at the relay in phase one, before splitting.
fn relay_input(cfg: &ProtocolConfig, links: &LinkSet, s_au: f64, s_ub: f64) -> f64 {
    cfg.source_power() * s_au * links.au.large_scale_gain + cfg.jamming_power() * s_ub * links.ub.large_scale_gain
}

fn residual(cfg: &ProtocolConfig, links: &LinkSet, s_au: f64, s_ub: f64) -> f64 {
    if cfg.include_residual_epsilon {
        cfg.processing_noise() * cfg.noise_power / relay_input(cfg, links, s_au, s_ub)
    } else {
        0.0
    }
}

/// Power harvested by the relay, `P_u = ηβ(P_a S_au L_au + P_b S_ub L_ub + N₀)`.
pub fn harvested_power(cfg: &ProtocolConfig, frame: &FrameRealization, links: &LinkSet) -> f64 {
    cfg.eta * cfg.beta * (relay_input(cfg, links, frame.s_au, frame.s_ub) + cfg.noise_power)
}

/// Amplification factor of the relay.
pub fn relay_gain(cfg: &ProtocolConfig, frame: &FrameRealization, links: &LinkSet) -> Result<f64> {
    let denom = (1.0 - cfg.beta) * (relay_input(cfg, links, frame.s_au, frame.s_ub) + cfg.noise_power)
        + cfg.processing_noise();
    if !(denom > 0.0) {
        return Err(Error::domain("relay_gain", "processed power plus processing noise is zero"));
    }
    Ok((harvested_power(cfg, frame, links) / denom).sqrt())
}

/// End-to-end SINR at Bob after cancelling his own jamming.
pub fn sinr_main(cfg: &ProtocolConfig, frame: &FrameRealization, links: &LinkSet) -> f64 {
    let (eta, beta, n0) = (cfg.eta, cfg.beta, cfg.noise_power);
    let (lau, lub) = (links.au.large_scale_gain, links.ub.large_scale_gain);
    let num = eta * beta * (1.0 - beta) * cfg.source_power() * frame.s_au * frame.s_ub * lau * lub;
    if num == 0.0 {
        return 0.0;
    }
    let den = eta * beta * (1.0 - beta + cfg.zeta) * frame.s_ub * lub * n0
        + (1.0 - beta) * n0
        + residual(cfg, links, frame.s_au, frame.s_ub);
    num / den
}

/// Eve's SINR in phase one. Depends only on `s_ae` and `s_be`.
pub fn sinr_eve_phase1_from(cfg: &ProtocolConfig, links: &LinkSet, s_ae: f64, s_be: f64) -> f64 {
    let num = cfg.source_power() * s_ae * links.ae.large_scale_gain;
    if num == 0.0 {
        return 0.0;
    }
    num / (cfg.jamming_power() * s_be * links.be.large_scale_gain + cfg.noise_power)
}

/// Eve's SINR in phase two. Depends only on `s_au`, `s_ub` and `s_ue`.
pub fn sinr_eve_phase2_from(cfg: &ProtocolConfig, links: &LinkSet, s_au: f64, s_ub: f64, s_ue: f64) -> f64 {
    let (eta, beta, n0) = (cfg.eta, cfg.beta, cfg.noise_power);
    let (lau, lub, lue) = (links.au.large_scale_gain, links.ub.large_scale_gain, links.ue.large_scale_gain);
    let common = eta * beta * (1.0 - beta);
    let num = common * cfg.source_power() * s_au * s_ue * lau * lue;
    if num == 0.0 {
        return 0.0;
    }
    let den = common * cfg.jamming_power() * s_ub * s_ue * lub * lue
        + (1.0 - beta) * n0
        + eta * beta * (1.0 - beta + cfg.zeta) * s_ue * lue * n0
        + residual(cfg, links, s_au, s_ub);
    num / den
}

pub fn sinr_eve_phase1(cfg: &ProtocolConfig, frame: &FrameRealization, links: &LinkSet) -> f64 {
    sinr_eve_phase1_from(cfg, links, frame.s_ae, frame.s_be)
}

pub fn sinr_eve_phase2(cfg: &ProtocolConfig, frame: &FrameRealization, links: &LinkSet) -> f64 {
    sinr_eve_phase2_from(cfg, links, frame.s_au, frame.s_ub, frame.s_ue)
}

/// Eve combines nothing across phases; she keeps the better one.
pub fn sinr_eve(cfg: &ProtocolConfig, frame: &FrameRealization, links: &LinkSet) -> f64 {
    sinr_eve_phase1(cfg, frame, links).max(sinr_eve_phase2(cfg, frame, links))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecrecyQuantities {
    /// Main-channel capacity `½ log₂(1 + γ_AB)`.
    pub c_main: f64,
    /// Wiretap capacity `½ log₂(1 + γ_E)`.
    pub c_eve: f64,
    /// Instantaneous secrecy rate `[C_M - C_E]⁺`.
    pub c_secrecy: f64,
}

impl SecrecyQuantities {
    pub fn from_sinrs(gamma_main: f64, gamma_eve: f64) -> Self {
        let c_main = 0.5 * gamma_main.ln_1p() / std::f64::consts::LN_2;
        let c_eve = 0.5 * gamma_eve.ln_1p() / std::f64::consts::LN_2;
        Self { c_main, c_eve, c_secrecy: (c_main - c_eve).max(0.0) }
    }
}

pub fn secrecy_quantities(cfg: &ProtocolConfig, frame: &FrameRealization, links: &LinkSet) -> SecrecyQuantities {
    SecrecyQuantities::from_sinrs(sinr_main(cfg, frame, links), sinr_eve(cfg, frame, links))
}
