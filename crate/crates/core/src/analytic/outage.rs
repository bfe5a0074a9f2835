//! Secrecy outage probability `P_so = 1 - L₁ L₂`.
//!
//! `L₁ = Pr{γ_E^(1) ≤ δ_e}` involves only the two ground links and is exact.
//! For the relayed branch, `γ_E^(2) ≤ δ_e` is equivalent to
//! `S_au ≤ a₁ S_ub + a₂/S_ue + a₃`, so
//! `L₂ = 1 - E{Q₁(√(2K_au), √(2(1+K_au)(a₁S_ub + a₂/S_ue + a₃))}`.
//! After the depth-`D` Marcum expansion and a trinomial expansion of the
//! power `(a₁S_ub + a₃ + a₂/S_ue)^u`:
//!
//! ```text
//! 1 - L₂ = e^{-K_au - (1+K_au)a₃} Σ_{d≤D} W_D(d) K_au^d/d!
//!          Σ_{u≤d} (1+K_au)^u Σ_{r+s+m=u} a₁^r a₃^s a₂^m / (r! s! m!) · Y_r · Z_m
//! ```
//!
//! * `Y_r = E{S_ub^r e^{-(1+K_au)a₁S_ub}}
//!   = (1+K_ub) e^{-K_ub} r!/b̃^{r+1} ₁F₁(r+1; 1; c̃²/b̃)`, the confluent
//!   function being `e^{x/2} x^{-1/2} M_{-(r+1/2),0}(x)` in Whittaker form;
//! * `Z_m = E{S_ue^{-m} e^{-(1+K_au)a₂/S_ue}}` with the depth-`Q` expansion
//!   of the `I₀` in the density of `S_ue`:
//!   `(1+K_ue) e^{-K_ue} Σ_{q≤Q} W_Q(q) c₁^q/q!² J(q-m+1; (1+K_au)a₂, 1+K_ue)`.

use super::{ln_inverse_gamma_integral, ln_pow, non_finite, SeriesProbability};
use crate::channel::LinkSet;
use crate::error::{Error, Result};
use crate::protocol::ProtocolConfig;
use crate::specfun::{ln_factorial, ln_hyp1f1, ln_series_weight, SignedLogSum, TruncationOrders};

/// Auxiliary constants of the relayed-branch series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesAuxiliaries {
    /// `δ_e P_b L_ub / (P_a L_au)`
    pub a1: f64,
    /// `δ_e N₀ / (ηβ P_a L_au L_ue)`
    pub a2: f64,
    /// `δ_e (1-β+ζ) N₀ / ((1-β) P_a L_au)`
    pub a3: f64,
    /// `2K_au`
    pub a: f64,
    /// `2(1+K_au) a₁`
    pub b: f64,
    /// `b/2 + K_ub + 1`
    pub b_tilde: f64,
    /// `√(K_ub(1+K_ub))`
    pub c_tilde: f64,
    /// `K_ue + 1`
    pub b1: f64,
    /// `2(K_ue+1) a₃`
    pub b2: f64,
    /// `2(K_ue+1) a₂`
    pub b3: f64,
    /// `K_ue(K_ue+1)`
    pub c1: f64,
}

impl SeriesAuxiliaries {
    pub fn new(cfg: &ProtocolConfig, links: &LinkSet) -> Self {
        let (pa, pb) = (cfg.source_power(), cfg.jamming_power());
        let (l_au, l_ub, l_ue) = (links.au.large_scale_gain, links.ub.large_scale_gain, links.ue.large_scale_gain);
        let (k_au, k_ub, k_ue) = (links.au.k_factor, links.ub.k_factor, links.ue.k_factor);
        let de = cfg.delta_e();
        let n0 = cfg.noise_power;
        let a1 = de * pb * l_ub / (pa * l_au);
        let a2 = de * n0 / (cfg.eta * cfg.beta * pa * l_au * l_ue);
        let a3 = de * (1.0 - cfg.beta + cfg.zeta) * n0 / ((1.0 - cfg.beta) * pa * l_au);
        let b = 2.0 * (1.0 + k_au) * a1;
        Self {
            a1,
            a2,
            a3,
            a: 2.0 * k_au,
            b,
            b_tilde: 0.5 * b + k_ub + 1.0,
            c_tilde: (k_ub * (1.0 + k_ub)).sqrt(),
            b1: k_ue + 1.0,
            b2: 2.0 * (k_ue + 1.0) * a3,
            b3: 2.0 * (k_ue + 1.0) * a2,
            c1: k_ue * (k_ue + 1.0),
        }
    }
}

/// `Pr{γ_E^(1) ≤ δ_e} = 1 - P_a L_ae e^{-N₀δ_e/(P_a L_ae)} / (P_b L_be δ_e + P_a L_ae)`,
/// exact for the exponential ground links.
pub fn sop_l1(cfg: &ProtocolConfig, links: &LinkSet) -> f64 {
    let (pa, pb) = (cfg.source_power(), cfg.jamming_power());
    if pa == 0.0 {
        return 1.0;
    }
    let de = cfg.delta_e();
    let sa = pa * links.ae.large_scale_gain;
    let sb = pb * links.be.large_scale_gain;
    1.0 - sa * (-cfg.noise_power * de / sa).exp() / (sb * de + sa)
}

fn check_split(cfg: &ProtocolConfig, function: &'static str) -> Result<()> {
    if !(cfg.beta > 0.0 && cfg.beta < 1.0) {
        return Err(Error::domain(function, format!("requires 0 < beta < 1, got {}", cfg.beta)));
    }
    Ok(())
}

/// `Pr{γ_E^(2) ≤ δ_e}` from the series above.
pub fn sop_l2(cfg: &ProtocolConfig, links: &LinkSet, orders: &TruncationOrders) -> Result<SeriesProbability> {
    orders.validate()?;
    check_split(cfg, "sop_l2")?;
    if cfg.source_power() == 0.0 {
        return Ok(SeriesProbability::new(1.0));
    }
    let aux = SeriesAuxiliaries::new(cfg, links);
    let (k_au, k_ub, k_ue) = (links.au.k_factor, links.ub.k_factor, links.ue.k_factor);
    let (big_d, big_q) = (orders.d, orders.q);

    let c2 = aux.c_tilde * aux.c_tilde;
    let mut ln_y = Vec::with_capacity(big_d + 1);
    for r in 0..=big_d {
        let ln = (1.0 + k_ub).ln() - k_ub + ln_factorial(r) - (r as f64 + 1.0) * aux.b_tilde.ln()
            + ln_hyp1f1(r as f64 + 1.0, 1.0, c2 / aux.b_tilde)?;
        ln_y.push(ln);
    }

    let beta_z = (1.0 + k_au) * aux.a2;
    let mut ln_z = vec![f64::NAN; big_d + 1];
    for (m, slot) in ln_z.iter_mut().enumerate() {
        if m > 0 && aux.a2 == 0.0 {
            break;
        }
        let mut acc = SignedLogSum::new();
        for q in 0..=big_q {
            let ln_c = ln_series_weight(orders.form, big_q, q) + ln_pow(aux.c1, q) - 2.0 * ln_factorial(q);
            if ln_c == f64::NEG_INFINITY {
                continue;
            }
            acc.add_ln(false, ln_c + ln_inverse_gamma_integral(q as i64 - m as i64 + 1, beta_z, 1.0 + k_ue)?);
        }
        *slot = (1.0 + k_ue).ln() - k_ue + acc.ln_abs();
    }

    let mut acc = SignedLogSum::new();
    for d in 0..=big_d {
        let ln_d = ln_series_weight(orders.form, big_d, d) + ln_pow(k_au, d) - ln_factorial(d);
        if ln_d == f64::NEG_INFINITY {
            continue;
        }
        for u in 0..=d {
            let ln_du = ln_d + ln_pow(1.0 + k_au, u);
            for r in 0..=u {
                let ln_r = ln_pow(aux.a1, r) - ln_factorial(r) + ln_y[r];
                if ln_r == f64::NEG_INFINITY {
                    continue;
                }
                for s in 0..=(u - r) {
                    let m = u - r - s;
                    let ln_sm = ln_pow(aux.a3, s) - ln_factorial(s) + ln_pow(aux.a2, m) - ln_factorial(m);
                    if ln_sm == f64::NEG_INFINITY {
                        continue;
                    }
                    let term = ln_du + ln_r + ln_sm + ln_z[m];
                    if !(term < f64::INFINITY) {
                        return Err(non_finite("sop_l2", format!("d={d} u={u} r={r} s={s}")));
                    }
                    acc.add_ln(false, term);
                }
            }
        }
    }
    let complement = (acc.ln_abs() - k_au - (1.0 + k_au) * aux.a3).exp();
    if !complement.is_finite() {
        return Err(non_finite("sop_l2", "sum".into()));
    }
    Ok(SeriesProbability::new(1.0 - complement))
}

/// Both branches and their combination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecrecyOutage {
    pub l1: f64,
    pub l2: SeriesProbability,
    /// `1 - L₁ L₂` from the raw `L₂`.
    pub sop: SeriesProbability,
}

pub fn secrecy_outage_probability(
    cfg: &ProtocolConfig,
    links: &LinkSet,
    orders: &TruncationOrders,
) -> Result<SecrecyOutage> {
    let l1 = sop_l1(cfg, links);
    let l2 = sop_l2(cfg, links, orders)?;
    Ok(SecrecyOutage { l1, l2, sop: SeriesProbability::new(1.0 - l1 * l2.raw) })
}
