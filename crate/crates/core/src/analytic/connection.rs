//! Connection probability `Pr{γ_AB > δ_t}`.
//!
//! Writing the main-link SINR condition as `S_au > A + B/S_ub` with
//!
//! * `A = (1-β+ζ) N₀ δ_t / ((1-β) P_a L_au)`,
//! * `B = N₀ δ_t / (ηβ P_a L_au L_ub)`,
//!
//! the probability is `E{Q₁(√(2K_au), √(2(1+K_au)(A + B/S_ub)))}`. Expanding
//! the Marcum function (depth `D`) and the `I₀` in the density of `S_ub`
//! (depth `R`), the binomial `(A + B/s)^u` and integrating over `s` gives
//!
//! ```text
//! P_c = (1+K_ub) e^{-K_ub - K_au - (1+K_au)A}
//!       Σ_{d≤D} Σ_{u≤d} Σ_{s≤u} Σ_{r≤R} W_D(d) W_R(r)
//!       K_au^d (1+K_au)^u A^s B^{u-s} / (d! s! (u-s)!)
//!       · (K_ub(1+K_ub))^r / r!² · J(r-u+s+1; (1+K_au)B, 1+K_ub)
//! ```
//!
//! where `J(p; β, γ) = ∫ t^{p-1} e^{-γt-β/t} dt = 2(β/γ)^{p/2} K_p(2√(βγ))`.
//! All terms are positive.

use super::{ln_inverse_gamma_integral, ln_pow, non_finite, SeriesProbability};
use crate::channel::LinkSet;
use crate::error::{Error, Result};
use crate::protocol::ProtocolConfig;
use crate::specfun::{ln_factorial, ln_series_weight, SignedLogSum, TruncationOrders};

/// The thresholds `(A, B)` of the condition `S_au > A + B/S_ub`.
pub fn connection_thresholds(cfg: &ProtocolConfig, links: &LinkSet) -> (f64, f64) {
    let pa = cfg.source_power();
    let (l_au, l_ub) = (links.au.large_scale_gain, links.ub.large_scale_gain);
    let n0dt = cfg.noise_power * cfg.delta_t();
    let a = (1.0 - cfg.beta + cfg.zeta) * n0dt / ((1.0 - cfg.beta) * pa * l_au);
    let b = n0dt / (cfg.eta * cfg.beta * pa * l_au * l_ub);
    (a, b)
}

pub fn connection_probability(
    cfg: &ProtocolConfig,
    links: &LinkSet,
    orders: &TruncationOrders,
) -> Result<SeriesProbability> {
    orders.validate()?;
    if !(cfg.beta > 0.0 && cfg.beta < 1.0) {
        return Err(Error::domain("connection_probability", format!("requires 0 < beta < 1, got {}", cfg.beta)));
    }
    if cfg.source_power() == 0.0 {
        return Ok(SeriesProbability::new(0.0));
    }
    let (a, b) = connection_thresholds(cfg, links);
    let (k_au, k_ub) = (links.au.k_factor, links.ub.k_factor);
    let (big_d, big_r) = (orders.d, orders.r);

    // J depends on (r, u - s) only through p = r - (u - s) + 1 ∈ [1 - D, R + 1].
    let beta_j = (1.0 + k_au) * b;
    let mut ln_j = Vec::with_capacity(big_d + big_r + 1);
    for p in (1 - big_d as i64)..=(big_r as i64 + 1) {
        ln_j.push(if beta_j == 0.0 && p <= 0 { f64::NAN } else { ln_inverse_gamma_integral(p, beta_j, 1.0 + k_ub)? });
    }
    let c2 = k_ub * (1.0 + k_ub);
    let ln_r_terms: Vec<f64> = (0..=big_r)
        .map(|r| ln_series_weight(orders.form, big_r, r) + ln_pow(c2, r) - 2.0 * ln_factorial(r))
        .collect();

    let mut acc = SignedLogSum::new();
    for d in 0..=big_d {
        let ln_d = ln_series_weight(orders.form, big_d, d) + ln_pow(k_au, d) - ln_factorial(d);
        if ln_d == f64::NEG_INFINITY {
            continue;
        }
        for u in 0..=d {
            for s in 0..=u {
                let ln_dus = ln_d + ln_pow(1.0 + k_au, u) + ln_pow(a, s) + ln_pow(b, u - s)
                    - ln_factorial(s)
                    - ln_factorial(u - s);
                if ln_dus == f64::NEG_INFINITY {
                    continue;
                }
                for (r, &ln_r) in ln_r_terms.iter().enumerate() {
                    if ln_r == f64::NEG_INFINITY {
                        continue;
                    }
                    let p = r as i64 - (u - s) as i64 + 1;
                    let term = ln_dus + ln_r + ln_j[(p + big_d as i64 - 1) as usize];
                    if !(term < f64::INFINITY) {
                        return Err(non_finite("connection_probability", format!("d={d} u={u} s={s} r={r}")));
                    }
                    acc.add_ln(false, term);
                }
            }
        }
    }
    let ln_pref = (1.0 + k_ub).ln() - k_ub - k_au - (1.0 + k_au) * a;
    let raw = (ln_pref + acc.ln_abs()).exp();
    if !raw.is_finite() {
        return Err(non_finite("connection_probability", "sum".into()));
    }
    Ok(SeriesProbability::new(raw))
}
