//! Closed-form and finite-series counterparts of the Monte Carlo metrics.
//!
//! * [`connection_probability`] — `Pr{γ_AB > δ_t}`,
//! * [`sop_l1`], [`sop_l2`], [`secrecy_outage_probability`] — the two
//!   eavesdropper branches and their combination `1 - L₁L₂`,
//! * [`asr_lower_bound`] — the Jensen-type lower bound on the average
//!   secrecy rate.
//!
//! The probability series are built from the truncated Marcum-Q and Bessel-I
//! expansions with the weighting chosen in [`TruncationOrders::form`](crate::specfun::TruncationOrders::form); with
//! [`SeriesForm::Taylor`](crate::specfun::SeriesForm::Taylor) and large orders
//! they converge to the exact probabilities, which is how they are tested.
//! None of the evaluators model the residual `ε̃` term.

mod connection;
mod outage;
mod secrecy_rate;

pub use connection::{connection_probability, connection_thresholds};
pub use outage::{secrecy_outage_probability, sop_l1, sop_l2, SecrecyOutage, SeriesAuxiliaries};
pub use secrecy_rate::{
    asr_lower_bound, mean_gamma_eve_phase1, mean_gamma_eve_phase2_approx, AsrBound, LogMeanForm, NoncentralityParams,
};

use crate::error::{Error, Result};
use crate::specfun::{ln_bessel_k, ln_gamma};

/// A series probability before and after clamping to `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesProbability {
    /// The value the series actually sums to.
    pub raw: f64,
    /// `raw` clamped to `[0, 1]`.
    pub value: f64,
}

impl SeriesProbability {
    pub fn new(raw: f64) -> Self {
        Self { raw, value: raw.clamp(0.0, 1.0) }
    }

    /// Size of the clamping correction `|raw - value|`.
    pub fn clamp_adjustment(&self) -> f64 {
        (self.raw - self.value).abs()
    }
}

/// `k ln x` with the convention `0 · ln 0 = 0`.
fn ln_pow(x: f64, k: usize) -> f64 {
    if k == 0 {
        0.0
    } else {
        k as f64 * x.ln()
    }
}

/// `ln ∫₀^∞ t^{p-1} exp(-γt - β/t) dt = ln[2 (β/γ)^{p/2} K_p(2√(βγ))]`,
/// which reduces to `ln Γ(p) - p ln γ` when `β = 0`.
fn ln_inverse_gamma_integral(p: i64, beta: f64, gamma: f64) -> Result<f64> {
    if beta == 0.0 {
        if p <= 0 {
            return Err(Error::domain(
                "inverse_gamma_integral",
                format!("integral diverges for p={p} with beta=0"),
            ));
        }
        return Ok(ln_gamma(p as f64) - p as f64 * gamma.ln());
    }
    let x = 2.0 * (beta * gamma).sqrt();
    Ok(std::f64::consts::LN_2 + 0.5 * p as f64 * (beta / gamma).ln() + ln_bessel_k(p as f64, x)?)
}

fn non_finite(series: &'static str, term: String) -> Error {
    Error::NonFinite { series, term }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate_semi_infinite;
    use approx::assert_relative_eq;

    #[test]
    fn inverse_gamma_integral_against_quadrature() {
        for &p in &[-3i64, -1, 0, 1, 4, 9] {
            for &(beta, gamma) in &[(0.3, 1.5), (2.0, 0.7), (1e-3, 3.0)] {
                let q = integrate_semi_infinite(
                    |t| if t == 0.0 { 0.0 } else { t.powi(p as i32 - 1) * (-gamma * t - beta / t).exp() },
                    1e-11,
                )
                .unwrap();
                assert_relative_eq!(ln_inverse_gamma_integral(p, beta, gamma).unwrap(), q.ln(), max_relative = 1e-8);
            }
        }
        assert_relative_eq!(ln_inverse_gamma_integral(3, 0.0, 2.0).unwrap(), (2.0f64 / 8.0).ln(), max_relative = 1e-14);
        assert!(ln_inverse_gamma_integral(0, 0.0, 2.0).is_err());
    }

    #[test]
    fn clamping_bookkeeping() {
        let p = SeriesProbability::new(1.02);
        assert_eq!(p.value, 1.0);
        assert_relative_eq!(p.clamp_adjustment(), 0.02, epsilon = 1e-15);
        assert_eq!(SeriesProbability::new(0.3).clamp_adjustment(), 0.0);
    }
}
