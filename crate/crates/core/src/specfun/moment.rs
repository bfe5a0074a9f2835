//! `E{ln(X + b)}` for a noncentral chi-square `X` with two degrees of freedom.
//!
//! The density of `X` is `½ e^{-(x+λ)/2} I₀(√(λx))`. Expanding `I₀` termwise
//! gives
//!
//! * `b = 0`: `g₁(λ) = e^{-λ/2} Σ_r W_R(r) (ψ(r+1) + ln 2) λ^r / (r! 2^r)`,
//! * `b > 0`: `g₂(λ, b) = e^{-λ/2} Σ_r W_R(r) Φ(r, b) λ^r / (r!² 4^r)`,
//!
//! with `Φ` from [`phi_shifted_log`](super::phi_shifted_log).

use super::bessel::ln_bessel_i;
use super::gamma::{digamma, ln_factorial};
use super::meijer::{phi_shifted_log, PhiForm};
use super::{ln_series_weight, SeriesForm, SignedLogSum};
use crate::error::{Error, Result};
use crate::quad::integrate_semi_infinite;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LogMomentMode {
    Series { order: usize, form: SeriesForm },
    Quadrature,
}

fn check(lambda: f64, b: f64) -> Result<()> {
    if !(lambda >= 0.0) || !(b >= 0.0) || !lambda.is_finite() || !b.is_finite() {
        return Err(Error::domain("log_moment_ncx2", format!("requires finite lambda, b >= 0; got {lambda}, {b}")));
    }
    Ok(())
}

pub fn g1_series(lambda: f64, order: usize, form: SeriesForm) -> Result<f64> {
    check(lambda, 0.0)?;
    let mut acc = SignedLogSum::new();
    for r in 0..=order {
        let c = digamma(r as f64 + 1.0)? + std::f64::consts::LN_2;
        let pow = if r == 0 { 0.0 } else { r as f64 * (0.5 * lambda).ln() };
        acc.add_ln(c < 0.0, ln_series_weight(form, order, r) + c.abs().ln() + pow - ln_factorial(r));
    }
    Ok((-0.5 * lambda).exp() * acc.value())
}

pub fn g2_series(lambda: f64, b: f64, order: usize, form: SeriesForm) -> Result<f64> {
    check(lambda, b)?;
    let mut acc = SignedLogSum::new();
    for r in 0..=order {
        let phi = phi_shifted_log(r, b, PhiForm::Stable)?;
        if phi == 0.0 {
            continue;
        }
        let pow = if r == 0 { 0.0 } else { r as f64 * (0.25 * lambda).ln() };
        acc.add_ln(phi < 0.0, ln_series_weight(form, order, r) + phi.abs().ln() + pow - 2.0 * ln_factorial(r));
    }
    Ok((-0.5 * lambda).exp() * acc.value())
}

pub fn log_moment_ncx2(lambda: f64, b: f64, mode: LogMomentMode) -> Result<f64> {
    check(lambda, b)?;
    match mode {
        LogMomentMode::Series { order, form } => {
            if b == 0.0 {
                g1_series(lambda, order, form)
            } else {
                g2_series(lambda, b, order, form)
            }
        }
        LogMomentMode::Quadrature => {
            let density_ln = |x: f64| -> f64 {
                let i0 = ln_bessel_i(0.0, (lambda * x).sqrt()).unwrap_or(f64::NEG_INFINITY);
                i0 - 0.5 * (x + lambda)
            };
            integrate_semi_infinite(|x| 0.5 * (x + b).ln() * density_ln(x).exp(), 1e-10)
        }
    }
}
