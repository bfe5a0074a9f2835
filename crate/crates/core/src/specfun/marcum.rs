//! First-order Marcum Q function.
//!
//! The exact evaluator uses the Poisson-mixture form
//! `Q₁(a, b) = Σ_k Pois(k; a²/2) · Γ(k+1, b²/2)/k!`, whose terms are all
//! non-negative, so the result lands in `[0, 1]` without cancellation.

use statrs::function::gamma::gamma_ur;

use super::gamma::ln_factorial;
use super::{ln_series_weight, SeriesForm, SignedLogSum};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarcumMode {
    Exact,
    /// The finite double series of depth `order`.
    Truncated { order: usize, form: SeriesForm },
}

pub fn marcum_q1(a: f64, b: f64, mode: MarcumMode) -> Result<f64> {
    if !(a >= 0.0 && b >= 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain("marcum_q1", format!("requires finite a, b >= 0; got a={a}, b={b}")));
    }
    match mode {
        MarcumMode::Exact => Ok(exact(a, b)),
        MarcumMode::Truncated { order, form } => Ok(marcum_q1_truncated(a, b, order, form)),
    }
}

fn exact(a: f64, b: f64) -> f64 {
    let lam = 0.5 * a * a;
    let y = 0.5 * b * b;
    if b == 0.0 {
        return 1.0;
    }
    if lam == 0.0 {
        return (-y).exp();
    }
    let mode = lam.floor() as u64;
    let ln_pmf = |k: u64| -lam + k as f64 * lam.ln() - ln_factorial(k as usize);
    let tail = |k: u64| gamma_ur(k as f64 + 1.0, y);
    let mut sum = 0.0;
    let mut k = mode;
    loop {
        let w = ln_pmf(k).exp();
        sum += w * tail(k);
        if (w < 1e-18 && k > mode) || w == 0.0 {
            break;
        }
        k += 1;
    }
    // Terms below the mode; the tail probability rises toward 1 as k grows,
    // so the omitted lower terms are bounded by the omitted pmf mass.
    let mut k = mode;
    while k > 0 {
        k -= 1;
        let w = ln_pmf(k).exp();
        sum += w * tail(k);
        if w < 1e-18 {
            break;
        }
    }
    sum.clamp(0.0, 1.0)
}

/// `Σ_{d≤D} Σ_{u≤d} W_D(d) a^{2d} b^{2u} / (d! u! 2^{d+u}) · e^{-(a²+b²)/2}`.
///
/// With [`SeriesForm::Taylor`] this is the Poisson mixture cut at `D`; the
/// weighted form can leave `[0, 1]` slightly and is returned unclamped.
pub fn marcum_q1_truncated(a: f64, b: f64, order: usize, form: SeriesForm) -> f64 {
    let ln_x = (0.5 * a * a).ln();
    let ln_y = (0.5 * b * b).ln();
    let mut acc = SignedLogSum::new();
    let base = -0.5 * (a * a + b * b);
    for d in 0..=order {
        let ln_d = ln_series_weight(form, order, d) + ln_pow_checked(ln_x, d) - ln_factorial(d) + base;
        for u in 0..=d {
            acc.add_ln(false, ln_d + ln_pow_checked(ln_y, u) - ln_factorial(u));
        }
    }
    acc.value()
}

/// `k · ln x` with the convention `0^0 = 1` when `ln x = -∞`.
fn ln_pow_checked(ln_x: f64, k: usize) -> f64 {
    if k == 0 {
        0.0
    } else {
        k as f64 * ln_x
    }
}
