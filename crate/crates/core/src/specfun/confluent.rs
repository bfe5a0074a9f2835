//! Kummer's confluent hypergeometric function and the Whittaker `M` function
//! built on top of it.

use crate::error::{Error, Result};

/// `ln ₁F₁(a; b; x)` for `x ≥ 0`, `b > 0` and `a ≥ 0`, where all series
/// terms are non-negative.
pub fn ln_hyp1f1(a: f64, b: f64, x: f64) -> Result<f64> {
    if !(a >= 0.0 && b > 0.0 && x >= 0.0) || !x.is_finite() {
        return Err(Error::domain("hyp1f1", format!("log form needs a >= 0, b > 0, x >= 0; got a={a}, b={b}, x={x}")));
    }
    let mut ln_scale = 0.0;
    let (mut sum, mut term) = (1.0f64, 1.0f64);
    let mut k = 0.0;
    loop {
        let ratio = (a + k) * x / ((b + k) * (k + 1.0));
        term *= ratio;
        sum += term;
        k += 1.0;
        if sum > 1e280 {
            ln_scale += sum.ln();
            term /= sum;
            sum = 1.0;
        }
        if term == 0.0 || (term < 1e-17 * sum && ratio < 1.0) {
            break;
        }
        if k > 1e6 {
            return Err(Error::NonFinite { series: "hyp1f1", term: format!("{k}") });
        }
    }
    Ok(ln_scale + sum.ln())
}

/// `₁F₁(a; b; x)` by direct summation; `b` must not be a non-positive integer.
pub fn hyp1f1(a: f64, b: f64, x: f64) -> Result<f64> {
    if b <= 0.0 && b == b.floor() {
        return Err(Error::domain("hyp1f1", format!("b={b} is a pole")));
    }
    if a >= 0.0 && b > 0.0 && x >= 0.0 {
        let ln = ln_hyp1f1(a, b, x)?;
        if ln > 709.78 {
            return Err(Error::Overflow { function: "hyp1f1", x });
        }
        return Ok(ln.exp());
    }
    let (mut sum, mut term) = (1.0f64, 1.0f64);
    let mut k = 0.0;
    loop {
        let ratio = (a + k) * x / ((b + k) * (k + 1.0));
        term *= ratio;
        sum += term;
        k += 1.0;
        if !sum.is_finite() {
            return Err(Error::Overflow { function: "hyp1f1", x });
        }
        if term == 0.0 || (term.abs() < 1e-17 * sum.abs() && ratio.abs() < 1.0) {
            return Ok(sum);
        }
        if k > 1e6 {
            return Err(Error::NonFinite { series: "hyp1f1", term: format!("{k}") });
        }
    }
}

/// Whittaker `M_{κ,μ}(x) = e^{-x/2} x^{μ+1/2} ₁F₁(μ-κ+1/2; 1+2μ; x)`.
pub fn whittaker_m(kappa: f64, mu: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain("whittaker_m", format!("requires x > 0, got {x}")));
    }
    let a = mu - kappa + 0.5;
    let b = 1.0 + 2.0 * mu;
    if a >= 0.0 && b > 0.0 {
        let ln = -0.5 * x + (mu + 0.5) * x.ln() + ln_hyp1f1(a, b, x)?;
        if ln > 709.78 {
            return Err(Error::Overflow { function: "whittaker_m", x });
        }
        return Ok(ln.exp());
    }
    Ok((-0.5 * x).exp() * x.powf(mu + 0.5) * hyp1f1(a, b, x)?)
}
