//! The shifted log-moment `Φ(i, b) = ½ ∫₀^∞ ln(x+b) x^i e^{-x/2} dx` and the
//! single Meijer-G instance it is usually written with.
//!
//! The workhorse is the log-weighted moment
//! `ℓ_k(x) = ∫₀^∞ s^k ln(1 + s/x) e^{-s} ds`, which obeys the positive
//! recursion `ℓ_k/k! = ℓ_{k-1}/(k-1)! + e^x E_{k+1}(x)` with
//! `ℓ_0 = e^x E₁(x)`. In terms of it
//!
//! * `Φ(i, b) = 2^i [i! ln b + ℓ_i(b/2)]`, and
//! * `G^{3,0}_{2,3}(x | 1,1; 0,0,j+1) = ∫_x^∞ t^j e^{-t} ln(t/x) dt
//!   = e^{-x} Σ_k C(j,k) x^{j-k} ℓ_k(x)`.
//!
//! Both are sums of positive terms. The incomplete-gamma expansion of `Φ`
//! through the Meijer function alternates in sign and loses all precision
//! once `b` reaches a few tens, so it is kept only as a cross-check.

use super::expint::scaled_exp_integral_en;
use super::gamma::{digamma, ln_factorial, upper_incomplete_gamma};
use super::SignedLogSum;
use crate::error::{Error, Result};

/// Evaluation route for [`phi_shifted_log`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhiForm {
    /// The positive recursion through `ℓ_i(b/2)`.
    #[default]
    Stable,
    /// `e^{b/2} Σ_j C(i,j) (-b)^{i-j} 2^j [G(b/2; j) + ln b · Γ(j+1, b/2)]`.
    MeijerExpansion,
    /// The collapsed double sum
    /// `Σ_j Σ_k (-1)^i C(i,j) (2/b)^j [e^{b/2} G(b/2; j) + ln b · C(j,k) (j-k)! (b/2)^k]`
    /// as it is commonly printed. It coincides with the other forms only at
    /// `i = 0` and is retained to document that.
    CollapsedPrinted,
}

/// `[ℓ_0(x), …, ℓ_{k_max}(x)]` for `x > 0`.
pub fn log_weighted_moments(k_max: usize, x: f64) -> Result<Vec<f64>> {
    if !(x > 0.0) {
        return Err(Error::domain("log_weighted_moment", format!("requires x > 0, got {x}")));
    }
    let mut out = Vec::with_capacity(k_max + 1);
    let mut reduced = scaled_exp_integral_en(1, x)?; // ℓ_k / k!
    out.push(reduced);
    for k in 1..=k_max {
        reduced += scaled_exp_integral_en(k as u32 + 1, x)?;
        out.push(reduced * ln_factorial(k).exp());
    }
    Ok(out)
}

fn ln_binomial(n: usize, k: usize) -> f64 {
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// `G^{3,0}_{2,3}(x | 1, 1; 0, 0, j+1)` for `x > 0`.
pub fn meijer_g_3023(j: usize, x: f64) -> Result<f64> {
    let ell = log_weighted_moments(j, x)?;
    let mut acc = SignedLogSum::new();
    for (k, &l) in ell.iter().enumerate() {
        acc.add_ln(false, ln_binomial(j, k) + (j - k) as f64 * x.ln() + l.ln());
    }
    let ln = acc.ln_abs() - x;
    Ok(if ln < -745.0 { 0.0 } else { ln.exp() })
}

/// `Φ(i, b) = ½ ∫₀^∞ ln(x + b) x^i exp(-x/2) dx` for `b ≥ 0`.
pub fn phi_shifted_log(i: usize, b: f64, form: PhiForm) -> Result<f64> {
    if !(b >= 0.0) || !b.is_finite() {
        return Err(Error::domain("phi_shifted_log", format!("requires finite b >= 0, got {b}")));
    }
    let ln2i = i as f64 * std::f64::consts::LN_2;
    if b == 0.0 {
        // 2^i i! (ψ(i+1) + ln 2)
        return Ok((ln2i + ln_factorial(i)).exp() * (digamma(i as f64 + 1.0)? + std::f64::consts::LN_2));
    }
    match form {
        PhiForm::Stable => {
            let ell = log_weighted_moments(i, 0.5 * b)?;
            Ok(ln2i.exp() * (ln_factorial(i).exp() * b.ln() + ell[i]))
        }
        PhiForm::MeijerExpansion => {
            let half = 0.5 * b;
            let mut acc = SignedLogSum::new();
            for j in 0..=i {
                let inner = meijer_g_3023(j, half)? + b.ln() * upper_incomplete_gamma(j as f64 + 1.0, half)?;
                if inner == 0.0 {
                    continue;
                }
                let negative = ((i - j) % 2 == 1) ^ (inner < 0.0);
                acc.add_ln(
                    negative,
                    half + ln_binomial(i, j) + (i - j) as f64 * b.ln() + j as f64 * std::f64::consts::LN_2 + inner.abs().ln(),
                );
            }
            Ok(acc.value())
        }
        PhiForm::CollapsedPrinted => {
            let half = 0.5 * b;
            let sign = if i % 2 == 1 { -1.0 } else { 1.0 };
            let mut total = 0.0;
            for j in 0..=i {
                let g = half.exp() * meijer_g_3023(j, half)?;
                let pref = ln_binomial(i, j).exp() * (2.0 / b).powi(j as i32);
                for k in 0..=j {
                    let tail = b.ln() * ln_binomial(j, k).exp() * ln_factorial(j - k).exp() * half.powi(k as i32);
                    total += sign * pref * (g + tail);
                }
            }
            Ok(total)
        }
    }
}
