//! Modified Bessel functions of real order.
//!
//! `I_ν` is summed from its power series (large arguments switch to the Hankel
//! asymptotic expansion). `K_ν` uses Temme's series for `x ≤ 2` and Steed's
//! continued fraction above, followed by the upward recurrence in order,
//! which is stable for `K`. Both are available in log form because the
//! closed-form metrics routinely combine `K_ν` of large order with tiny powers.

use std::f64::consts::PI;

use super::gamma::{ln_factorial, ln_gamma, EULER_GAMMA};
use super::{ln_series_weight, SeriesForm};
use crate::error::{Error, Result};

const LN_MAX: f64 = 709.78;
const LN_MIN: f64 = -745.0;
const K_ARG_FLOOR: f64 = 1e-300;

/// `ln I_ν(x)` for `ν ≥ 0`, `x ≥ 0`.
pub fn ln_bessel_i(nu: f64, x: f64) -> Result<f64> {
    if !(nu >= 0.0) || !(x >= 0.0) || !x.is_finite() {
        return Err(Error::domain("bessel_i", format!("requires nu >= 0, finite x >= 0; got nu={nu}, x={x}")));
    }
    if x == 0.0 {
        return Ok(if nu == 0.0 { 0.0 } else { f64::NEG_INFINITY });
    }
    if x > 30.0 && x > 2.0 * nu * nu {
        if let Some(v) = ln_bessel_i_hankel(nu, x) {
            return Ok(v);
        }
    }
    Ok(ln_bessel_i_series(nu, x))
}

fn ln_bessel_i_series(nu: f64, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = half * half;
    let mut ln_scale = nu * half.ln() - ln_gamma(nu + 1.0);
    let (mut sum, mut term) = (1.0f64, 1.0f64);
    let mut k = 0.0f64;
    loop {
        k += 1.0;
        term *= q / (k * (k + nu));
        sum += term;
        if sum > 1e280 {
            ln_scale += sum.ln();
            term /= sum;
            sum = 1.0;
        }
        if term < 1e-17 * sum && k > half {
            break;
        }
    }
    ln_scale + sum.ln()
}

/// Hankel expansion `I_ν(x) ~ e^x / √(2πx) Σ (-1)^k a_k(ν) / x^k`; `None`
/// if the asymptotic terms stop decreasing before reaching full precision.
fn ln_bessel_i_hankel(nu: f64, x: f64) -> Option<f64> {
    let mu = 4.0 * nu * nu;
    let (mut sum, mut term) = (1.0f64, 1.0f64);
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        let next = -term * (mu - odd * odd) / (k as f64 * 8.0 * x);
        if next.abs() >= term.abs() {
            return None;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            return Some(x - 0.5 * (2.0 * PI * x).ln() + sum.ln());
        }
    }
    None
}

pub fn bessel_i(nu: f64, x: f64) -> Result<f64> {
    let ln = ln_bessel_i(nu, x)?;
    if ln > LN_MAX {
        return Err(Error::Overflow { function: "bessel_i", x });
    }
    Ok(ln.exp())
}

/// Finite weighted series for `I₀`: `Σ_{r≤R} W_R(r) (x/2)^{2r} / (r!)²`.
pub fn bessel_i0_truncated(x: f64, order: usize, form: SeriesForm) -> f64 {
    let ln_q = 2.0 * (0.5 * x).ln();
    (0..=order)
        .map(|r| {
            let pow = if r == 0 { 0.0 } else { r as f64 * ln_q };
            (ln_series_weight(form, order, r) + pow - 2.0 * ln_factorial(r)).exp()
        })
        .sum()
}

/// `ln K_ν(x)` for real `ν` and `x > 0`.
pub fn ln_bessel_k(nu: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() || !nu.is_finite() {
        return Err(Error::domain("bessel_k", format!("requires finite x > 0, got nu={nu}, x={x}")));
    }
    if x < K_ARG_FLOOR {
        return Err(Error::Overflow { function: "bessel_k", x });
    }
    let nu = nu.abs();
    let nl = (nu + 0.5).floor();
    let mu = nu - nl;
    let (ln_scale, mut k_mu, mut k_mu1) = if x <= 2.0 { temme(mu, x) } else { steed(mu, x) };
    let mut ln_scale = ln_scale;
    let inv2 = 2.0 / x;
    for i in 1..=(nl as u64) {
        let next = (mu + i as f64) * inv2 * k_mu1 + k_mu;
        k_mu = k_mu1;
        k_mu1 = next;
        if k_mu1 > 1e250 {
            ln_scale += k_mu1.ln();
            k_mu /= k_mu1;
            k_mu1 = 1.0;
        }
    }
    Ok(ln_scale + k_mu.ln())
}

pub fn bessel_k(nu: f64, x: f64) -> Result<f64> {
    let ln = ln_bessel_k(nu, x)?;
    if ln > LN_MAX {
        return Err(Error::Overflow { function: "bessel_k", x });
    }
    Ok(if ln < LN_MIN { 0.0 } else { ln.exp() })
}

/// `1/Γ(1+μ)` and `1/Γ(1-μ)` combined as
/// `γ₁ = (1/Γ(1-μ) - 1/Γ(1+μ)) / (2μ)` and `γ₂ = (1/Γ(1-μ) + 1/Γ(1+μ)) / 2`,
/// for `|μ| ≤ 1/2`.
fn temme_gammas(mu: f64) -> (f64, f64) {
    if mu.abs() < 1e-3 {
        // Even/odd parts of the Taylor series of 1/Γ(1+μ).
        const C3: f64 = -0.655_878_071_520_253_8;
        const C4: f64 = -0.042_002_635_034_095_2;
        const C5: f64 = 0.166_538_611_382_291_5;
        const C6: f64 = -0.042_197_734_555_544_3;
        let m2 = mu * mu;
        let g1 = -(EULER_GAMMA + m2 * (C4 + m2 * C6));
        let g2 = 1.0 + m2 * (C3 + m2 * C5);
        (g1, g2)
    } else {
        let r_plus = 1.0 / statrs::function::gamma::gamma(1.0 + mu);
        let r_minus = 1.0 / statrs::function::gamma::gamma(1.0 - mu);
        ((r_minus - r_plus) / (2.0 * mu), 0.5 * (r_minus + r_plus))
    }
}

/// `K_μ(x)` and `K_{μ+1}(x)` for `x ≤ 2`, returned as `(ln scale, a, b)` with
/// the values equal to `a e^scale` and `b e^scale`.
fn temme(mu: f64, x: f64) -> (f64, f64, f64) {
    let x2 = 0.5 * x;
    let pimu = PI * mu;
    let fact = if pimu.abs() < 1e-15 { 1.0 } else { pimu / pimu.sin() };
    let d = -x2.ln();
    let e = mu * d;
    let fact2 = if e.abs() < 1e-15 { 1.0 } else { e.sinh() / e };
    let (g1, g2) = temme_gammas(mu);
    let gampl = g2 - mu * g1; // 1/Γ(1+μ)
    let gammi = g2 + mu * g1; // 1/Γ(1-μ)
    let mut ff = fact * (g1 * e.cosh() + g2 * fact2 * d);
    let mut sum = ff;
    let ee = e.exp();
    let mut p = 0.5 * ee / gampl;
    let mut q = 0.5 / (ee * gammi);
    let mut c = 1.0;
    let dd = x2 * x2;
    let mut sum1 = p;
    let mut i = 1.0;
    loop {
        ff = (i * ff + p + q) / (i * i - mu * mu);
        c *= dd / i;
        p /= i - mu;
        q /= i + mu;
        let del = c * ff;
        sum += del;
        sum1 += c * (p - i * ff);
        if del.abs() < sum.abs() * 1e-16 || i > 500.0 {
            break;
        }
        i += 1.0;
    }
    (0.0, sum, sum1 * 2.0 / x)
}

/// Steed's continued fraction for `x > 2`, in the same scaled form as
/// [`temme`].
fn steed(mu: f64, x: f64) -> (f64, f64, f64) {
    let a1 = 0.25 - mu * mu;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let (mut q1, mut q2) = (0.0f64, 1.0f64);
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    let mut i = 1.0;
    loop {
        a -= 2.0 * i;
        c = -a * c / (i + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-16 || i > 10_000.0 {
            break;
        }
        i += 1.0;
    }
    let ln_scale = 0.5 * (PI / (2.0 * x)).ln() - x - s.ln();
    (ln_scale, 1.0, (mu + x + 0.5 - a1 * h) / x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate_semi_infinite;
    use approx::assert_relative_eq;

    /// Direct power series with no rescaling, fine for moderate arguments.
    fn i_oracle(nu: f64, x: f64) -> f64 {
        (0..200)
            .map(|k| ((2.0 * k as f64 + nu) * (0.5 * x).ln() - ln_gamma(k as f64 + 1.0) - ln_gamma(k as f64 + nu + 1.0)).exp())
            .sum()
    }

    /// `K_ν(x) = ∫₀^∞ e^{-x cosh t} cosh(νt) dt`.
    fn k_oracle(nu: f64, x: f64) -> f64 {
        integrate_semi_infinite(
            |t| {
                let e = -x * t.cosh();
                if e < -745.0 { 0.0 } else { e.exp() * (nu * t).cosh() }
            },
            1e-13,
        )
        .unwrap()
    }

    #[test]
    fn i_values() {
        assert_eq!(bessel_i(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_i(1.0, 0.0).unwrap(), 0.0);
        assert_relative_eq!(bessel_i(0.0, 2.0).unwrap(), 2.279_585_302_336_067, max_relative = 1e-14);
        assert_relative_eq!(bessel_i(0.0, 2.0).unwrap(), i_oracle(0.0, 2.0), max_relative = 1e-14);
        for &nu in &[0.0, 0.5, 1.0, 3.0, 7.5, 20.0] {
            for &x in &[0.01, 0.7, 3.0, 12.0, 25.0, 40.0] {
                assert_relative_eq!(bessel_i(nu, x).unwrap(), i_oracle(nu, x), max_relative = 1e-12);
            }
        }
        assert!(bessel_i(-1.0, 1.0).is_err());
    }

    #[test]
    fn i_hankel_crossover_matches_series() {
        for &nu in &[0.0, 1.0, 2.5, 3.5] {
            for &x in &[31.0, 60.0, 150.0, 650.0] {
                let h = ln_bessel_i_hankel(nu, x).unwrap();
                assert_relative_eq!(h, ln_bessel_i_series(nu, x), max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn i_overflow_signalled_in_linear_form_only() {
        assert!(matches!(bessel_i(0.0, 800.0), Err(Error::Overflow { .. })));
        let ln = ln_bessel_i(0.0, 800.0).unwrap();
        assert_relative_eq!(ln, 800.0 - 0.5 * (2.0 * PI * 800.0).ln() + (1.0 + 1.0 / 6400.0f64).ln(), max_relative = 1e-9);
    }

    #[test]
    fn k_values() {
        assert_relative_eq!(bessel_k(0.5, 1.0).unwrap(), (PI / 2.0).sqrt() * (-1f64).exp(), max_relative = 1e-14);
        assert_relative_eq!(bessel_k(0.0, 1.0).unwrap(), 0.421_024_438_240_708_3, max_relative = 1e-13);
        assert_relative_eq!(bessel_k(0.0, 1.0).unwrap(), k_oracle(0.0, 1.0), max_relative = 1e-11);
        let asym = bessel_k(2.0, 50.0).unwrap() * 50f64.exp() * 50f64.sqrt();
        assert!((asym / (PI / 2.0).sqrt() - 1.0).abs() < 0.05);
        assert!(bessel_k(1.0, 0.0).is_err());
        assert!(matches!(bessel_k(1.0, 1e-301), Err(Error::Overflow { .. })));
    }

    #[test]
    fn k_against_integral() {
        for &nu in &[0.0, 0.3, 0.5, 1.0, 2.0, 4.7, 10.0] {
            for &x in &[0.05, 0.5, 1.9, 2.1, 5.0, 20.0] {
                assert_relative_eq!(bessel_k(nu, x).unwrap(), k_oracle(nu, x), max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn k_is_even_in_order() {
        for &nu in &[0.2, 1.0, 3.5, 12.0] {
            assert_eq!(ln_bessel_k(nu, 1.3).unwrap(), ln_bessel_k(-nu, 1.3).unwrap());
        }
    }

    #[test]
    fn temme_gammas_continuous_at_series_switch() {
        let (a1, b1) = temme_gammas(0.999e-3);
        let (a2, b2) = temme_gammas(1.001e-3);
        assert!((a1 - a2).abs() < 1e-8 && (b1 - b2).abs() < 1e-8);
        assert_eq!(temme_gammas(0.0), (-EULER_GAMMA, 1.0));
    }

    #[test]
    fn k_large_order_log_form() {
        // Small-argument law K_ν(x) ≈ Γ(ν)/2 (2/x)^ν.
        let nu = 60.0f64;
        let x = 1e-4f64;
        let expected = ln_gamma(nu) - 2f64.ln() + nu * (2.0 / x).ln();
        assert_relative_eq!(ln_bessel_k(nu, x).unwrap(), expected, max_relative = 1e-10);
        assert!(bessel_k(nu, x).is_err());
    }

    #[test]
    fn truncated_i0_taylor_converges() {
        for &x in &[0.0, 1.0, 5.0, 10.0] {
            let t = bessel_i0_truncated(x, 60, SeriesForm::Taylor);
            assert_relative_eq!(t, bessel_i(0.0, x).unwrap(), max_relative = 1e-13);
        }
        assert_eq!(bessel_i0_truncated(0.0, 25, SeriesForm::Weighted), 1.0);
    }
}
