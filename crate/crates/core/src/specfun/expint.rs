//! Generalized exponential integrals `E_n(x) = ∫₁^∞ e^{-xt} t^{-n} dt`.

use super::gamma::EULER_GAMMA;
use crate::error::{Error, Result};

const EPS: f64 = 1e-16;
const MAX_ITER: usize = 10_000;

/// `e^x E_n(x)`, finite for all `x > 0` (and `x = 0` when `n ≥ 2`).
pub fn scaled_exp_integral_en(n: u32, x: f64) -> Result<f64> {
    if !(x >= 0.0) || (x == 0.0 && n <= 1) || !x.is_finite() {
        return Err(Error::domain("exp_integral_en", format!("E_{n}({x}) undefined")));
    }
    if n == 0 {
        return Ok(1.0 / x);
    }
    if x == 0.0 {
        return Ok(1.0 / (n - 1) as f64);
    }
    let nf = n as f64;
    if x > 1.0 {
        // Modified Lentz evaluation of the continued fraction.
        let mut b = x + nf;
        let mut c = 1.0 / 1e-300;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..=MAX_ITER {
            let an = -(i as f64) * (nf - 1.0 + i as f64);
            b += 2.0;
            d = 1.0 / (an * d + b);
            c = b + an / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).abs() < EPS {
                return Ok(h);
            }
        }
        Err(Error::domain("exp_integral_en", format!("continued fraction failed at x={x}")))
    } else {
        let nm1 = n - 1;
        let mut ans = if nm1 != 0 { 1.0 / nm1 as f64 } else { -x.ln() - EULER_GAMMA };
        let mut fact = 1.0;
        for i in 1..=MAX_ITER {
            fact *= -x / i as f64;
            let del = if i as u32 != nm1 {
                -fact / (i as f64 - nm1 as f64)
            } else {
                let psi = -EULER_GAMMA + (1..=nm1).map(|k| 1.0 / k as f64).sum::<f64>();
                fact * (-x.ln() + psi)
            };
            ans += del;
            if del.abs() < ans.abs() * EPS {
                return Ok(ans * x.exp());
            }
        }
        Err(Error::domain("exp_integral_en", format!("series failed at x={x}")))
    }
}

pub fn exp_integral_en(n: u32, x: f64) -> Result<f64> {
    Ok(scaled_exp_integral_en(n, x)? * (-x).exp())
}

/// Exponential integral `E₁(x)` for `x > 0`.
pub fn exp_integral_e1(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain("exp_integral_e1", format!("requires x > 0, got {x}")));
    }
    exp_integral_en(1, x)
}
