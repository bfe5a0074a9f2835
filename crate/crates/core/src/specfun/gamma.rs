//! Thin, domain-checked wrappers over `statrs` for the gamma family.

use statrs::function::gamma as sg;

use crate::error::{Error, Result};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn is_pole(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

pub fn gamma(x: f64) -> Result<f64> {
    if is_pole(x) {
        return Err(Error::domain("gamma", format!("pole at {x}")));
    }
    Ok(sg::gamma(x))
}

/// `ln |Γ(x)|` for `x > 0`; this is the primitive behind every series weight.
pub fn ln_gamma(x: f64) -> f64 {
    sg::ln_gamma(x)
}

/// `ln n!`, exact table lookup for small `n`.
pub fn ln_factorial(n: usize) -> f64 {
    const TABLE_LEN: usize = 32;
    static TABLE: std::sync::OnceLock<[f64; TABLE_LEN]> = std::sync::OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = [0.0; TABLE_LEN];
        for i in 1..TABLE_LEN {
            t[i] = t[i - 1] + (i as f64).ln();
        }
        t
    });
    if n < TABLE_LEN {
        table[n]
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

pub fn digamma(x: f64) -> Result<f64> {
    if is_pole(x) {
        return Err(Error::domain("digamma", format!("pole at {x}")));
    }
    Ok(sg::digamma(x))
}

/// Unregularized upper incomplete gamma `Γ(a, x) = ∫_x^∞ t^(a-1) e^(-t) dt`.
pub fn upper_incomplete_gamma(a: f64, x: f64) -> Result<f64> {
    if !(a > 0.0) || !(x >= 0.0) {
        return Err(Error::domain(
            "upper_incomplete_gamma",
            format!("requires a > 0 and x >= 0, got a={a}, x={x}"),
        ));
    }
    sg::checked_gamma_ui(a, x).map_err(|e| Error::domain("upper_incomplete_gamma", e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn classical_values() {
        assert_relative_eq!(gamma(5.0).unwrap(), 24.0, epsilon = 1e-12);
        assert_relative_eq!(gamma(0.5).unwrap(), std::f64::consts::PI.sqrt(), epsilon = 1e-14);
        assert_relative_eq!(digamma(1.0).unwrap(), -EULER_GAMMA, epsilon = 1e-14);
        assert!(gamma(0.0).is_err());
        assert!(gamma(-3.0).is_err());
        assert!(digamma(-1.0).is_err());
        assert!(gamma(-0.5).is_ok());
    }

    #[test]
    fn integer_incomplete_gamma_finite_sum() {
        // Γ(n, x) = (n-1)! e^{-x} Σ_{k<n} x^k / k!
        let finite = |n: usize, x: f64| {
            let mut term = 1.0;
            let mut sum = 1.0;
            for k in 1..n {
                term *= x / k as f64;
                sum += term;
            }
            ln_factorial(n - 1).exp() * (-x).exp() * sum
        };
        assert_relative_eq!(upper_incomplete_gamma(3.0, 1.0).unwrap(), 5.0 * (-1f64).exp(), epsilon = 1e-13);
        for n in 1..12 {
            for x in [0.1, 1.0, 3.5, 10.0] {
                assert_relative_eq!(upper_incomplete_gamma(n as f64, x).unwrap(), finite(n, x), max_relative = 1e-11);
            }
        }
        assert!(upper_incomplete_gamma(0.0, 1.0).is_err());
    }

    #[test]
    fn factorial_table_matches_gamma() {
        for n in 0..60 {
            assert_relative_eq!(ln_factorial(n), ln_gamma(n as f64 + 1.0), epsilon = 1e-10, max_relative = 1e-13);
        }
    }
}
