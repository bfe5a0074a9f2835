//! Special functions used by the closed-form metrics.
//!
//! Every function comes in an exact flavour (adaptively terminated series,
//! continued fractions, or quadrature) and, where the closed forms call for
//! it, a finite weighted series. The weighted series replace each Taylor
//! coefficient of order `k` by `W_N(k) = Γ(N+k) N^(1-2k) / Γ(N-k+1)` times the
//! plain coefficient; [`SeriesForm::Taylor`] keeps unit weights instead and
//! serves as the convergent reference.

mod bessel;
mod confluent;
mod expint;
mod gamma;
mod logsum;
mod marcum;
mod meijer;
mod moment;

pub use bessel::{bessel_i, bessel_i0_truncated, bessel_k, ln_bessel_i, ln_bessel_k};
pub use confluent::{hyp1f1, ln_hyp1f1, whittaker_m};
pub use expint::{exp_integral_e1, exp_integral_en, scaled_exp_integral_en};
pub use gamma::{digamma, gamma, ln_factorial, ln_gamma, upper_incomplete_gamma, EULER_GAMMA};
pub use logsum::SignedLogSum;
pub use marcum::{marcum_q1, marcum_q1_truncated, MarcumMode};
pub use meijer::{log_weighted_moments, meijer_g_3023, phi_shifted_log, PhiForm};
pub use moment::{g1_series, g2_series, log_moment_ncx2, LogMomentMode};

use crate::error::{Error, Result};

/// Coefficient weighting for finite series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SeriesForm {
    /// Terms carry the weights `Γ(N+k) N^(1-2k) / Γ(N-k+1)`.
    #[default]
    Weighted,
    /// Plain Taylor partial sums (all weights equal to one).
    Taylor,
}

/// Depths of the three finite series in the closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncationOrders {
    /// Marcum-Q expansion depth.
    pub d: usize,
    /// Bessel-I / log-moment expansion depth.
    pub r: usize,
    /// Depth of the eavesdropper-link Bessel expansion.
    pub q: usize,
    pub form: SeriesForm,
}

impl Default for TruncationOrders {
    fn default() -> Self {
        Self::uniform(25)
    }
}

impl TruncationOrders {
    pub const fn uniform(n: usize) -> Self {
        Self { d: n, r: n, q: n, form: SeriesForm::Weighted }
    }

    pub fn new(d: usize, r: usize, q: usize) -> Result<Self> {
        let t = Self { d, r, q, form: SeriesForm::Weighted };
        t.validate()?;
        Ok(t)
    }

    pub const fn with_form(self, form: SeriesForm) -> Self {
        Self { form, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 || self.r == 0 || self.q == 0 {
            return Err(Error::Config(format!(
                "truncation orders must be at least 1, got D={} R={} Q={}",
                self.d, self.r, self.q
            )));
        }
        Ok(())
    }
}

/// Natural log of the weight attached to term `k` of an order-`n` series.
///
/// Always finite for `k <= n`; the weighted form is undefined past the
/// truncation depth, which callers never request.
pub fn ln_series_weight(form: SeriesForm, n: usize, k: usize) -> f64 {
    debug_assert!(k <= n, "weight index {k} past order {n}");
    match form {
        SeriesForm::Taylor => 0.0,
        // Both leading weights are exactly one; skip the rounding of lnΓ.
        SeriesForm::Weighted if k <= 1 => 0.0,
        SeriesForm::Weighted => {
            let (n, kf) = (n as f64, k as f64);
            ln_gamma(n + kf) + (1.0 - 2.0 * kf) * n.ln() - ln_gamma(n - kf + 1.0)
        }
    }
}
