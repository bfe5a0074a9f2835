//! Lower bound on the average secrecy rate,
//! `C_LB = [ln(1 + e^{T₁}) - ln(1 + T₂)]⁺ / (2 ln 2)`,
//! with `T₁` a bound on `E{ln γ_AB}` and `T₂ ≈ E{γ_E^(1)} + E{γ_E^(2)}`.
//!
//! Since `γ_AB = (1-β)P_a L_au S_au S_ub / ((1-β+ζ)N₀ (S_ub + c))` with
//! `c = (1-β)/(ηβ(1-β+ζ)L_ub)`, the log-mean splits into log-moments of the
//! individual gains. Each unit-mean gain is `S = X / (2(1+K))` with `X` a
//! noncentral χ² of two degrees of freedom and noncentrality `λ = 2K`, so
//! `E{ln S} = g₁(λ) - ln 2(1+K)` and `E{ln(S + c)} = g₂(λ, 2(1+K)c) - ln 2(1+K)`.
//! [`LogMeanForm::Verbatim`] uses `g₁(λ_au) + g₁(λ_ub) - g₂(λ_ub, c)` without
//! these offsets; [`LogMeanForm::ScaleCorrected`] includes them, which makes
//! `T₁` equal to `E{ln γ_AB}` up to the series truncation.

use crate::channel::LinkSet;
use crate::error::{Error, Result};
use crate::protocol::ProtocolConfig;
use crate::specfun::{g1_series, g2_series, scaled_exp_integral_en, TruncationOrders};

/// Noncentralities `λ_ij = 2K_ij` of the χ² representation of each relay link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoncentralityParams {
    pub lambda_au: f64,
    /// Shared by both directions of the relay–Bob link.
    pub lambda_ub: f64,
    pub lambda_ue: f64,
}

impl NoncentralityParams {
    pub fn from_links(links: &LinkSet) -> Self {
        Self {
            lambda_au: 2.0 * links.au.k_factor,
            lambda_ub: 2.0 * links.ub.k_factor,
            lambda_ue: 2.0 * links.ue.k_factor,
        }
    }
}

/// How `T₁` treats the unit-mean normalization of the gains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogMeanForm {
    /// `ln((1-β)P_aL_au/((1-β+ζ)N₀)) + g₁(λ_au) + g₁(λ_ub) - g₂(λ_ub, c)`.
    #[default]
    Verbatim,
    /// Adds `-ln 2(1+K_au)` and evaluates `g₂` at the rescaled shift
    /// `2(1+K_ub)c`; the `ln 2(1+K_ub)` offsets of the last two terms cancel.
    ScaleCorrected,
}

/// `E{γ_E^(1)} = (P_a/P_b)(L_ae/L_be) e^x E₁(x)` with `x = N₀/(P_b L_be)`.
pub fn mean_gamma_eve_phase1(cfg: &ProtocolConfig, links: &LinkSet) -> Result<f64> {
    let (pa, pb) = (cfg.source_power(), cfg.jamming_power());
    if !(pb > 0.0) {
        return Err(Error::domain("mean_gamma_eve_phase1", "needs a positive jamming power"));
    }
    let (l_ae, l_be) = (links.ae.large_scale_gain, links.be.large_scale_gain);
    let x = cfg.noise_power / (pb * l_be);
    Ok(pa / pb * l_ae / l_be * scaled_exp_integral_en(1, x)?)
}

/// The moment approximation of `E{γ_E^(2)}` obtained by replacing each gain
/// by its χ² mean `λ + 2`:
///
/// `ηβ(1-β)P_a(λ_au+2)(λ_ue+2) / [ηβ(1-β)P_b(λ_ub+2)(λ_ue+2) + ηβ(1-β+ζ)(λ_ue+2)N₀ + (1-β)N₀]`.
///
/// Large-scale gains do not appear.
pub fn mean_gamma_eve_phase2_approx(cfg: &ProtocolConfig, nc: &NoncentralityParams) -> f64 {
    let (pa, pb) = (cfg.source_power(), cfg.jamming_power());
    let eb = cfg.eta * cfg.beta;
    let ob = 1.0 - cfg.beta;
    let (m_au, m_ub, m_ue) = (nc.lambda_au + 2.0, nc.lambda_ub + 2.0, nc.lambda_ue + 2.0);
    let n0 = cfg.noise_power;
    eb * ob * pa * m_au * m_ue / (eb * ob * pb * m_ub * m_ue + eb * (ob + cfg.zeta) * m_ue * n0 + ob * n0)
}

/// All intermediate quantities of the bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsrBound {
    pub t1: f64,
    pub t2: f64,
    pub mean_gamma_eve1: f64,
    pub mean_gamma_eve2: f64,
    /// The bracket before the positive-part clamp, in bits/s/Hz.
    pub raw: f64,
    /// `max(raw, 0)`.
    pub value: f64,
}

/// `ln(1 + e^x)` without overflow.
fn softplus(x: f64) -> f64 {
    if x > 35.0 {
        x + (-x).exp()
    } else {
        x.exp().ln_1p()
    }
}

pub fn asr_lower_bound(
    cfg: &ProtocolConfig,
    links: &LinkSet,
    orders: &TruncationOrders,
    form: LogMeanForm,
) -> Result<AsrBound> {
    orders.validate()?;
    if !(cfg.beta > 0.0 && cfg.beta < 1.0) || !(cfg.lambda > 0.0 && cfg.lambda < 1.0) {
        return Err(Error::domain(
            "asr_lower_bound",
            format!("requires 0 < lambda, beta < 1; got lambda={} beta={}", cfg.lambda, cfg.beta),
        ));
    }
    if !(cfg.total_power > 0.0) {
        return Err(Error::domain("asr_lower_bound", "needs a positive power budget"));
    }
    let nc = NoncentralityParams::from_links(links);
    let (l_au, l_ub) = (links.au.large_scale_gain, links.ub.large_scale_gain);
    let (k_au, k_ub) = (links.au.k_factor, links.ub.k_factor);
    let ob = 1.0 - cfg.beta;
    let shift = ob / (cfg.eta * cfg.beta * (ob + cfg.zeta) * l_ub);
    let (order, sf) = (orders.r, orders.form);

    let base = (ob * cfg.source_power() * l_au / ((ob + cfg.zeta) * cfg.noise_power)).ln();
    let g_au = g1_series(nc.lambda_au, order, sf)?;
    let g_ub = g1_series(nc.lambda_ub, order, sf)?;
    let t1 = match form {
        LogMeanForm::Verbatim => base + g_au + g_ub - g2_series(nc.lambda_ub, shift, order, sf)?,
        LogMeanForm::ScaleCorrected => {
            base + g_au - (2.0 * (1.0 + k_au)).ln() + g_ub
                - g2_series(nc.lambda_ub, 2.0 * (1.0 + k_ub) * shift, order, sf)?
        }
    };
    let mean_gamma_eve1 = mean_gamma_eve_phase1(cfg, links)?;
    let mean_gamma_eve2 = mean_gamma_eve_phase2_approx(cfg, &nc);
    let t2 = mean_gamma_eve1 + mean_gamma_eve2;
    let raw = (softplus(t1) - t2.ln_1p()) / (2.0 * std::f64::consts::LN_2);
    if !raw.is_finite() {
        return Err(Error::Overflow { function: "asr_lower_bound", x: t1 });
    }
    Ok(AsrBound { t1, t2, mean_gamma_eve1, mean_gamma_eve2, raw, value: raw.max(0.0) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{build_links, squared_rician_pdf};
    use crate::geometry::{Environment, NetworkGeometry};
    use crate::quad::integrate_semi_infinite;
    use crate::specfun::{exp_integral_e1, SeriesForm};
    use approx::assert_relative_eq;

    fn links() -> LinkSet {
        build_links(&NetworkGeometry::default(), &Environment::default()).unwrap()
    }

    fn mean_of(k: f64, f: impl Fn(f64) -> f64) -> f64 {
        integrate_semi_infinite(|s| if s == 0.0 { 0.0 } else { f(s) * squared_rician_pdf(s, k).unwrap() }, 1e-11)
            .unwrap()
    }

    #[test]
    fn scale_corrected_t1_is_the_log_mean() {
        let links = links();
        let orders = TruncationOrders::uniform(80).with_form(SeriesForm::Taylor);
        for &(lambda, beta) in &[(0.5, 0.5), (0.8, 0.3)] {
            let cfg = ProtocolConfig::default().with_split(lambda, beta);
            let ob = 1.0 - beta;
            let c = ob / (cfg.eta * beta * (ob + cfg.zeta) * links.ub.large_scale_gain);
            let expected = (ob * cfg.source_power() * links.au.large_scale_gain / ((ob + cfg.zeta) * cfg.noise_power)).ln()
                + mean_of(links.au.k_factor, f64::ln)
                + mean_of(links.ub.k_factor, f64::ln)
                - mean_of(links.ub.k_factor, |s| (s + c).ln());
            let b = asr_lower_bound(&cfg, &links, &orders, LogMeanForm::ScaleCorrected).unwrap();
            assert_relative_eq!(b.t1, expected, max_relative = 1e-8);
        }
    }

    #[test]
    fn verbatim_t1_differs_by_the_normalization() {
        let links = links();
        let cfg = ProtocolConfig::default();
        let orders = TruncationOrders::default();
        let v = asr_lower_bound(&cfg, &links, &orders, LogMeanForm::Verbatim).unwrap();
        let c = asr_lower_bound(&cfg, &links, &orders, LogMeanForm::ScaleCorrected).unwrap();
        assert!(v.t1 - c.t1 > (2.0 * (1.0 + links.au.k_factor)).ln());
        assert_eq!(v.t2, c.t2);
    }

    #[test]
    fn phase1_mean_against_quadrature() {
        let links = links();
        let cfg = ProtocolConfig::default();
        let (pa, pb) = (cfg.source_power(), cfg.jamming_power());
        let q = integrate_semi_infinite(
            |s| pa * links.ae.large_scale_gain / (pb * links.be.large_scale_gain * s + cfg.noise_power) * (-s).exp(),
            1e-12,
        )
        .unwrap();
        assert_relative_eq!(mean_gamma_eve_phase1(&cfg, &links).unwrap(), q, max_relative = 1e-10);
        let no_jam = ProtocolConfig { lambda: 1.0, ..Default::default() };
        assert!(mean_gamma_eve_phase1(&no_jam, &links).is_err());
    }

    #[test]
    fn phase1_mean_symmetric_toy() {
        let mut links = links();
        links.ae.large_scale_gain = 1.0;
        links.be.large_scale_gain = 1.0;
        let cfg = ProtocolConfig { total_power: 2.0, lambda: 0.5, noise_power: 1.0, ..Default::default() };
        let expected = 1f64.exp() * exp_integral_e1(1.0).unwrap();
        assert_relative_eq!(expected, 0.5963, epsilon = 1e-4);
        assert_relative_eq!(mean_gamma_eve_phase1(&cfg, &links).unwrap(), expected, max_relative = 1e-13);
        // small x: x e^x E₁(x) ≈ -x ln x
        for &n0 in &[1e-6, 1e-9] {
            let c = ProtocolConfig { noise_power: n0, ..cfg };
            let m = mean_gamma_eve_phase1(&c, &links).unwrap();
            assert_relative_eq!(n0 * m, -n0 * n0.ln(), max_relative = 0.05);
        }
    }

    #[test]
    fn phase2_approximation_matches_the_bound_form() {
        let cfg = ProtocolConfig::default();
        let nc = NoncentralityParams::from_links(&links());
        let eb = cfg.eta * cfg.beta;
        let alt = eb * cfg.source_power() * (nc.lambda_au + 2.0)
            / (eb * cfg.jamming_power() * (nc.lambda_ub + 2.0)
                + eb * (1.0 + cfg.zeta / (1.0 - cfg.beta)) * cfg.noise_power
                + cfg.noise_power / (nc.lambda_ue + 2.0));
        assert_relative_eq!(mean_gamma_eve_phase2_approx(&cfg, &nc), alt, max_relative = 1e-14);
    }

    #[test]
    fn clamps_at_vanishing_power() {
        let cfg = ProtocolConfig { total_power: 1e-12, ..Default::default() };
        let b = asr_lower_bound(&cfg, &links(), &TruncationOrders::default(), LogMeanForm::Verbatim).unwrap();
        assert_eq!(b.value, 0.0);
        assert!(b.raw <= 0.0);
        let bad = ProtocolConfig { lambda: 1.0, ..Default::default() };
        assert!(asr_lower_bound(&bad, &links(), &TruncationOrders::default(), LogMeanForm::Verbatim).is_err());
    }

    #[test]
    fn softplus_is_stable() {
        assert_relative_eq!(softplus(800.0), 800.0);
        assert_relative_eq!(softplus(0.0), 2f64.ln());
        assert!(softplus(-800.0) >= 0.0);
    }
}
