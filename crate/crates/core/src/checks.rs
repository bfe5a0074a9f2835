//! Series-versus-oracle comparisons for the special functions, shared by the
//! test suite and the command-line checker.
//!
//! Each row compares one evaluator against an independent reference over a
//! fixed grid and reports the largest error seen.

use crate::error::Result;
use crate::quad::integrate_semi_infinite;
use crate::specfun::{
    bessel_i, bessel_i0_truncated, bessel_k, exp_integral_en, hyp1f1, log_moment_ncx2, marcum_q1, marcum_q1_truncated,
    phi_shifted_log, LogMomentMode, MarcumMode, PhiForm, SeriesForm, TruncationOrders,
};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub name: &'static str,
    /// What is compared against what, and on which grid.
    pub detail: String,
    /// `"abs"` or `"rel"`.
    pub error_kind: &'static str,
    pub max_error: f64,
    pub tolerance: f64,
}

impl CheckRow {
    pub fn passed(&self) -> bool {
        self.max_error < self.tolerance
    }
}

fn linspace(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> + Clone {
    (0..n).map(move |k| a + (b - a) * k as f64 / (n - 1) as f64)
}

/// Largest `|Q̃₁ - Q₁|` of the depth-`order` series on `a ∈ [0,4]`, `b ∈ [0,6]`.
pub fn marcum_truncation_error(order: usize, form: SeriesForm) -> Result<f64> {
    let mut worst = 0.0f64;
    for a in linspace(0.0, 4.0, 17) {
        for b in linspace(0.0, 6.0, 25) {
            let exact = marcum_q1(a, b, MarcumMode::Exact)?;
            worst = worst.max((marcum_q1_truncated(a, b, order, form) - exact).abs());
        }
    }
    Ok(worst)
}

/// Largest relative error of the depth-`order` `I₀` series on `[0, 10]`.
pub fn bessel_i0_truncation_error(order: usize, form: SeriesForm) -> Result<f64> {
    let mut worst = 0.0f64;
    for x in linspace(0.0, 10.0, 101) {
        let exact = bessel_i(0.0, x)?;
        worst = worst.max((bessel_i0_truncated(x, order, form) / exact - 1.0).abs());
    }
    Ok(worst)
}

/// Largest relative error of the depth-`order` log-moment series against
/// quadrature, over the noncentralities and shifts met in practice.
pub fn log_moment_error(order: usize, form: SeriesForm) -> Result<f64> {
    let mut worst = 0.0f64;
    for &lambda in &[0.0, 1.0, 4.0, 9.4, 20.0] {
        for &b in &[0.0, 0.5, 5.0, 50.0] {
            let q = log_moment_ncx2(lambda, b, LogMomentMode::Quadrature)?;
            let s = log_moment_ncx2(lambda, b, LogMomentMode::Series { order, form })?;
            worst = worst.max(((s - q) / q).abs());
        }
    }
    Ok(worst)
}

fn max_rel(pairs: impl IntoIterator<Item = Result<(f64, f64)>>) -> Result<f64> {
    let mut worst = 0.0f64;
    for p in pairs {
        let (got, want) = p?;
        worst = worst.max(((got - want) / want).abs());
    }
    Ok(worst)
}

fn exact_function_rows() -> Result<Vec<CheckRow>> {
    let k_err = max_rel((0..6).flat_map(|n| [0.05, 1.0, 3.0, 12.0].map(move |x| (n as f64 + 0.3, x))).map(|(nu, x)| {
        let q = integrate_semi_infinite(
            |t| {
                let e = -x * t.cosh() + nu * t;
                if e < -745.0 { 0.0 } else { 0.5 * (e.exp() + (-x * t.cosh() - nu * t).exp()) }
            },
            1e-12,
        )?;
        Ok((bessel_k(nu, x)?, q))
    }))?;
    let en_err = max_rel((1..6u32).flat_map(|n| [0.01, 0.7, 4.0, 30.0].map(move |x| (n, x))).map(|(n, x)| {
        let q = integrate_semi_infinite(|t| (-x * (1.0 + t)).exp() * (1.0 + t).powi(-(n as i32)), 1e-12)?;
        Ok((exp_integral_en(n, x)?, q))
    }))?;
    let f_err = max_rel([0.4f64, 2.0, 9.0].map(|x| {
        // ₁F₁(1; 3; x) = 2 ∫₀¹ e^{xt}(1-t) dt
        let closed = 2.0 * (x.exp() - 1.0 - x) / (x * x);
        Ok((hyp1f1(1.0, 3.0, x)?, closed))
    }))?;
    let phi_err = max_rel((0..=10).flat_map(|i| [0.0, 1.0, 10.0, 137.5].map(move |b| (i, b))).map(|(i, b)| {
        let q = integrate_semi_infinite(|x| 0.5 * (x + b).ln() * x.powi(i) * (-0.5 * x).exp(), 1e-12)?;
        Ok((phi_shifted_log(i as usize, b, PhiForm::Stable)?, q))
    }))?;
    Ok(vec![
        CheckRow {
            name: "bessel_k",
            detail: "K_ν(x) vs ∫ e^{-x cosh t} cosh νt dt, ν ∈ [0.3, 5.3], x ∈ [0.05, 12]".into(),
            error_kind: "rel",
            max_error: k_err,
            tolerance: 1e-8,
        },
        CheckRow {
            name: "exp_integral_en",
            detail: "E_n(x) vs quadrature, n ≤ 5, x ∈ [0.01, 30]".into(),
            error_kind: "rel",
            max_error: en_err,
            tolerance: 1e-8,
        },
        CheckRow {
            name: "hyp1f1",
            detail: "1F1(1; 3; x) vs elementary closed form".into(),
            error_kind: "rel",
            max_error: f_err,
            tolerance: 1e-10,
        },
        CheckRow {
            name: "phi_shifted_log",
            detail: "Φ(i, b) vs quadrature, i ≤ 10, b ∈ [0, 137.5]".into(),
            error_kind: "rel",
            max_error: phi_err,
            tolerance: 1e-8,
        },
    ])
}

/// The full suite with every series at depth `order` in the weighted form.
pub fn specfun_report(order: usize) -> Result<Vec<CheckRow>> {
    specfun_report_with(&TruncationOrders::uniform(order))
}

/// The full suite: the Marcum series at depth `orders.d`, the Bessel and
/// log-moment series at depth `orders.r`, all in `orders.form`.
pub fn specfun_report_with(orders: &TruncationOrders) -> Result<Vec<CheckRow>> {
    let TruncationOrders { d, r, form, .. } = *orders;
    let label = match form {
        SeriesForm::Weighted => "weighted",
        SeriesForm::Taylor => "Taylor",
    };
    let mut rows = vec![
        CheckRow {
            name: "marcum_truncation",
            detail: format!("{label} Q1 series, D={d}, vs exact Q1 on a∈[0,4], b∈[0,6]"),
            error_kind: "abs",
            max_error: marcum_truncation_error(d, form)?,
            tolerance: 1e-3,
        },
        CheckRow {
            name: "bessel_i0_truncation",
            detail: format!("{label} I0 series, R={r}, vs I0 on [0,10]"),
            error_kind: "rel",
            max_error: bessel_i0_truncation_error(r, form)?,
            tolerance: 1e-3,
        },
        CheckRow {
            name: "log_moment",
            detail: format!("{label} g1/g2 series, R={r}, vs quadrature"),
            error_kind: "rel",
            max_error: log_moment_error(r, form)?,
            tolerance: 1e-2,
        },
    ];
    rows.extend(exact_function_rows()?);
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_rows_pass() {
        for row in exact_function_rows().unwrap() {
            assert!(row.passed(), "{row:?}");
        }
    }

    #[test]
    fn unit_weight_series_converge() {
        assert!(bessel_i0_truncation_error(25, SeriesForm::Taylor).unwrap() < 1e-9);
        assert!(marcum_truncation_error(60, SeriesForm::Taylor).unwrap() < 1e-9);
        assert!(log_moment_error(120, SeriesForm::Taylor).unwrap() < 1e-8);
    }

    #[test]
    fn weighted_errors_shrink_with_depth() {
        let e: Vec<f64> = [5, 10, 25].iter().map(|&n| marcum_truncation_error(n, SeriesForm::Weighted).unwrap()).collect();
        assert!(e[0] > e[1] && e[1] > e[2]);
        let e: Vec<f64> = [5, 10, 25].iter().map(|&n| bessel_i0_truncation_error(n, SeriesForm::Weighted).unwrap()).collect();
        assert!(e[0] > e[1] && e[1] > e[2]);
    }
}
