/// Sum of signed terms supplied as `(sign, ln |term|)`.
///
/// The running total is stored relative to the largest magnitude seen so far,
/// so terms whose magnitudes individually overflow `f64` can still be added as
/// long as the final result is representable.
#[derive(Debug, Clone, Copy)]
pub struct SignedLogSum {
    ln_scale: f64,
    scaled: f64,
    terms: usize,
}

impl Default for SignedLogSum {
    fn default() -> Self {
        Self::new()
    }
}

impl SignedLogSum {
    pub const fn new() -> Self {
        Self { ln_scale: f64::NEG_INFINITY, scaled: 0.0, terms: 0 }
    }

    /// Adds `sign * exp(ln_abs)`. A `ln_abs` of negative infinity is a zero
    /// term and is ignored.
    pub fn add_ln(&mut self, negative: bool, ln_abs: f64) {
        self.terms += 1;
        if ln_abs == f64::NEG_INFINITY {
            return;
        }
        if ln_abs > self.ln_scale {
            self.scaled *= (self.ln_scale - ln_abs).exp();
            self.ln_scale = ln_abs;
        }
        let t = (ln_abs - self.ln_scale).exp();
        self.scaled += if negative { -t } else { t };
    }

    pub fn add(&mut self, x: f64) {
        if x != 0.0 {
            self.add_ln(x < 0.0, x.abs().ln());
        } else {
            self.terms += 1;
        }
    }

    pub fn terms(&self) -> usize {
        self.terms
    }

    /// `ln |sum|`; negative infinity for an exactly cancelling or empty sum.
    pub fn ln_abs(&self) -> f64 {
        if self.scaled == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.ln_scale + self.scaled.abs().ln()
        }
    }

    pub fn is_negative(&self) -> bool {
        self.scaled < 0.0
    }

    /// The sum as a plain float; infinite if it exceeds `f64` range.
    pub fn value(&self) -> f64 {
        if self.scaled == 0.0 {
            0.0
        } else {
            self.scaled * self.ln_scale.exp()
        }
    }

    /// `ln` of the largest-magnitude term relative to the final sum, a crude
    /// measure of cancellation.
    pub fn cancellation_digits(&self) -> f64 {
        if self.scaled == 0.0 {
            f64::INFINITY
        } else {
            -self.scaled.abs().log10()
        }
    }
}
