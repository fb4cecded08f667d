//! Imaginary error function.
//!
//! `erfi(x) = (2/√π) Σ_{k≥0} x^{2k+1} / (k! (2k+1))`, summed directly from its
//! Maclaurin series. Every term has the sign of `x`, so the sum has no
//! cancellation and stays accurate to a few ulps across the clamped domain.

use crate::error::{Error, Result};

const TWO_OVER_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

/// erfi(1/√2), the normalizer used by the tuner's decision rule.
pub const ERFI_INV_SQRT2: f64 = 0.953_438_269_251_260_8;

const MAX_TERMS: usize = 400;

/// Domain of evaluation; arguments beyond `clamp_bound` saturate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErfiDomain {
    clamp_bound: f64,
}

impl Default for ErfiDomain {
    fn default() -> Self {
        Self { clamp_bound: 6.0 }
    }
}

impl ErfiDomain {
    pub fn new(clamp_bound: f64) -> Result<Self> {
        if !(clamp_bound > 0.0) || !series(clamp_bound).is_finite() {
            return Err(Error::Config(format!(
                "erfi clamp bound must be positive with finite erfi, got {clamp_bound}"
            )));
        }
        Ok(Self { clamp_bound })
    }

    pub fn clamp_bound(&self) -> f64 {
        self.clamp_bound
    }

    pub fn erfi(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::InvalidArgument(format!("erfi of non-finite {x}")));
        }
        Ok(series(x.clamp(-self.clamp_bound, self.clamp_bound)))
    }

    /// `erfi(x) / erfi(1/√2)`.
    pub fn erfi_norm(&self, x: f64) -> Result<f64> {
        Ok(self.erfi(x)? / ERFI_INV_SQRT2)
    }

    /// Largest magnitude `erfi` returns on this domain.
    pub fn saturation(&self) -> f64 {
        series(self.clamp_bound)
    }
}

/// erfi on the default domain (clamped to ±6).
pub fn erfi(x: f64) -> Result<f64> {
    ErfiDomain::default().erfi(x)
}

/// erfi(x) / erfi(1/√2) on the default domain.
pub fn erfi_norm(x: f64) -> Result<f64> {
    ErfiDomain::default().erfi_norm(x)
}

fn series(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let x2 = x * x;
    // power_k = x^{2k+1} / k!
    let mut power = x;
    let mut sum = x;
    for k in 1..MAX_TERMS {
        power *= x2 / k as f64;
        let term = power / (2 * k + 1) as f64;
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    TWO_OVER_SQRT_PI * sum
}
