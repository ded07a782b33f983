//! Normal uncertainty distribution.
//!
//! The distribution `N(e, σ)` has the closed-form uncertainty distribution
//!
//! ```text
//! ψ(z) = (1 + exp(π(e − z) / (√3 σ)))⁻¹
//! ```
//!
//! and its inverse `ψ⁻¹(α) = e + (σ√3/π) ln(α / (1 − α))`. Everything here is a
//! pure function of `(e, σ)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent arguments are clamped to this magnitude so that `cdf` saturates
/// to 0 or 1 instead of overflowing.
const EXP_CLAMP: f64 = 700.0;

/// `√3 / π`, the scale factor shared by the inverse distribution and the
/// confidence interval.
const SQRT3_OVER_PI: f64 = 1.732_050_807_568_877_2 / PI;

/// Normal uncertainty distribution with expected value `e` and dispersion `sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalUncertaintyDistribution {
    e: f64,
    sigma: f64,
}

impl NormalUncertaintyDistribution {
    /// Builds `N(e, sigma)`. A zero `sigma` describes a point mass and is
    /// rejected, as is any non-finite parameter.
    pub fn new(e: f64, sigma: f64) -> Result<Self> {
        if !e.is_finite() || !sigma.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "distribution parameters must be finite (e = {e}, sigma = {sigma})"
            )));
        }
        if sigma == 0.0 {
            return Err(Error::DegenerateDistribution);
        }
        if sigma < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "sigma must be positive, got {sigma}"
            )));
        }
        Ok(Self { e, sigma })
    }

    pub fn e(&self) -> f64 {
        self.e
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Uncertainty distribution `ψ(z)`, strictly increasing with `ψ(e) = 1/2`.
    pub fn cdf(&self, z: f64) -> f64 {
        let arg = (PI * (self.e - z) / (3f64.sqrt() * self.sigma)).clamp(-EXP_CLAMP, EXP_CLAMP);
        1.0 / (1.0 + arg.exp())
    }

    /// Inverse uncertainty distribution `ψ⁻¹(alpha)` for `alpha` in `(0, 1)`.
    pub fn inverse_cdf(&self, alpha: f64) -> Result<f64> {
        check_open_unit("alpha", alpha)?;
        Ok(self.e + self.sigma * SQRT3_OVER_PI * (alpha / (1.0 - alpha)).ln())
    }

    /// Half-width of the minimum-width interval `[a, b]` with `ψ(b) − ψ(a) ≥ level`.
    pub fn half_width(&self, level: f64) -> Result<f64> {
        check_open_unit("level", level)?;
        Ok(self.sigma * SQRT3_OVER_PI * ((1.0 + level) / (1.0 - level)).ln())
    }

    /// Minimum-width `level` confidence interval, centred on `e`.
    pub fn confidence_interval(&self, level: f64) -> Result<(f64, f64)> {
        let h = self.half_width(level)?;
        Ok((self.e - h, self.e + h))
    }

    pub fn expected_value(&self) -> f64 {
        self.e
    }
}

pub(crate) fn check_open_unit(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{name} must lie in (0, 1), got {value}"
        )))
    }
}
