//! Uncertain autoregressive model `X_t = a₀ + Σ aᵢ X_{t−i} + ε`.
//!
//! Coefficients are least-squares estimates computed from a complete
//! orthogonal decomposition of the lag design matrix. When lag columns are affinely dependent (constant or
//! arithmetic-progression data) the minimum-norm solution is returned and the
//! model is flagged as rank deficient.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lstsq::{self, Matrix};
use crate::series::TimeSeries;
use crate::uncertainty::{check_open_unit, NormalUncertaintyDistribution};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UarModel {
    k: usize,
    a0: f64,
    a: Vec<f64>,
    rank_deficient: bool,
}

impl UarModel {
    /// Builds a model from known coefficients; `lags` holds `a₁…a_k`.
    pub fn new(a0: f64, lags: Vec<f64>) -> Result<Self> {
        if lags.is_empty() {
            return Err(Error::InvalidParameter("order k must be at least 1".into()));
        }
        if !a0.is_finite() || lags.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter(
                "coefficients must be finite".into(),
            ));
        }
        Ok(Self {
            k: lags.len(),
            a0,
            a: lags,
            rank_deficient: false,
        })
    }

    pub fn order(&self) -> usize {
        self.k
    }

    pub fn intercept(&self) -> f64 {
        self.a0
    }

    pub fn lags(&self) -> &[f64] {
        &self.a
    }

    pub fn is_rank_deficient(&self) -> bool {
        self.rank_deficient
    }

    /// One-step prediction `a₀ + Σ aᵢ X_{t−i}` from the observations preceding `t`.
    ///
    /// `history` must hold at least `k` values; its last entry is `X_{t−1}`.
    pub fn predict_next(&self, history: &[f64]) -> f64 {
        debug_assert!(history.len() >= self.k);
        let n = history.len();
        self.a
            .iter()
            .enumerate()
            .fold(self.a0, |acc, (i, ai)| acc + ai * history[n - 1 - i])
    }

    /// Sum of squared residuals over `t = k+1…n`.
    pub fn sse(&self, values: &[f64]) -> f64 {
        (self.k..values.len())
            .map(|t| {
                let r = values[t] - self.predict_next(&values[..t]);
                r * r
            })
            .sum()
    }
}

/// Least-squares fit of a UAR(`k`) model to `series`.
pub fn fit(series: &TimeSeries, k: usize) -> Result<UarModel> {
    fit_values(series.values(), k)
}

pub(crate) fn fit_values(values: &[f64], k: usize) -> Result<UarModel> {
    if k == 0 {
        return Err(Error::InvalidParameter("order k must be at least 1".into()));
    }
    let n = values.len();
    if n < k + 2 {
        return Err(Error::InsufficientObservations {
            needed: k + 2,
            got: n,
        });
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidSeries("non-finite observation".into()));
    }

    let design = Matrix::from_fn(
        n - k,
        k + 1,
        |r, c| {
            if c == 0 {
                1.0
            } else {
                values[k + r - c]
            }
        },
    );
    let sol = lstsq::solve(&design, &values[k..]);
    let coef = sol.x;

    Ok(UarModel {
        k,
        a0: coef[0],
        a: coef.iter().skip(1).copied().collect(),
        rank_deficient: sol.rank < k + 1,
    })
}

/// Residuals `ε_t = X_t − â₀ − Σ âᵢ X_{t−i}` for `t = k+1…n`, in index order.
pub fn residuals(series: &TimeSeries, model: &UarModel) -> Result<Vec<f64>> {
    let values = series.values();
    if values.len() <= model.k {
        return Err(Error::InsufficientObservations {
            needed: model.k + 1,
            got: values.len(),
        });
    }
    Ok((model.k..values.len())
        .map(|t| values[t] - model.predict_next(&values[..t]))
        .collect())
}

/// Sample estimate of the disturbance term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisturbanceEstimate {
    pub e_hat: f64,
    pub sigma_hat: f64,
    pub count: usize,
    /// Divisor applied to the sum of squared deviations.
    pub divisor: f64,
}

impl DisturbanceEstimate {
    /// `N(ê, σ̂)`; fails when `σ̂ = 0`.
    pub fn distribution(&self) -> Result<NormalUncertaintyDistribution> {
        NormalUncertaintyDistribution::new(self.e_hat, self.sigma_hat)
    }
}

/// Mean and dispersion of the residuals, with the residual count as divisor.
pub fn estimate_disturbance(residuals: &[f64]) -> Result<DisturbanceEstimate> {
    estimate_disturbance_with_divisor(residuals, residuals.len() as f64)
}

/// Same as [`estimate_disturbance`] but with an explicit variance divisor.
pub fn estimate_disturbance_with_divisor(
    residuals: &[f64],
    divisor: f64,
) -> Result<DisturbanceEstimate> {
    if residuals.len() < 2 {
        return Err(Error::InsufficientResiduals {
            needed: 2,
            got: residuals.len(),
        });
    }
    if !(divisor > 0.0 && divisor.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "variance divisor must be positive, got {divisor}"
        )));
    }
    let m = residuals.len() as f64;
    let e_hat = residuals.iter().sum::<f64>() / m;
    let ss: f64 = residuals.iter().map(|r| (r - e_hat).powi(2)).sum();
    Ok(DisturbanceEstimate {
        e_hat,
        sigma_hat: (ss / divisor).sqrt(),
        count: residuals.len(),
        divisor,
    })
}

/// Predicted uncertain variable `X̂_{n+1}` with its expected value and interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForecastResult {
    pub distribution: NormalUncertaintyDistribution,
    pub point: f64,
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
}

/// One-step-ahead forecast `N(μ̂, σ̂)` with `μ̂ = â₀ + Σ âᵢ X_{n+1−i} + ê`.
pub fn forecast(
    series: &TimeSeries,
    model: &UarModel,
    disturbance: &DisturbanceEstimate,
    level: f64,
) -> Result<ForecastResult> {
    check_open_unit("level", level)?;
    let values = series.values();
    if values.len() < model.k {
        return Err(Error::InsufficientObservations {
            needed: model.k,
            got: values.len(),
        });
    }
    let mu = model.predict_next(values) + disturbance.e_hat;
    let distribution = NormalUncertaintyDistribution::new(mu, disturbance.sigma_hat)?;
    let (lower, upper) = distribution.confidence_interval(level)?;
    Ok(ForecastResult {
        point: distribution.expected_value(),
        distribution,
        lower,
        upper,
        level,
    })
}
