//! Model adequacy and order selection.
//!
//! * [`uncertain_hypothesis_test`] checks whether residuals fit a normal
//!   uncertainty distribution by counting how many fall outside the band
//!   `[ψ⁻¹(α/2), ψ⁻¹(1 − α/2)]`.
//! * [`cross_validate`] picks the order by rolling-window one-step prediction
//!   error.
//! * [`ks_two_sample`] and [`split_residual_diagnostic`] are the probabilistic
//!   check that residuals from different stretches of the series do not look
//!   like one population.

use std::f64::consts::PI;
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::fit_values;
use crate::series::TimeSeries;
use crate::uncertainty::{check_open_unit, NormalUncertaintyDistribution};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisTestResult {
    pub alpha: f64,
    pub lower: f64,
    pub upper: f64,
    /// 1-based positions in the residual vector of values outside the band.
    pub outlier_indices: Vec<usize>,
    /// Smallest outlier count that rejects the model.
    pub critical_count: usize,
    pub critical_count_exceeded: bool,
    pub rejected: bool,
}

/// Rejects when strictly more than `alpha · m` of the `m` residuals fall
/// outside `[ψ⁻¹(α/2), ψ⁻¹(1 − α/2)]`.
pub fn uncertain_hypothesis_test(
    residuals: &[f64],
    dist: &NormalUncertaintyDistribution,
    alpha: f64,
) -> Result<HypothesisTestResult> {
    check_open_unit("alpha", alpha)?;
    if residuals.is_empty() {
        return Err(Error::InsufficientResiduals { needed: 1, got: 0 });
    }
    let lower = dist.inverse_cdf(alpha / 2.0)?;
    let upper = dist.inverse_cdf(1.0 - alpha / 2.0)?;
    let outlier_indices: Vec<usize> = residuals
        .iter()
        .enumerate()
        .filter(|(_, &z)| z < lower || z > upper)
        .map(|(i, _)| i + 1)
        .collect();

    let allowed = alpha * residuals.len() as f64;
    let critical_count = allowed.floor() as usize + 1;
    let exceeded = outlier_indices.len() as f64 > allowed;
    Ok(HypothesisTestResult {
        alpha,
        lower,
        upper,
        outlier_indices,
        critical_count,
        critical_count_exceeded: exceeded,
        rejected: exceeded,
    })
}

/// Per-window error used when averaging one-step predictions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CvMetric {
    #[default]
    Squared,
    Absolute,
}

impl CvMetric {
    fn apply(self, err: f64) -> f64 {
        match self {
            CvMetric::Squared => err * err,
            CvMetric::Absolute => err.abs(),
        }
    }
}

impl fmt::Display for CvMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CvMetric::Squared => "squared",
            CvMetric::Absolute => "absolute",
        })
    }
}

impl FromStr for CvMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "squared" => Ok(CvMetric::Squared),
            "absolute" => Ok(CvMetric::Absolute),
            other => Err(Error::InvalidParameter(format!(
                "unknown CV metric {other:?} (expected squared or absolute)"
            ))),
        }
    }
}

/// ATEs closer than this fraction of the metric at the data scale are ties.
const TIE_RELATIVE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub max_order: usize,
    pub train_length: usize,
    pub metric: CvMetric,
    /// Average test error for orders `1..=max_order`; `ate[0]` is order 1.
    pub ate: Vec<f64>,
    pub chosen_order: usize,
}

impl CvReport {
    pub fn ate_for(&self, order: usize) -> Option<f64> {
        order.checked_sub(1).and_then(|i| self.ate.get(i).copied())
    }
}

pub fn cross_validate(
    series: &TimeSeries,
    max_order: usize,
    train_length: usize,
) -> Result<CvReport> {
    cross_validate_with_metric(series, max_order, train_length, CvMetric::Squared)
}

/// Rolling-window cross-validation.
///
/// For every order `k ≤ max_order`, a window of `train_length` observations
/// slides forward one step at a time; a UAR(`k`) model fitted on the window
/// predicts the observation right after it. `ate[k]` averages the per-window
/// errors and the smallest order attaining the minimum is chosen.
pub fn cross_validate_with_metric(
    series: &TimeSeries,
    max_order: usize,
    train_length: usize,
    metric: CvMetric,
) -> Result<CvReport> {
    let values = series.values();
    let n = values.len();
    if max_order == 0 {
        return Err(Error::InvalidCvConfig(
            "max_order must be at least 1".into(),
        ));
    }
    if train_length <= max_order + 1 {
        return Err(Error::InvalidCvConfig(format!(
            "train_length ({train_length}) must exceed max_order + 1 ({})",
            max_order + 1
        )));
    }
    if n < train_length + 1 {
        return Err(Error::InvalidCvConfig(format!(
            "series has {n} observations, need at least train_length + 1 = {}",
            train_length + 1
        )));
    }

    let positions = n - train_length;
    let mut ate = Vec::with_capacity(max_order);
    for k in 1..=max_order {
        let mut total = 0.0;
        for start in 0..positions {
            let window = &values[start..start + train_length];
            let model = fit_values(window, k)?;
            let err = values[start + train_length] - model.predict_next(window);
            total += metric.apply(err);
        }
        ate.push(total / positions as f64);
    }

    // Differences below round-off of the data scale count as ties.
    let scale = values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let tie = TIE_RELATIVE * metric.apply(scale);
    let best = ate.iter().copied().fold(f64::INFINITY, f64::min);
    let chosen_order = ate.iter().position(|&v| v <= best + tie).unwrap_or(0) + 1;

    Ok(CvReport {
        max_order,
        train_length,
        metric,
        ate,
        chosen_order,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
    pub n_a: usize,
    pub n_b: usize,
}

/// Two-sample Kolmogorov–Smirnov test with the asymptotic p-value.
pub fn ks_two_sample(sample_a: &[f64], sample_b: &[f64]) -> Result<KsResult> {
    if sample_a.is_empty() || sample_b.is_empty() {
        return Err(Error::InsufficientSample);
    }
    if sample_a.iter().chain(sample_b).any(|v| v.is_nan()) {
        return Err(Error::InvalidParameter("samples contain NaN".into()));
    }
    let statistic = ks_statistic(sample_a, sample_b);
    let (m, n) = (sample_a.len() as f64, sample_b.len() as f64);
    let ne = m * n / (m + n);
    let lambda = (ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * statistic;
    Ok(KsResult {
        statistic,
        p_value: kolmogorov_q(lambda),
        n_a: sample_a.len(),
        n_b: sample_b.len(),
    })
}

/// `sup_z |F_a(z) − F_b(z)|`, evaluated after every distinct value.
fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let z = a[i].min(b[j]);
        while i < a.len() && a[i] <= z {
            i += 1;
        }
        while j < b.len() && b[j] <= z {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Kolmogorov survival function `Q(λ) = 2 Σ (−1)^{j−1} exp(−2 j² λ²)`.
///
/// Small arguments use the equivalent theta-function form, where the
/// alternating series converges too slowly.
fn kolmogorov_q(lambda: f64) -> f64 {
    const EPS: f64 = 1e-12;
    if lambda <= 0.0 {
        return 1.0;
    }
    let q = if lambda < 1.18 {
        let c = PI * PI / (8.0 * lambda * lambda);
        let mut sum = 0.0;
        for j in 1.. {
            let odd = (2 * j - 1) as f64;
            let term = (-odd * odd * c).exp();
            sum += term;
            if term < EPS {
                break;
            }
        }
        1.0 - (2.0 * PI).sqrt() / lambda * sum
    } else {
        let mut sum = 0.0;
        let mut sign = 1.0;
        for j in 1.. {
            let jf = j as f64;
            let term = (-2.0 * jf * jf * lambda * lambda).exp();
            sum += sign * term;
            if term < EPS {
                break;
            }
            sign = -sign;
        }
        2.0 * sum
    };
    q.clamp(0.0, 1.0)
}

/// Two 1-based inclusive ranges into a residual vector. Overlap is allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualSplit {
    pub first: RangeInclusive<usize>,
    pub second: RangeInclusive<usize>,
}

impl ResidualSplit {
    /// First half (`⌊m/2⌋` values) against the remainder.
    pub fn halves(m: usize) -> Self {
        let h = m / 2;
        Self {
            first: 1..=h,
            second: h + 1..=m,
        }
    }
}

impl FromStr for ResidualSplit {
    type Err = Error;

    /// Parses `"a-b,c-d"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSplit(format!("expected \"a-b,c-d\", got {s:?}"));
        let range = |part: &str| -> Result<RangeInclusive<usize>> {
            let (lo, hi) = part.trim().split_once('-').ok_or_else(bad)?;
            let lo = lo.trim().parse().map_err(|_| bad())?;
            let hi = hi.trim().parse().map_err(|_| bad())?;
            Ok(lo..=hi)
        };
        let (a, b) = s.split_once(',').ok_or_else(bad)?;
        Ok(Self {
            first: range(a)?,
            second: range(b)?,
        })
    }
}

/// KS comparison of two stretches of the residual vector.
pub fn split_residual_diagnostic(
    residuals: &[f64],
    split: Option<&ResidualSplit>,
) -> Result<KsResult> {
    let m = residuals.len();
    if m < 4 {
        return Err(Error::InsufficientResiduals { needed: 4, got: m });
    }
    let default;
    let split = match split {
        Some(s) => s,
        None => {
            default = ResidualSplit::halves(m);
            &default
        }
    };
    let slice = |r: &RangeInclusive<usize>| -> Result<&[f64]> {
        let (lo, hi) = (*r.start(), *r.end());
        if lo == 0 || lo > hi || hi > m {
            return Err(Error::InvalidSplit(format!(
                "range {lo}-{hi} is outside 1-{m} or empty"
            )));
        }
        Ok(&residuals[lo - 1..hi])
    };
    ks_two_sample(slice(&split.first)?, slice(&split.second)?)
}
