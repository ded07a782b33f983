use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordered observations `X₁…Xₙ` with optional display labels.
///
/// Labels never enter the arithmetic; every computation indexes by position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl TimeSeries {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        Self::build(values, None)
    }

    pub fn with_labels(values: Vec<f64>, labels: Vec<String>) -> Result<Self> {
        Self::build(values, Some(labels))
    }

    fn build(values: Vec<f64>, labels: Option<Vec<String>>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::NoObservations);
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSeries(format!(
                "observation {} is not finite ({})",
                i + 1,
                values[i]
            )));
        }
        if let Some(l) = &labels {
            if l.len() != values.len() {
                return Err(Error::InvalidSeries(format!(
                    "{} labels for {} observations",
                    l.len(),
                    values.len()
                )));
            }
        }
        Ok(Self { values, labels })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Display label for the 1-based index `t`, falling back to the index itself.
    pub fn label(&self, t: usize) -> String {
        match &self.labels {
            Some(l) if t >= 1 && t <= l.len() => l[t - 1].clone(),
            _ => t.to_string(),
        }
    }

    /// True when every observation is a whole number (e.g. counts).
    pub fn is_integer_valued(&self) -> bool {
        self.values.iter().all(|v| v.fract() == 0.0)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}
