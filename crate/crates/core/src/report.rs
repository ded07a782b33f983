//! End-to-end analysis pipeline and report rendering.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{estimate_disturbance, fit, forecast, residuals, DisturbanceEstimate, UarModel};
use crate::series::TimeSeries;
use crate::validation::{
    cross_validate_with_metric, split_residual_diagnostic, uncertain_hypothesis_test, CvMetric,
    CvReport, KsResult, ResidualSplit,
};

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub max_order: usize,
    pub train_length: usize,
    pub alpha: f64,
    pub level: f64,
    pub order_override: Option<usize>,
    pub cv_metric: CvMetric,
    /// Residual split for the KS diagnostic; `None` compares the two halves.
    pub split: Option<ResidualSplit>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            max_order: 10,
            train_length: 22,
            alpha: 0.05,
            level: 0.95,
            order_override: None,
            cv_metric: CvMetric::Squared,
            split: None,
        }
    }
}

/// Last stage to run. Stages run in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Cv,
    Fit,
    Test,
    Forecast,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesSummary {
    pub n: usize,
    pub min: f64,
    pub max: f64,
    pub integer_valued: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSection {
    pub k: usize,
    pub a0: f64,
    pub a: Vec<f64>,
    pub rank_deficient: bool,
    /// Residuals for `t = k+1…n`.
    pub residuals: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestSection {
    pub alpha: f64,
    pub lower: f64,
    pub upper: f64,
    /// Series indices `t` of residuals outside the band.
    pub outlier_t: Vec<usize>,
    pub outlier_labels: Vec<String>,
    pub outlier_count: usize,
    pub critical_count: usize,
    pub rejected: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticSection {
    pub first: String,
    pub second: String,
    pub statistic: f64,
    pub p_value: f64,
    pub n_a: usize,
    pub n_b: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForecastSection {
    pub point: f64,
    pub sigma: f64,
    pub level: f64,
    pub lower: f64,
    pub upper: f64,
    pub half_width: f64,
    /// Rounded presentation for count data: the integer forecast ± half-width.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub display: Option<DisplayForecast>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisplayForecast {
    pub point: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub series: SeriesSummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cv: Option<CvReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disturbance: Option<DisturbanceEstimate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub test: Option<TestSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<DiagnosticSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forecast: Option<ForecastSection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl AnalysisReport {
    pub fn rejected(&self) -> bool {
        self.test.as_ref().is_some_and(|t| t.rejected)
    }

    /// The fitted model, rebuilt from the model section.
    pub fn fitted_model(&self) -> Option<UarModel> {
        let m = self.model.as_ref()?;
        UarModel::new(m.a0, m.a.clone()).ok()
    }
}

pub fn run_pipeline(series: &TimeSeries, config: &PipelineConfig) -> Result<AnalysisReport> {
    run_until(series, config, Stage::Forecast)
}

/// Runs the pipeline up to and including `last`.
///
/// A rejected hypothesis test stops the pipeline: the report so far is
/// returned with a warning and no diagnostic or forecast section.
pub fn run_until(
    series: &TimeSeries,
    config: &PipelineConfig,
    last: Stage,
) -> Result<AnalysisReport> {
    let mut report = AnalysisReport {
        series: SeriesSummary {
            n: series.len(),
            min: series.min(),
            max: series.max(),
            integer_valued: series.is_integer_valued(),
        },
        cv: None,
        model: None,
        disturbance: None,
        test: None,
        diagnostic: None,
        forecast: None,
        warnings: Vec::new(),
    };

    let k = match config.order_override {
        Some(k) => k,
        None => {
            let cv = cross_validate_with_metric(
                series,
                config.max_order,
                config.train_length,
                config.cv_metric,
            )
            .map_err(|e| e.at_stage("cv"))?;
            let k = cv.chosen_order;
            report.cv = Some(cv);
            k
        }
    };
    if last == Stage::Cv {
        return Ok(report);
    }

    let model = fit(series, k).map_err(|e| e.at_stage("fit"))?;
    let resid = residuals(series, &model).map_err(|e| e.at_stage("fit"))?;
    let disturbance = estimate_disturbance(&resid).map_err(|e| e.at_stage("disturbance"))?;
    if model.is_rank_deficient() {
        report.warnings.push(format!(
            "order {k} design matrix is rank deficient; minimum-norm coefficients reported"
        ));
    }
    report.model = Some(ModelSection {
        k,
        a0: model.intercept(),
        a: model.lags().to_vec(),
        rank_deficient: model.is_rank_deficient(),
        residuals: resid.clone(),
    });
    report.disturbance = Some(disturbance);
    if last == Stage::Fit {
        return Ok(report);
    }

    let dist = disturbance.distribution().map_err(|e| e.at_stage("test"))?;
    let test =
        uncertain_hypothesis_test(&resid, &dist, config.alpha).map_err(|e| e.at_stage("test"))?;
    let outlier_t: Vec<usize> = test.outlier_indices.iter().map(|i| i + k).collect();
    report.test = Some(TestSection {
        alpha: test.alpha,
        lower: test.lower,
        upper: test.upper,
        outlier_labels: outlier_t.iter().map(|&t| series.label(t)).collect(),
        outlier_count: outlier_t.len(),
        outlier_t,
        critical_count: test.critical_count,
        rejected: test.rejected,
    });
    if test.rejected {
        report.warnings.push(format!(
            "uncertain hypothesis test rejected the order {k} model at alpha = {}; choose another model",
            config.alpha
        ));
        return Ok(report);
    }

    let split = config
        .split
        .clone()
        .unwrap_or_else(|| ResidualSplit::halves(resid.len()));
    let ks: KsResult =
        split_residual_diagnostic(&resid, Some(&split)).map_err(|e| e.at_stage("diagnostic"))?;
    report.diagnostic = Some(DiagnosticSection {
        first: format!("{}-{}", split.first.start(), split.first.end()),
        second: format!("{}-{}", split.second.start(), split.second.end()),
        statistic: ks.statistic,
        p_value: ks.p_value,
        n_a: ks.n_a,
        n_b: ks.n_b,
    });
    if last == Stage::Test {
        return Ok(report);
    }

    let fc =
        forecast(series, &model, &disturbance, config.level).map_err(|e| e.at_stage("forecast"))?;
    let half_width = fc.upper - fc.point;
    let display = series.is_integer_valued().then(|| {
        let p = fc.point.round();
        DisplayForecast {
            point: p,
            lower: p - half_width,
            upper: p + half_width,
        }
    });
    report.forecast = Some(ForecastSection {
        point: fc.point,
        sigma: fc.distribution.sigma(),
        level: fc.level,
        lower: fc.lower,
        upper: fc.upper,
        half_width,
        display,
    });
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Text,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Self::Json),
            "text" => Ok(Self::Text),
            other => Err(Error::InvalidParameter(format!("unknown format {other:?}"))),
        }
    }
}

pub fn emit_report(report: &AnalysisReport, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(report)?;
            s.push('\n');
            Ok(s)
        }
        ReportFormat::Text => Ok(render_text(report)),
    }
}

fn render_text(r: &AnalysisReport) -> String {
    let mut out = String::new();
    let s = &r.series;
    let _ = writeln!(out, "series: n = {}, min = {}, max = {}", s.n, s.min, s.max);

    if let Some(cv) = &r.cv {
        let _ = writeln!(
            out,
            "cv: metric = {}, max order = {}, train length = {}, chosen order = {}",
            cv.metric, cv.max_order, cv.train_length, cv.chosen_order
        );
        for (i, ate) in cv.ate.iter().enumerate() {
            let _ = writeln!(out, "  ATE({}) = {:.4}", i + 1, ate);
        }
    }

    if let Some(m) = &r.model {
        let mut terms = format!("{:.4}", m.a0);
        for (i, a) in m.a.iter().enumerate() {
            let sign = if *a < 0.0 { '-' } else { '+' };
            let _ = write!(terms, " {sign} {:.4} X(t-{})", a.abs(), i + 1);
        }
        let _ = writeln!(out, "model: k = {}, X(t) = {terms}", m.k);
        if m.rank_deficient {
            let _ = writeln!(out, "  rank deficient: minimum-norm coefficients");
        }
    }

    if let Some(d) = &r.disturbance {
        let _ = writeln!(
            out,
            "disturbance: e_hat = {:.4}, sigma_hat = {:.4} (divisor {}, {} residuals)",
            d.e_hat, d.sigma_hat, d.divisor, d.count
        );
    }

    if let Some(t) = &r.test {
        let _ = writeln!(
            out,
            "test: alpha = {}, band = [{:.4}, {:.4}], outliers = {} [{}], critical count = {}, verdict = {}",
            t.alpha,
            t.lower,
            t.upper,
            t.outlier_count,
            t.outlier_labels.join(", "),
            t.critical_count,
            if t.rejected { "rejected" } else { "accepted" }
        );
    }

    if let Some(d) = &r.diagnostic {
        let _ = writeln!(
            out,
            "ks diagnostic: residuals {} vs {}, D = {:.4}, p = {:.4}",
            d.first, d.second, d.statistic, d.p_value
        );
    }

    if let Some(f) = &r.forecast {
        out.push_str(&render_forecast(f));
    }

    for w in &r.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    out
}

/// The forecast lines of the text report.
pub fn render_forecast(f: &ForecastSection) -> String {
    let pct = format!("{}", (f.level * 1e6).round() / 1e4);
    match &f.display {
        Some(d) => format!(
            "forecast: {}\n{pct}% interval: [{:.4}, {:.4}] ({} ± {:.4})\n",
            d.point, d.lower, d.upper, d.point, f.half_width
        ),
        None => format!(
            "forecast: {:.4}\n{pct}% interval: [{:.4}, {:.4}] ({:.4} ± {:.4})\n",
            f.point, f.lower, f.upper, f.point, f.half_width
        ),
    }
}
