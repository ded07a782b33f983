//! Uncertain autoregressive time-series analysis.
//!
//! The workflow mirrors a typical study: choose the order by rolling-window
//! cross-validation, fit the model by least squares, estimate the uncertain
//! disturbance `N(ê, σ̂)` from the residuals, check adequacy with the
//! uncertain hypothesis test, then forecast one step ahead with a
//! minimum-width confidence interval.
//!
//! ```
//! use uncertain_ts::{fixtures, model};
//!
//! let series = fixtures::rumor_weibo();
//! let m = model::fit(&series, 2).unwrap();
//! let r = model::residuals(&series, &m).unwrap();
//! let d = model::estimate_disturbance(&r).unwrap();
//! let f = model::forecast(&series, &m, &d, 0.95).unwrap();
//! assert_eq!(f.point.round(), 1388.0);
//! ```

pub mod error;
pub mod fixtures;
pub mod io;
mod lstsq;
pub mod model;
pub mod plot;
pub mod report;
pub mod series;
pub mod uncertainty;
pub mod validation;

pub use error::{Error, Result};
pub use model::{DisturbanceEstimate, ForecastResult, UarModel};
pub use report::{AnalysisReport, PipelineConfig};
pub use series::TimeSeries;
pub use uncertainty::NormalUncertaintyDistribution;
pub use validation::{CvMetric, CvReport, HypothesisTestResult, KsResult, ResidualSplit};
