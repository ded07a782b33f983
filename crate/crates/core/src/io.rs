//! CSV ingestion: one observation per row, either `value` or `label,value`.
//! Blank rows and rows starting with `#` are skipped.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::series::TimeSeries;

pub fn load_series(path: impl AsRef<Path>) -> Result<TimeSeries> {
    parse_series(&fs::read_to_string(path)?)
}

pub fn parse_series(content: &str) -> Result<TimeSeries> {
    let mut values = Vec::new();
    let mut labels = Vec::new();
    for (i, raw) in content.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lineno = i + 1;
        let (label, value) = match line.split_once(',') {
            Some((l, v)) => (Some(l.trim()), v.trim()),
            None => (None, line),
        };
        let v: f64 = value.parse().map_err(|_| Error::Parse {
            line: lineno,
            message: format!("cannot parse {value:?} as a number"),
        })?;
        if !v.is_finite() {
            return Err(Error::Parse {
                line: lineno,
                message: format!("value {value:?} is not finite"),
            });
        }
        match (label, labels.len() == values.len()) {
            (Some(l), true) => labels.push(l.to_string()),
            (None, true) if !values.is_empty() => {
                return Err(Error::Parse {
                    line: lineno,
                    message: "missing label; earlier rows are labelled".into(),
                })
            }
            (Some(_), false) => {
                return Err(Error::Parse {
                    line: lineno,
                    message: "unexpected label; earlier rows are unlabelled".into(),
                })
            }
            _ => {}
        }
        values.push(v);
    }
    if values.is_empty() {
        return Err(Error::NoObservations);
    }
    if labels.is_empty() {
        TimeSeries::new(values)
    } else {
        TimeSeries::with_labels(values, labels)
    }
}
