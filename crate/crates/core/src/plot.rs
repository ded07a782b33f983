//! Minimal SVG charts: the observed series, residuals with the test band,
//! and average test error per order.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::Result;
use crate::report::AnalysisReport;
use crate::series::TimeSeries;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 50.0;

struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn new(x: (f64, f64), y: (f64, f64)) -> Self {
        let pad = |lo: f64, hi: f64| {
            let span = hi - lo;
            let p = if span > 0.0 { 0.05 * span } else { 1.0 };
            (lo - p, hi + p)
        };
        let (y_min, y_max) = pad(y.0, y.1);
        let (x_min, x_max) = if x.1 > x.0 { x } else { (x.0 - 1.0, x.1 + 1.0) };
        Self {
            x_min,
            x_max,
            y_min,
            y_max,
        }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x_min) / (self.x_max - self.x_min) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y_min) / (self.y_max - self.y_min) * (HEIGHT - 2.0 * MARGIN)
    }
}

fn open(title: &str, f: &Frame) -> String {
    let mut svg = format!(
        r#"<svg version="1.1" width="{WIDTH}" height="{HEIGHT}" xmlns="http://www.w3.org/2000/svg">"#
    );
    svg.push('\n');
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="25" text-anchor="middle" font-family="sans-serif" font-size="16">{title}</text>"#,
        WIDTH / 2.0
    );
    let (x0, y0) = (MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        svg,
        r#"<path d="M{x0} {MARGIN} L{x0} {y0} L{} {y0}" stroke="black" fill="none"/>"#,
        WIDTH - MARGIN
    );
    for (v, anchor) in [(f.y_min, y0), (f.y_max, MARGIN)] {
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{anchor}" text-anchor="end" font-family="monospace" font-size="10">{v:.1}</text>"#,
            x0 - 4.0
        );
    }
    svg
}

fn close(mut svg: String) -> String {
    svg.push_str("</svg>\n");
    svg
}

fn points(svg: &mut String, f: &Frame, pts: impl Iterator<Item = (f64, f64)>, color: &str) {
    for (x, y) in pts {
        let _ = writeln!(
            svg,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}" data-x="{x}" data-y="{y}"/>"#,
            f.px(x),
            f.py(y)
        );
    }
}

pub fn series_svg(series: &TimeSeries) -> String {
    let v = series.values();
    let f = Frame::new((1.0, v.len() as f64), (series.min(), series.max()));
    let mut svg = open("Observed series", &f);
    let path: Vec<String> = v
        .iter()
        .enumerate()
        .map(|(i, y)| format!("{:.2} {:.2}", f.px(i as f64 + 1.0), f.py(*y)))
        .collect();
    let _ = writeln!(
        svg,
        r#"<path d="M{}" stroke="steelblue" fill="none"/>"#,
        path.join(" L")
    );
    points(
        &mut svg,
        &f,
        v.iter().enumerate().map(|(i, y)| (i as f64 + 1.0, *y)),
        "steelblue",
    );
    close(svg)
}

/// Residual scatter against `t`, with the band drawn when a test ran.
pub fn residuals_svg(report: &AnalysisReport) -> Option<String> {
    let m = report.model.as_ref()?;
    let band = report.test.as_ref().map(|t| (t.lower, t.upper));
    let mut lo = m.residuals.iter().copied().fold(0.0, f64::min);
    let mut hi = m.residuals.iter().copied().fold(0.0, f64::max);
    if let Some((l, u)) = band {
        lo = lo.min(l);
        hi = hi.max(u);
    }
    let first_t = (m.k + 1) as f64;
    let last_t = (m.k + m.residuals.len()) as f64;
    let f = Frame::new((first_t, last_t), (lo, hi));
    let mut svg = open("Residuals", &f);
    let _ = writeln!(
        svg,
        r#"<line x1="{MARGIN}" x2="{}" y1="{:.2}" y2="{:.2}" stroke="gray" stroke-dasharray="2 2"/>"#,
        WIDTH - MARGIN,
        f.py(0.0),
        f.py(0.0)
    );
    if let Some((l, u)) = band {
        for v in [l, u] {
            let _ = writeln!(
                svg,
                r#"<line class="band" x1="{MARGIN}" x2="{}" y1="{:.2}" y2="{:.2}" stroke="crimson" data-value="{v}"/>"#,
                WIDTH - MARGIN,
                f.py(v),
                f.py(v)
            );
        }
    }
    points(
        &mut svg,
        &f,
        m.residuals
            .iter()
            .enumerate()
            .map(|(i, r)| (first_t + i as f64, *r)),
        "black",
    );
    Some(close(svg))
}

pub fn ate_svg(report: &AnalysisReport) -> Option<String> {
    let cv = report.cv.as_ref()?;
    let top = cv.ate.iter().copied().fold(0.0, f64::max);
    let f = Frame::new((0.5, cv.ate.len() as f64 + 0.5), (0.0, top));
    let mut svg = open("Average test error by order", &f);
    let bar = 0.6 * (f.px(1.0) - f.px(0.0));
    for (i, ate) in cv.ate.iter().enumerate() {
        let order = i + 1;
        let x = f.px(order as f64) - bar / 2.0;
        let y = f.py(*ate);
        let fill = if order == cv.chosen_order {
            "crimson"
        } else {
            "steelblue"
        };
        let _ = writeln!(
            svg,
            r#"<rect class="bar" x="{x:.2}" y="{y:.2}" width="{bar:.2}" height="{:.2}" fill="{fill}" data-order="{order}" data-ate="{ate}"/>"#,
            f.py(0.0) - y
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{}" text-anchor="middle" font-family="monospace" font-size="10">{order}</text>"#,
            f.px(order as f64),
            HEIGHT - MARGIN + 14.0
        );
    }
    Some(close(svg))
}

/// Writes `series.svg`, `residuals.svg` and, when the report has a CV
/// section, `ate.svg` into `out_dir`. Each file is written to a temporary
/// sibling and renamed into place.
pub fn emit_plots(
    report: &AnalysisReport,
    series: &TimeSeries,
    out_dir: &Path,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir)?;
    let mut files = vec![("series.svg", series_svg(series))];
    if let Some(svg) = residuals_svg(report) {
        files.push(("residuals.svg", svg));
    }
    if let Some(svg) = ate_svg(report) {
        files.push(("ate.svg", svg));
    }
    let mut written = Vec::with_capacity(files.len());
    for (name, svg) in files {
        let path = out_dir.join(name);
        write_atomic(&path, svg.as_bytes())?;
        written.push(path);
    }
    Ok(written)
}

pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}
