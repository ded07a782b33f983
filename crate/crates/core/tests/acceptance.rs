//! Acceptance suite for the rumor-retweet case study.
//!
//! Runs every criterion, prints one PASS/FAIL line each, and exits non-zero
//! if any criterion fails.

use std::process::ExitCode;

use rand::{rngs::StdRng, Rng, SeedableRng};

use uncertain_ts::fixtures::rumor_weibo;
use uncertain_ts::model::{
    estimate_disturbance, estimate_disturbance_with_divisor, fit, forecast, residuals,
};
use uncertain_ts::report::{emit_report, run_pipeline, ReportFormat};
use uncertain_ts::validation::{
    cross_validate_with_metric, ks_two_sample, split_residual_diagnostic, uncertain_hypothesis_test,
};
use uncertain_ts::{
    CvMetric, DisturbanceEstimate, NormalUncertaintyDistribution, PipelineConfig, ResidualSplit,
    TimeSeries, UarModel,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn printed_model() -> UarModel {
    UarModel::new(50.9313, vec![1.3276, -0.3641]).unwrap()
}

fn fitted_residuals() -> Vec<f64> {
    let s = rumor_weibo();
    residuals(&s, &fit(&s, 2).unwrap()).unwrap()
}

fn c1_coefficients() -> Outcome {
    let m = fit(&rumor_weibo(), 2).map_err(|e| e.to_string())?;
    let got = [m.intercept(), m.lags()[0], m.lags()[1]];
    let want = [50.9313, 1.3276, -0.3641];
    for (g, w) in got.iter().zip(want) {
        ensure((g - w).abs() <= 1e-3, format!("{got:?} vs {want:?}"))?;
    }
    Ok(format!("a = ({:.6}, {:.6}, {:.6})", got[0], got[1], got[2]))
}

fn c2_residual_mean() -> Outcome {
    let e = estimate_disturbance(&fitted_residuals()).unwrap().e_hat;
    ensure(e.abs() <= 1e-8, format!("e_hat = {e:e}"))?;

    let mut rng = StdRng::seed_from_u64(2024);
    for trial in 0..50 {
        let n = rng.gen_range(15..80);
        let k = rng.gen_range(1..5);
        let mut v = vec![rng.gen_range(0.0..100.0)];
        for _ in 1..n {
            let last = *v.last().unwrap();
            v.push(20.0 + 0.7 * last + rng.gen_range(-15.0..15.0));
        }
        let s = TimeSeries::new(v.clone()).unwrap();
        let m = fit(&s, k).unwrap();
        ensure(
            !m.is_rank_deficient(),
            format!("trial {trial} rank deficient"),
        )?;
        let r = residuals(&s, &m).unwrap();
        let bound = 1e-6 * (n - k) as f64 * v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        let sum: f64 = r.iter().sum();
        ensure(
            sum.abs() < bound,
            format!("trial {trial}: residual sum {sum:e} > {bound:e}"),
        )?;
    }
    Ok(format!(
        "e_hat = {e:.3e}; 50 random full-rank fits have zero-sum residuals"
    ))
}

fn c3_disturbance_scale() -> Outcome {
    let r = fitted_residuals();
    let s70 = estimate_disturbance_with_divisor(&r, 70.0)
        .unwrap()
        .sigma_hat;
    let s55 = estimate_disturbance_with_divisor(&r, 55.0)
        .unwrap()
        .sigma_hat;
    let m70 = (s70 - 4.5437).abs() <= 2e-3;
    let m55 = (s55 - 4.5437).abs() <= 2e-3;
    ensure(
        m70 ^ m55,
        format!("divisor 70 -> {s70:.6}, divisor 55 -> {s55:.6}; matches: {m70}/{m55}"),
    )?;
    let which = if m70 { 70 } else { 55 };
    Ok(format!(
        "divisor 70 -> {s70:.6}, divisor 55 -> {s55:.6}; divisor {which} reproduces 4.5437"
    ))
}

fn c4_hypothesis_test() -> Outcome {
    let dist = NormalUncertaintyDistribution::new(0.0, 4.5437).unwrap();
    let mut details = Vec::new();
    for (name, r) in [
        ("fitted", fitted_residuals()),
        (
            "printed",
            residuals(&rumor_weibo(), &printed_model()).unwrap(),
        ),
    ] {
        let t = uncertain_hypothesis_test(&r, &dist, 0.05).unwrap();
        ensure(
            (t.upper - 9.1774).abs() <= 1e-3,
            format!("upper {}", t.upper),
        )?;
        ensure(
            (t.lower + 9.1774).abs() <= 1e-3,
            format!("lower {}", t.lower),
        )?;
        ensure(
            t.outlier_indices.len() == 3,
            format!("{name}: {} outliers", t.outlier_indices.len()),
        )?;
        ensure(
            t.critical_count == 4,
            format!("critical count {}", t.critical_count),
        )?;
        ensure(!t.rejected, format!("{name}: rejected"))?;
        details.push(format!("{name} residuals: 3 outliers"));
    }
    Ok(format!(
        "band ±{:.4}, critical count 4, accepted ({})",
        dist.inverse_cdf(0.975).unwrap(),
        details.join(", ")
    ))
}

fn c5_forecast() -> Outcome {
    let s = rumor_weibo();
    let d = DisturbanceEstimate {
        e_hat: 0.0,
        sigma_hat: 4.5437,
        count: 70,
        divisor: 70.0,
    };
    let f = forecast(&s, &printed_model(), &d, 0.95).unwrap();
    ensure(
        (f.point - 1387.6699).abs() <= 1e-2,
        format!("point {}", f.point),
    )?;
    let hw = f.upper - f.point;
    ensure((hw - 9.1774).abs() <= 1e-3, format!("half-width {hw}"))?;
    let display = f.point.round();
    ensure(display == 1388.0, format!("display {display}"))?;
    let (lo, hi) = (display - hw, display + hw);
    ensure(
        (lo - 1378.8226).abs() <= 1e-2 && (hi - 1397.1774).abs() <= 1e-2,
        format!("interval [{lo}, {hi}]"),
    )?;

    // the same presentation from the full-precision pipeline
    let cfg = PipelineConfig {
        order_override: Some(2),
        ..Default::default()
    };
    let report = run_pipeline(&s, &cfg).unwrap();
    let fs = report
        .forecast
        .as_ref()
        .ok_or("pipeline produced no forecast")?;
    ensure(
        (fs.half_width - 9.1774).abs() <= 1e-3,
        format!("pipeline half-width {}", fs.half_width),
    )?;
    let text = emit_report(&report, ReportFormat::Text).unwrap();
    ensure(
        text.contains("forecast: 1388\n"),
        "text report lacks \"forecast: 1388\"",
    )?;
    ensure(
        text.contains("95% interval: [1378.8226, 1397.1774]"),
        "text report lacks the 95% interval",
    )?;
    Ok(format!(
        "printed model: point {:.4}, half-width {hw:.4}, [{lo:.4}, {hi:.4}]; full precision: point {:.4}, half-width {:.4}",
        f.point, fs.point, fs.half_width
    ))
}

fn c6_order_selection() -> Outcome {
    let s = rumor_weibo();
    let mut table = String::from("order  squared     absolute");
    let sq =
        cross_validate_with_metric(&s, 10, 22, CvMetric::Squared).map_err(|e| e.to_string())?;
    let ab =
        cross_validate_with_metric(&s, 10, 22, CvMetric::Absolute).map_err(|e| e.to_string())?;
    for k in 1..=10 {
        table.push_str(&format!(
            "\n         {k:>2}   {:>10.4}  {:>10.4}",
            sq.ate_for(k).unwrap(),
            ab.ate_for(k).unwrap()
        ));
    }
    let summary = format!(
        "chosen order: squared {}, absolute {}\n         {table}",
        sq.chosen_order, ab.chosen_order
    );
    ensure(
        sq.chosen_order == 2 || ab.chosen_order == 2,
        summary.clone(),
    )?;
    Ok(summary)
}

fn c7_ks() -> Outcome {
    let split: ResidualSplit = "1-29,17-70".parse().unwrap();
    let mut parts = Vec::new();
    for (name, r) in [
        (
            "printed",
            residuals(&rumor_weibo(), &printed_model()).unwrap(),
        ),
        ("fitted", fitted_residuals()),
    ] {
        let ks = split_residual_diagnostic(&r, Some(&split)).unwrap();
        ensure(ks.p_value < 0.05, format!("{name}: p = {}", ks.p_value))?;
        parts.push(format!(
            "{name}: D = {:.4}, p = {:.4}",
            ks.statistic, ks.p_value
        ));
    }
    Ok(parts.join("; "))
}

fn c8_properties() -> Outcome {
    // cdf/inverse roundtrip
    for sigma in [0.1, 1.0, 10.0] {
        let d = NormalUncertaintyDistribution::new(0.0, sigma).unwrap();
        for i in 1..1000 {
            let a = i as f64 / 1000.0;
            let back = d.cdf(d.inverse_cdf(a).unwrap());
            ensure(
                (back - a).abs() < 1e-10,
                format!("roundtrip sigma {sigma} alpha {a}: {back}"),
            )?;
        }
    }

    // least-squares optimality under single-coefficient perturbations
    let s = rumor_weibo();
    let m = fit(&s, 2).unwrap();
    let base = m.sse(s.values());
    let mut rng = StdRng::seed_from_u64(99);
    for _ in 0..150 {
        let mut a0 = m.intercept();
        let mut lags = m.lags().to_vec();
        let delta = if rng.gen_bool(0.5) { 1e-3 } else { -1e-3 };
        match rng.gen_range(0..=lags.len()) {
            0 => a0 += delta,
            i => lags[i - 1] += delta,
        }
        let p = UarModel::new(a0, lags).unwrap();
        ensure(p.sse(s.values()) >= base, "perturbation lowered the SSE")?;
    }

    // noiseless AR(1) recovery
    let mut v = vec![0.0];
    for _ in 1..20 {
        v.push(10.0 + 0.5 * v.last().unwrap());
    }
    let ar = TimeSeries::new(v).unwrap();
    let am = fit(&ar, 1).unwrap();
    let sse = am.sse(ar.values());
    ensure(sse < 1e-12, format!("AR(1) SSE {sse:e}"))?;
    ensure(
        (am.intercept() - 10.0).abs() < 1e-9 && (am.lags()[0] - 0.5).abs() < 1e-9,
        format!("AR(1) coefficients {} {:?}", am.intercept(), am.lags()),
    )?;

    // half-width monotone in level
    let d = NormalUncertaintyDistribution::new(0.0, 4.5437).unwrap();
    let widths: Vec<f64> = (1..1000)
        .map(|i| d.half_width(i as f64 / 1000.0).unwrap())
        .collect();
    ensure(
        widths.windows(2).all(|w| w[1] > w[0]),
        "half-width not increasing",
    )?;

    // KS symmetry and identical samples
    let r = fitted_residuals();
    let (a, b) = r.split_at(31);
    let ab = ks_two_sample(a, b).unwrap();
    let ba = ks_two_sample(b, a).unwrap();
    ensure(
        ab.statistic == ba.statistic && ab.p_value == ba.p_value,
        "KS not symmetric",
    )?;
    ensure(
        ks_two_sample(a, a).unwrap().statistic == 0.0,
        "KS of identical samples non-zero",
    )?;

    // pipeline determinism
    for cfg in [
        PipelineConfig::default(),
        PipelineConfig {
            order_override: Some(2),
            ..Default::default()
        },
    ] {
        let first = emit_report(&run_pipeline(&s, &cfg).unwrap(), ReportFormat::Json).unwrap();
        let second = emit_report(&run_pipeline(&s, &cfg).unwrap(), ReportFormat::Json).unwrap();
        ensure(first == second, "json reports differ between runs")?;
    }

    Ok("roundtrip, LS optimality (150 perturbations), AR(1) recovery, monotone half-width, KS symmetry, determinism".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 coefficient reproduction", c1_coefficients),
        ("2 residual mean", c2_residual_mean),
        ("3 disturbance scale", c3_disturbance_scale),
        ("4 hypothesis test", c4_hypothesis_test),
        ("5 forecast", c5_forecast),
        ("6 order selection", c6_order_selection),
        ("7 KS diagnostic", c7_ks),
        ("8 property suites", c8_properties),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("[PASS] criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] criterion {name}: {detail}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
