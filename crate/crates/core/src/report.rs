//! Landmark summary: measured values next to published reference values.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::analytics::{landmarks, signed_area, Derived, Landmark, Landmarks};
use crate::dynamics::Flows;
use crate::integrator::RunOutput;
use crate::scenario::ScenarioCode;

/// Published timings, in order: max extraction growth, knee, peak net
/// investment, peak debt ratio, max decoupling.
pub const TIMINGS: [(&str, [f64; 5]); 4] = [
    ("FC-000", [40.0, 76.0, 78.0, 82.0, 84.0]),
    ("MC-000", [33.0, 145.0, 145.0, 150.0, 148.0]),
    ("FC-100", [32.0, 94.0, 95.0, 99.0, 97.0]),
    ("MC-100", [32.0, 151.0, 152.0, 156.0, 154.0]),
];

pub const TIMING_NAMES: [&str; 5] =
    ["max_extraction_growth", "knee", "peak_net_investment", "peak_debt_ratio", "max_decoupling"];

/// Ratios of MC peaks over FC peaks: (MC, FC, decoupling ratio, debt ratio).
pub const RATIOS: [(&str, &str, f64, f64); 2] = [("MC-000", "FC-000", 4.8, 3.7), ("MC-100", "FC-100", 2.3, 3.7)];

/// Published absolute-decoupling windows.
pub const ABSOLUTE_DECOUPLING: [(&str, Option<(f64, f64)>); 4] = [
    ("FC-000", None),
    ("MC-000", Some((149.0, 158.0))),
    ("FC-100", None),
    ("MC-100", Some((156.0, 162.0))),
];

#[derive(Debug, Clone, PartialEq)]
pub struct Line {
    pub name: String,
    pub measured: String,
    pub reference: String,
    pub tolerance: String,
    /// `None` for landmarks reported without a reference.
    pub pass: Option<bool>,
}

impl Line {
    fn info(name: impl Into<String>, measured: String) -> Line {
        Line { name: name.into(), measured, reference: "-".into(), tolerance: "-".into(), pass: None }
    }

    fn rel(name: impl Into<String>, measured: Option<f64>, reference: f64, tol: f64) -> Line {
        let pass = measured.is_some_and(|m| (m - reference).abs() <= tol * reference.abs());
        Line {
            name: name.into(),
            measured: fmt_opt(measured),
            reference: fmt(reference),
            tolerance: format!("±{}%", tol * 100.0),
            pass: Some(pass),
        }
    }

    fn abs(name: impl Into<String>, measured: Option<f64>, reference: f64, tol: f64) -> Line {
        let pass = measured.is_some_and(|m| (m - reference).abs() <= tol);
        Line {
            name: name.into(),
            measured: fmt_opt(measured),
            reference: fmt(reference),
            tolerance: format!("±{tol}"),
            pass: Some(pass),
        }
    }

    pub fn status(&self) -> &'static str {
        match self.pass {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "-",
        }
    }
}

fn fmt(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-3 || v.abs() >= 1e5) {
        format!("{v:.4e}")
    } else {
        format!("{v:.4}")
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt).unwrap_or_else(|| "none".into())
}

fn lm_t(l: &Option<Landmark>) -> Option<f64> {
    l.map(|l| l.t)
}

fn fmt_intervals(iv: &[(f64, f64)]) -> String {
    if iv.is_empty() {
        return "none".into();
    }
    iv.iter().map(|(a, b)| format!("[{a}, {b}]")).collect::<Vec<_>>().join(" ")
}

/// Whether some interval overlaps `[lo, hi]` widened by `slack` at each end.
pub fn overlaps(iv: &[(f64, f64)], lo: f64, hi: f64, slack: f64) -> bool {
    iv.iter().any(|(a, b)| *a <= hi + slack && *b >= lo - slack)
}

/// Every landmark of one run, with references where they are published.
pub fn scenario_lines(run: &RunOutput, d: &Derived) -> Vec<Line> {
    let name = run.scenario.as_str();
    let l = landmarks(d);
    let mut lines = Vec::new();
    let timed = [
        &l.max_extraction_growth,
        &l.knee,
        &l.peak_net_investment,
        &l.peak_debt_ratio,
        &l.max_decoupling,
    ];
    let refs = TIMINGS.iter().find(|(n, _)| *n == name).map(|(_, r)| r);
    for (i, lm) in timed.iter().enumerate() {
        let label = format!("{name} {} T", TIMING_NAMES[i]);
        lines.push(match refs {
            Some(r) => Line::rel(label, lm_t(lm), r[i], 0.10),
            None => Line::info(label, fmt_opt(lm_t(lm))),
        });
    }
    for (label, lm) in [
        ("peak_debt_ratio value", &l.peak_debt_ratio),
        ("max_decoupling value", &l.max_decoupling),
    ] {
        lines.push(Line::info(format!("{name} {label}"), fmt_opt(lm.map(|x| x.value))));
    }
    for (label, lm) in [
        ("peak_percap_extraction T", &l.peak_percap_extraction),
        ("peak_H T", &l.peak_h),
        ("peak_Psi T", &l.peak_psi),
    ] {
        lines.push(Line::info(format!("{name} {label}"), fmt_opt(lm_t(lm))));
    }

    let abs_ref = ABSOLUTE_DECOUPLING.iter().find(|(n, _)| *n == name).map(|(_, r)| *r);
    let label = format!("{name} absolute_decoupling");
    let measured = fmt_intervals(&l.absolute_decoupling);
    lines.push(match abs_ref {
        Some(Some((lo, hi))) => Line {
            name: label,
            measured,
            reference: format!("[{lo}, {hi}]"),
            tolerance: "±5".into(),
            pass: Some(overlaps(&l.absolute_decoupling, lo, hi, 5.0)),
        },
        Some(None) => Line {
            name: label,
            pass: Some(l.absolute_decoupling.is_empty()),
            measured,
            reference: "none".into(),
            tolerance: "-".into(),
        },
        None => Line::info(label, measured),
    });

    let area = signed_area(&d.x_mc, &d.psi);
    lines.push(Line {
        name: format!("{name} X_MC-Psi orientation (signed area)"),
        measured: fmt(area),
        reference: "> 0".into(),
        tolerance: "-".into(),
        pass: Some(area > 0.0),
    });
    let gap = match (l.peak_h, l.peak_percap_extraction) {
        (Some(h), Some(x)) => Some((h.t - x.t).abs()),
        _ => None,
    };
    lines.push(Line {
        name: format!("{name} |peak_H T - peak_percap_extraction T|"),
        measured: fmt_opt(gap),
        reference: "0".into(),
        tolerance: "±15".into(),
        pass: Some(gap.is_some_and(|g| g <= 15.0)),
    });
    lines.extend(regime_lines(run, d));
    lines
}

fn series_range(v: impl Iterator<Item = f64>) -> (f64, f64) {
    v.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)))
}

/// Capacity-utilization, participation and terminal-regime checks.
fn regime_lines(run: &RunOutput, d: &Derived) -> Vec<Line> {
    let name = run.scenario.as_str();
    // Variants such as "-frozen" get no regime checks.
    let Ok(code) = name.parse::<ScenarioCode>() else {
        return Vec::new();
    };
    let mut lines = Vec::new();
    let last = run.last();
    let cu = |pick: fn(&Flows) -> f64| series_range(run.samples.iter().map(|s| pick(&s.flows)));
    if !code.bargaining_loss {
        for (label, pick) in [("CU_g", (|f: &Flows| f.cu_g) as fn(&Flows) -> f64), ("CU_e", |f| f.cu_e)] {
            let (lo, hi) = cu(pick);
            let worst = if (lo - 0.85).abs() > (hi - 0.85).abs() { lo } else { hi };
            let mut line = Line::abs(format!("{name} {label} extreme over run"), Some(worst), 0.85, 0.01);
            if !matches!(name, "FC-000" | "MC-000") {
                line.pass = None;
            }
            lines.push(line);
        }
    }
    if code.bargaining_loss {
        lines.push(Line::abs(format!("{name} terminal participation"), Some(last.flows.lambda_n), 0.80, 0.005));
        let target = match name {
            "FC-011" => Some(0.65),
            "MC-011" => Some(0.75),
            _ => None,
        };
        let cu_g = Some(last.flows.cu_g);
        lines.push(match target {
            Some(t) => Line::abs(format!("{name} terminal CU_g"), cu_g, t, 0.05),
            None => Line {
                name: format!("{name} terminal CU_g"),
                measured: fmt_opt(cu_g),
                reference: "< 0.85".into(),
                tolerance: "-".into(),
                pass: Some(last.flows.cu_g < 0.84),
            },
        });
    }
    if name == "FC-000" {
        let n = d.t.len() - 1;
        lines.push(Line::abs(format!("{name} terminal debt ratio"), Some(d.debt_ratio[n]), 0.0, 1e-2));
        lines.push(Line::abs(format!("{name} terminal profit share"), Some(d.profit_share[n]), 0.0, 1e-2));
        lines.push(Line::abs(format!("{name} terminal participation"), Some(last.flows.lambda_n), 0.60, 0.01));
    }
    lines
}

/// MC-over-FC ratio lines for pairs present in `by_name`.
pub fn ratio_lines(by_name: &BTreeMap<String, Landmarks>) -> Vec<Line> {
    let mut lines = Vec::new();
    for (mc, fc, dec, debt) in RATIOS {
        let (Some(m), Some(f)) = (by_name.get(mc), by_name.get(fc)) else {
            continue;
        };
        let ratio = |a: &Option<Landmark>, b: &Option<Landmark>| match (a, b) {
            (Some(a), Some(b)) if b.value != 0.0 => Some(a.value / b.value),
            _ => None,
        };
        lines.push(Line::rel(
            format!("{mc}/{fc} peak decoupling ratio"),
            ratio(&m.max_decoupling, &f.max_decoupling),
            dec,
            0.20,
        ));
        lines.push(Line::rel(
            format!("{mc}/{fc} peak debt-ratio ratio"),
            ratio(&m.peak_debt_ratio, &f.peak_debt_ratio),
            debt,
            0.20,
        ));
    }
    lines
}

pub fn format_lines(lines: &[Line]) -> String {
    let w = |f: fn(&Line) -> usize| lines.iter().map(f).max().unwrap_or(0);
    let (wn, wm, wr, wt) = (
        w(|l| l.name.len()),
        w(|l| l.measured.len()),
        w(|l| l.reference.len()),
        w(|l| l.tolerance.chars().count()),
    );
    let mut s = String::new();
    for l in lines {
        let _ = writeln!(
            s,
            "{:<wn$}  {:>wm$}  {:>wr$}  {:>wt$}  {}",
            l.name,
            l.measured,
            l.reference,
            l.tolerance,
            l.status()
        );
    }
    s
}

pub fn any_failed(lines: &[Line]) -> bool {
    lines.iter().any(|l| l.pass == Some(false))
}
