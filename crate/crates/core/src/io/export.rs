//! Plot-ready result tables.

use std::path::Path;

use super::timeseries::format_value;
use crate::inertia::{InertiaEstimate, WindowEstimate, SPEED_PREFIX};
use crate::kmd::KoopmanSpectrum;
use crate::{Error, Result};

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// One row per mode: index, discrete and continuous eigenvalue, frequency,
/// damping, then the real and imaginary part of each channel entry.
pub fn spectrum_table(spec: &KoopmanSpectrum) -> String {
    let mut out = String::from("j,re_discrete,im_discrete,re_continuous,im_continuous,frequency_hz,damping");
    for l in &spec.labels {
        out.push_str(&format!(",re_{l},im_{l}"));
    }
    out.push('\n');
    for (j, mode) in spec.modes.iter().enumerate() {
        let mut row = vec![
            (j + 1).to_string(),
            format_value(mode.discrete.re),
            format_value(mode.discrete.im),
            format_value(mode.continuous.re),
            format_value(mode.continuous.im),
            format_value(mode.frequency_hz()),
            format_value(mode.growth_rate()),
        ];
        for a in &mode.amplitudes {
            row.push(format_value(a.re));
            row.push(format_value(a.im));
        }
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn write_spectrum_csv(spec: &KoopmanSpectrum, path: &Path) -> Result<()> {
    write_text(path, &spectrum_table(spec))
}

fn inertia_column(label: &str) -> String {
    format!("M_{}", label.strip_prefix(SPEED_PREFIX).unwrap_or(label))
}

/// Header of an estimate table keyed by `key` (`window_s` or `dropped_id`),
/// with one inertia column per speed label.
pub fn estimate_header(key: &str, speed_labels: &[String]) -> String {
    let mut cols = vec![key.to_string()];
    cols.extend(speed_labels.iter().map(|l| inertia_column(l)));
    cols.extend(["system_wide", "residual", "solver", "condition"].map(String::from));
    cols.join(",")
}

fn estimate_row(key: String, est: &InertiaEstimate, speed_labels: &[String]) -> String {
    let mut row = vec![key];
    for l in speed_labels {
        row.push(est.get(l).map(format_value).unwrap_or_default());
    }
    row.push(format_value(est.system_wide));
    row.push(format_value(est.residual));
    row.push(est.solver.as_str().to_string());
    row.push(format_value(est.condition));
    row.join(",")
}

pub fn sweep_table(rows: &[WindowEstimate], speed_labels: &[String]) -> String {
    let mut out = estimate_header("window_s", speed_labels);
    out.push('\n');
    for r in rows {
        out.push_str(&estimate_row(format_value(r.window), &r.estimate, speed_labels));
        out.push('\n');
    }
    out
}

/// `rows` pairs the dropped speed label with the estimate obtained without
/// it; the dropped generator's column is left blank.
pub fn leave_one_out_table(rows: &[(String, InertiaEstimate)], speed_labels: &[String]) -> String {
    let mut out = estimate_header("dropped_id", speed_labels);
    out.push('\n');
    for (dropped, est) in rows {
        let id = dropped.strip_prefix(SPEED_PREFIX).unwrap_or(dropped).to_string();
        out.push_str(&estimate_row(id, est, speed_labels));
        out.push('\n');
    }
    out
}

pub fn write_sweep_csv(rows: &[WindowEstimate], speed_labels: &[String], path: &Path) -> Result<()> {
    write_text(path, &sweep_table(rows, speed_labels))
}

pub fn write_leave_one_out_csv(
    rows: &[(String, InertiaEstimate)],
    speed_labels: &[String],
    path: &Path,
) -> Result<()> {
    write_text(path, &leave_one_out_table(rows, speed_labels))
}
