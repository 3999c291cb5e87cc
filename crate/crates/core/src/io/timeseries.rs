use std::path::Path;

use nalgebra::DMatrix;

use crate::simulator::TimeSeriesSet;
use crate::{Error, Result};

/// Header of the time column.
pub const TIME_COLUMN: &str = "t_s";

/// Allowed deviation of any timestamp gap from the inferred period, s.
pub const UNIFORMITY_TOLERANCE: f64 = 1e-9;

/// 17 significant digits; parses back to the same `f64`.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

/// CSV text for `data`: a `t_s` column followed by one column per channel.
pub fn timeseries_csv(data: &TimeSeriesSet) -> String {
    let mut out = String::new();
    out.push_str(TIME_COLUMN);
    for l in data.labels() {
        out.push(',');
        out.push_str(l);
    }
    out.push('\n');
    for k in 0..data.len() {
        out.push_str(&format_value(data.time(k)));
        for v in data.data().row(k).iter() {
            out.push(',');
            out.push_str(&format_value(*v));
        }
        out.push('\n');
    }
    out
}

pub fn write_timeseries_csv(data: &TimeSeriesSet, path: &Path) -> Result<()> {
    std::fs::write(path, timeseries_csv(data)).map_err(|e| Error::io(path, e))
}

pub fn read_timeseries_csv(path: &Path) -> Result<TimeSeriesSet> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_timeseries_csv(&text, path)
}

/// Parses CSV text; `path` only labels errors. Rows and columns in errors
/// are 1-based, counting the header as row 1.
pub fn parse_timeseries_csv(text: &str, path: &Path) -> Result<TimeSeriesSet> {
    let format = |message: String| Error::Format {
        path: path.to_path_buf(),
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| format(e.to_string()))?
        .clone();
    if header.is_empty() || header.get(0) == Some("") {
        return Err(format("missing header row".into()));
    }
    if header.get(0) != Some(TIME_COLUMN) {
        return Err(format(format!(
            "first column must be `{TIME_COLUMN}`, found `{}`",
            header.get(0).unwrap_or_default()
        )));
    }
    let labels: Vec<String> = header.iter().skip(1).map(str::to_owned).collect();
    if labels.is_empty() {
        return Err(format("no data columns".into()));
    }

    let mut times = Vec::new();
    let mut values = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let row = r + 2;
        let record = record.map_err(|e| format(e.to_string()))?;
        if record.len() != header.len() {
            return Err(format(format!(
                "row {row}: expected {} fields, found {}",
                header.len(),
                record.len()
            )));
        }
        for (c, field) in record.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| Error::Parse {
                path: path.to_path_buf(),
                row,
                column: c + 1,
                message: format!("not a number: `{field}`"),
            })?;
            if c == 0 {
                times.push(v);
            } else {
                values.push(v);
            }
        }
    }
    if times.len() < 2 {
        return Err(format(format!(
            "need at least 2 samples to infer the period, found {}",
            times.len()
        )));
    }

    let n = times.len();
    let period = (times[n - 1] - times[0]) / (n - 1) as f64;
    if !(period > 0.0) || !period.is_finite() {
        return Err(format("timestamps must be strictly increasing".into()));
    }
    // Gaps are checked against the first one so that the report points at
    // the row where the spacing changes.
    let first = times[1] - times[0];
    for k in 1..n {
        let gap = times[k] - times[k - 1];
        if !(gap > 0.0) || (gap - first).abs() > UNIFORMITY_TOLERANCE {
            return Err(Error::NonUniform {
                path: path.to_path_buf(),
                row: k + 2,
                gap,
                expected: first,
            });
        }
    }
    let data = DMatrix::from_row_slice(n, labels.len(), &values);
    TimeSeriesSet::new(period, times[0], labels, data)
}
