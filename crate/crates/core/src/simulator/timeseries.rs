use nalgebra::DMatrix;

use crate::{Error, Result, POWER_CHANNEL};

/// Uniformly sampled multichannel data. Row `k` is the sample at
/// `start + k * period`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeriesSet {
    period: f64,
    start: f64,
    labels: Vec<String>,
    data: DMatrix<f64>,
}

impl TimeSeriesSet {
    pub fn new(period: f64, start: f64, labels: Vec<String>, data: DMatrix<f64>) -> Result<Self> {
        if !(period > 0.0) || !period.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "sample period must be positive, got {period}"
            )));
        }
        if !start.is_finite() {
            return Err(Error::InvalidArgument("start time must be finite".into()));
        }
        if labels.len() != data.ncols() {
            return Err(Error::DimensionMismatch {
                expected: labels.len(),
                actual: data.ncols(),
            });
        }
        for (k, l) in labels.iter().enumerate() {
            if labels[..k].contains(l) {
                return Err(Error::InvalidArgument(format!("duplicate channel `{l}`")));
            }
        }
        Ok(Self {
            period,
            start,
            labels,
            data,
        })
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Samples by row, channels by column.
    pub fn data(&self) -> &DMatrix<f64> {
        &self.data
    }

    /// Number of samples.
    pub fn len(&self) -> usize {
        self.data.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.data.nrows() == 0
    }

    pub fn channels(&self) -> usize {
        self.data.ncols()
    }

    pub fn time(&self, k: usize) -> f64 {
        self.start + k as f64 * self.period
    }

    /// Span from the first to the last sample.
    pub fn duration(&self) -> f64 {
        self.len().saturating_sub(1) as f64 * self.period
    }

    pub fn channel_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn channel(&self, label: &str) -> Result<Vec<f64>> {
        let c = self
            .channel_index(label)
            .ok_or_else(|| Error::UnknownChannel(label.to_string()))?;
        Ok(self.data.column(c).iter().copied().collect())
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// First `seconds` of data: `round(seconds / period) + 1` samples.
    pub fn window(&self, seconds: f64) -> Result<Self> {
        if !(seconds > 0.0) || !seconds.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "window must be positive, got {seconds}"
            )));
        }
        let samples = (seconds / self.period).round() as usize + 1;
        if samples > self.len() {
            return Err(Error::InvalidArgument(format!(
                "window {seconds} s exceeds the {} s of data",
                self.duration()
            )));
        }
        Ok(self.head(samples))
    }

    /// First `samples` rows.
    pub fn head(&self, samples: usize) -> Self {
        let samples = samples.min(self.len());
        Self {
            data: self.data.rows(0, samples).into_owned(),
            ..self.clone()
        }
    }

    /// Drops the first `samples` rows, advancing the start time.
    pub fn skip(&self, samples: usize) -> Self {
        let samples = samples.min(self.len());
        Self {
            start: self.time(samples),
            data: self.data.rows(samples, self.len() - samples).into_owned(),
            ..self.clone()
        }
    }

    /// Keeps the named channels, in the given order.
    pub fn select(&self, labels: &[&str]) -> Result<Self> {
        let cols = labels
            .iter()
            .map(|l| {
                self.channel_index(l)
                    .ok_or_else(|| Error::UnknownChannel(l.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        let data = self.data.select_columns(cols.iter());
        Self::new(
            self.period,
            self.start,
            labels.iter().map(|l| l.to_string()).collect(),
            data,
        )
    }

    /// Removes one rotor-speed channel. The power channel cannot be removed.
    pub fn without_channel(&self, label: &str) -> Result<Self> {
        if label == POWER_CHANNEL {
            return Err(Error::InvalidArgument(format!(
                "the `{POWER_CHANNEL}` channel cannot be dropped"
            )));
        }
        let c = self
            .channel_index(label)
            .ok_or_else(|| Error::UnknownChannel(label.to_string()))?;
        let mut labels = self.labels.clone();
        labels.remove(c);
        Ok(Self {
            labels,
            data: self.data.clone().remove_column(c),
            ..self.clone()
        })
    }

    /// Multiplies one channel by `factor`.
    pub fn scale_channel(&self, label: &str, factor: f64) -> Result<Self> {
        let c = self
            .channel_index(label)
            .ok_or_else(|| Error::UnknownChannel(label.to_string()))?;
        let mut out = self.clone();
        out.data.column_mut(c).scale_mut(factor);
        Ok(out)
    }
}
