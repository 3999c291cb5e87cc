//! Finite Koopman mode decomposition by vector Prony analysis.
//!
//! Samples `y_k` (one vector per instant, one entry per channel) are
//! modelled as
//!
//! ```text
//! y_k = sum_j mu_j^k v_j,     mu_j = exp(lambda_j T)
//! ```
//!
//! with a single set of eigenvalues `mu_j` shared by every channel. The fit
//! runs in three steps: a linear-prediction least-squares problem stacked
//! over all channels gives the coefficients of a common characteristic
//! polynomial; its roots (companion-matrix eigenvalues) are the discrete
//! eigenvalues; a Vandermonde least-squares fit per channel gives the
//! modes.

use std::ops::Range;

use nalgebra::linalg::balancing::balance_parlett_reinsch;
use nalgebra::{DMatrix, Schur};
use serde::{Deserialize, Serialize};

use crate::linalg::{default_rcond, lstsq};
use crate::simulator::TimeSeriesSet;
use crate::{Error, Result, C64};

/// Relative separation below which two discrete eigenvalues count as equal.
pub const DISTINCT_TOLERANCE: f64 = 1e-10;

/// Largest order `samples` admit (`K >= 2m + 1`). Used as the default:
/// with densely sampled electromechanical swings the prediction matrix loses
/// numerical rank quickly, and a long prediction span is what lets all modes
/// through.
pub fn max_order(samples: usize) -> usize {
    samples.saturating_sub(1) / 2
}

/// One Koopman eigenvalue with its vector mode.
#[derive(Debug, Clone, PartialEq)]
pub struct KoopmanMode {
    /// Discrete eigenvalue, the per-sample multiplier.
    pub discrete: C64,
    /// Continuous eigenvalue `Log(discrete) / T`, 1/s.
    pub continuous: C64,
    /// Mode entry per channel, with the eigenfunction value at the first
    /// sample absorbed.
    pub amplitudes: Vec<C64>,
    /// `sum_k |mu|^(2k) * |v|^2` over the analysed samples.
    pub energy: f64,
}

impl KoopmanMode {
    pub fn frequency_hz(&self) -> f64 {
        self.continuous.im / (2.0 * std::f64::consts::PI)
    }

    /// Growth rate, 1/s. Negative for decaying modes.
    pub fn growth_rate(&self) -> f64 {
        self.continuous.re
    }
}

/// Conditioning of the two least-squares steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PronyDiagnostics {
    pub prediction_rank: usize,
    pub prediction_condition: f64,
    pub vandermonde_condition: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KoopmanSpectrum {
    pub period: f64,
    pub labels: Vec<String>,
    /// Number of samples the decomposition was fitted to.
    pub samples: usize,
    /// Sorted by descending energy.
    pub modes: Vec<KoopmanMode>,
    pub diagnostics: PronyDiagnostics,
}

/// Mode retention rule for [`KoopmanSpectrum::select`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModePolicy {
    /// Keep the most energetic modes until at least this many are kept.
    Order(usize),
    /// Keep modes whose energy is at least this fraction of the total.
    Energy(f64),
}

/// Principal logarithm of `discrete` divided by the sample period.
pub fn to_continuous(discrete: C64, period: f64) -> Result<C64> {
    if discrete == C64::new(0.0, 0.0) {
        return Err(Error::ZeroEigenvalue);
    }
    let mut arg = discrete.im.atan2(discrete.re);
    if arg <= -std::f64::consts::PI {
        arg = std::f64::consts::PI;
    }
    Ok(C64::new(discrete.norm().ln(), arg) / period)
}

fn mode_energy(discrete: C64, amplitudes: &[C64], samples: usize) -> f64 {
    let r = discrete.norm_sqr();
    let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
    let series = if (r - 1.0).abs() < 1e-12 {
        samples as f64
    } else {
        (r.powi(samples as i32) - 1.0) / (r - 1.0)
    };
    series * norm
}

/// Vector Prony analysis of order `order`.
pub fn vector_prony(data: &TimeSeriesSet, order: usize) -> Result<KoopmanSpectrum> {
    let samples = data.len();
    let channels = data.channels();
    if order == 0 {
        return Err(Error::InvalidArgument("order must be at least 1".into()));
    }
    if samples < 2 * order + 1 {
        return Err(Error::InsufficientData {
            samples,
            order,
            needed: 2 * order + 1,
        });
    }
    if channels == 0 {
        return Err(Error::InvalidArgument("no channels".into()));
    }
    if !data.all_finite() {
        return Err(Error::InvalidArgument("data contain non-finite values".into()));
    }
    let y = data.data();

    // Step 1: y[k+m] = sum_l c_l y[k+m-l], stacked over channels. Each
    // channel is weighted by the inverse of its RMS so that no channel
    // dominates the fit through its units.
    let shifts = samples - order;
    let weights: Vec<f64> = (0..channels)
        .map(|c| {
            let rms = (y.column(c).norm_squared() / samples as f64).sqrt();
            if rms > 0.0 {
                1.0 / rms
            } else {
                0.0
            }
        })
        .collect();
    let mut a = DMatrix::<f64>::zeros(shifts * channels, order);
    let mut rhs = DMatrix::<f64>::zeros(shifts * channels, 1);
    for c in 0..channels {
        let w = weights[c];
        for k in 0..shifts {
            let row = c * shifts + k;
            rhs[row] = w * y[(k + order, c)];
            for l in 1..=order {
                a[(row, l - 1)] = w * y[(k + order - l, c)];
            }
        }
    }
    let rcond = default_rcond(a.nrows(), a.ncols());
    let prediction = lstsq(a, &rhs, rcond)?;
    let coeffs = prediction.solution.column(0).clone_owned();

    // Step 2: roots of z^m - sum_l c_l z^(m-l).
    let mut companion = DMatrix::<f64>::zeros(order, order);
    for l in 0..order {
        companion[(0, l)] = coeffs[l];
    }
    for r in 1..order {
        companion[(r, r - 1)] = 1.0;
    }
    balance_parlett_reinsch(&mut companion);
    let schur = Schur::try_new(companion, f64::EPSILON, 100_000)
        .ok_or_else(|| Error::Numerical("companion eigensolve did not converge".into()))?;
    let roots: Vec<C64> = schur.complex_eigenvalues().iter().copied().collect();
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            let scale = roots[i].norm().max(roots[j].norm());
            if (roots[i] - roots[j]).norm() <= DISTINCT_TOLERANCE * scale {
                return Err(Error::DegenerateSpectrum(i, j));
            }
        }
    }
    let continuous = roots
        .iter()
        .map(|&z| to_continuous(z, data.period()))
        .collect::<Result<Vec<_>>>()?;

    // Step 3: Vandermonde fit, columns normalized before the solve.
    let mut vander = DMatrix::<C64>::zeros(samples, order);
    let mut col_scale = vec![0.0; order];
    for (j, &z) in roots.iter().enumerate() {
        let mut p = C64::new(1.0, 0.0);
        for k in 0..samples {
            vander[(k, j)] = p;
            p *= z;
        }
        let norm = vander.column(j).norm();
        col_scale[j] = norm;
        vander.column_mut(j).unscale_mut(norm);
    }
    let targets = y.map(|v| C64::new(v, 0.0));
    let fit = lstsq(vander, &targets, default_rcond(samples, order))?;

    let mut modes: Vec<KoopmanMode> = roots
        .iter()
        .zip(&continuous)
        .enumerate()
        .map(|(j, (&discrete, &continuous))| {
            let amplitudes: Vec<C64> = (0..channels)
                .map(|c| fit.solution[(j, c)] / col_scale[j])
                .collect();
            KoopmanMode {
                energy: mode_energy(discrete, &amplitudes, samples),
                discrete,
                continuous,
                amplitudes,
            }
        })
        .collect();
    modes.sort_by(|a, b| b.energy.total_cmp(&a.energy));

    Ok(KoopmanSpectrum {
        period: data.period(),
        labels: data.labels().to_vec(),
        samples,
        modes,
        diagnostics: PronyDiagnostics {
            prediction_rank: prediction.rank,
            prediction_condition: prediction.condition(),
            vandermonde_condition: fit.condition(),
        },
    })
}

/// Reconstructed samples and the largest imaginary residue dropped when
/// taking the real part.
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    /// One row per requested sample index, one column per channel.
    pub values: DMatrix<f64>,
    pub max_imaginary: f64,
}

impl KoopmanSpectrum {
    pub fn order(&self) -> usize {
        self.modes.len()
    }

    pub fn channel_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn total_energy(&self) -> f64 {
        self.modes.iter().map(|m| m.energy).sum()
    }

    /// `sum_j mu_j^k v_j` for each `k` in `range`.
    pub fn reconstruct(&self, range: Range<usize>) -> Reconstruction {
        let channels = self.labels.len();
        let rows = range.len();
        let mut acc = DMatrix::<C64>::zeros(rows, channels);
        for mode in &self.modes {
            let mut p = mode.discrete.powu(range.start as u32);
            for r in 0..rows {
                for (c, v) in mode.amplitudes.iter().enumerate() {
                    acc[(r, c)] += p * v;
                }
                p *= mode.discrete;
            }
        }
        Reconstruction {
            max_imaginary: acc.iter().map(|z| z.im.abs()).fold(0.0, f64::max),
            values: acc.map(|z| z.re),
        }
    }

    /// Index of the mode whose eigenvalue is the conjugate of mode `j`'s.
    /// Real eigenvalues have no partner.
    pub fn conjugate_partner(&self, j: usize) -> Option<usize> {
        let z = self.modes[j].discrete;
        let tol = 1e-8 * z.norm().max(1.0);
        if z.im.abs() <= tol {
            return None;
        }
        let target = z.conj();
        self.modes
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != j)
            .map(|(k, m)| (k, (m.discrete - target).norm()))
            .filter(|&(_, d)| d <= tol)
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(k, _)| k)
    }

    /// Subset of modes chosen by `policy`, keeping conjugate partners
    /// together. Energy order is preserved.
    pub fn select(&self, policy: ModePolicy) -> Result<Self> {
        let n = self.modes.len();
        let mut keep = vec![false; n];
        match policy {
            ModePolicy::Order(0) => {
                return Err(Error::InvalidArgument("order must be at least 1".into()))
            }
            ModePolicy::Order(m) => {
                let mut count = 0;
                for j in 0..n {
                    if count >= m {
                        break;
                    }
                    if keep[j] {
                        continue;
                    }
                    keep[j] = true;
                    count += 1;
                    if let Some(p) = self.conjugate_partner(j) {
                        if !keep[p] {
                            keep[p] = true;
                            count += 1;
                        }
                    }
                }
            }
            ModePolicy::Energy(eps) => {
                if !(eps >= 0.0) {
                    return Err(Error::InvalidArgument(format!(
                        "energy threshold must be non-negative, got {eps}"
                    )));
                }
                let threshold = eps * self.total_energy();
                for j in 0..n {
                    if self.modes[j].energy >= threshold && (eps == 0.0 || self.modes[j].energy > 0.0)
                    {
                        keep[j] = true;
                        if let Some(p) = self.conjugate_partner(j) {
                            keep[p] = true;
                        }
                    }
                }
            }
        }
        let modes: Vec<KoopmanMode> = self
            .modes
            .iter()
            .zip(&keep)
            .filter(|(_, &k)| k)
            .map(|(m, _)| m.clone())
            .collect();
        if modes.is_empty() {
            return Err(Error::EmptySelection);
        }
        Ok(Self {
            modes,
            ..self.clone()
        })
    }
}
