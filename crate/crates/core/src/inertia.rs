//! Inertia estimation from a Koopman spectrum of rotor speeds and net
//! accelerating power.
//!
//! Both observables share one set of Koopman eigenvalues. Substituting their
//! decompositions into `sum_i M_i d(omega_i)/dt = dP` and matching the
//! coefficient of each `exp(lambda_j t)` gives one linear equation per mode:
//!
//! ```text
//! lambda_j * (v_j^omega)^T M = v_j^P
//! ```
//!
//! Stacking the modes gives `H M = b`, solved here in the least-squares
//! sense over the reals.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::kmd::{max_order, vector_prony, KoopmanSpectrum, ModePolicy, DISTINCT_TOLERANCE};
use crate::linalg::lstsq;
use crate::simulator::TimeSeriesSet;
use crate::{Error, Result, C64, POWER_CHANNEL};

/// Modes with `|lambda|` below this (1/s) are stationary and carry no
/// equation.
pub const STATIONARY_TOLERANCE: f64 = 1e-6;

/// Relative singular-value cutoff separating the full-rank solve from the
/// pseudo-inverse.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Prefix of rotor-speed channel labels.
pub const SPEED_PREFIX: &str = "omega_";

/// Which spectrum channels are rotor speeds and which is the power channel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub speed_channels: Vec<usize>,
    pub power_channel: usize,
}

impl Partition {
    /// Channels labelled `omega_*` are speeds, `deltaP` is power; others are
    /// ignored.
    pub fn from_labels(labels: &[String]) -> Result<Self> {
        let power_channel = labels
            .iter()
            .position(|l| l == POWER_CHANNEL)
            .ok_or_else(|| Error::MissingPowerChannel(POWER_CHANNEL.into()))?;
        let speed_channels: Vec<usize> = labels
            .iter()
            .enumerate()
            .filter(|(_, l)| l.starts_with(SPEED_PREFIX))
            .map(|(k, _)| k)
            .collect();
        if speed_channels.is_empty() {
            return Err(Error::NoSpeedChannels);
        }
        Ok(Self {
            speed_channels,
            power_channel,
        })
    }
}

/// Truncated linear system `H M = b`.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimationProblem {
    /// Row `j` is `lambda_j` times the speed entries of mode `j`.
    pub h: DMatrix<C64>,
    /// Entry `j` is the power entry of mode `j`.
    pub b: DVector<C64>,
    /// Continuous eigenvalue behind each row.
    pub eigenvalues: Vec<C64>,
    /// Labels of the speed channels, one per unknown.
    pub labels: Vec<String>,
    /// Stationary modes left out.
    pub stationary_modes: usize,
    /// Analysis window, s, when known.
    pub window: Option<f64>,
}

pub fn assemble_system(spec: &KoopmanSpectrum, partition: &Partition) -> Result<EstimationProblem> {
    let channels = spec.labels.len();
    for &c in partition
        .speed_channels
        .iter()
        .chain(std::iter::once(&partition.power_channel))
    {
        if c >= channels {
            return Err(Error::DimensionMismatch {
                expected: channels,
                actual: c + 1,
            });
        }
    }
    if spec.modes.is_empty() {
        return Err(Error::InvalidArgument("spectrum has no modes".into()));
    }
    for i in 0..spec.modes.len() {
        for j in i + 1..spec.modes.len() {
            let (a, b) = (spec.modes[i].continuous, spec.modes[j].continuous);
            if (a - b).norm() <= DISTINCT_TOLERANCE * a.norm().max(b.norm()) {
                return Err(Error::DegenerateSpectrum(i, j));
            }
        }
    }
    let rows: Vec<_> = spec
        .modes
        .iter()
        .filter(|m| m.continuous.norm() >= STATIONARY_TOLERANCE)
        .collect();
    let n = partition.speed_channels.len();
    let h = DMatrix::from_fn(rows.len(), n, |r, c| {
        rows[r].continuous * rows[r].amplitudes[partition.speed_channels[c]]
    });
    let b = DVector::from_iterator(
        rows.len(),
        rows.iter().map(|m| m.amplitudes[partition.power_channel]),
    );
    Ok(EstimationProblem {
        h,
        b,
        eigenvalues: rows.iter().map(|m| m.continuous).collect(),
        labels: partition
            .speed_channels
            .iter()
            .map(|&c| spec.labels[c].clone())
            .collect(),
        stationary_modes: spec.modes.len() - rows.len(),
        window: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Solver {
    /// Full column rank: the unique least-squares solution.
    LeastSquares,
    /// Rank deficient: minimum-norm solution.
    PseudoInverse,
}

impl Solver {
    pub fn as_str(self) -> &'static str {
        match self {
            Solver::LeastSquares => "least-squares",
            Solver::PseudoInverse => "pseudo-inverse",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InertiaEstimate {
    /// Speed-channel label of each estimated entry.
    pub labels: Vec<String>,
    /// Estimated inertia per generator, p.u.
    pub inertia: Vec<f64>,
    /// Sum of `inertia`.
    pub system_wide: f64,
    /// `|H M - b|`.
    pub residual: f64,
    /// Ratio of extreme singular values of the real-stacked matrix.
    pub condition: f64,
    pub solver: Solver,
    /// Equations (complex rows) used.
    pub rows: usize,
    pub window: Option<f64>,
}

impl InertiaEstimate {
    /// Generator id parsed from an `omega_<id>` label.
    pub fn generator_ids(&self) -> Vec<Option<usize>> {
        self.labels
            .iter()
            .map(|l| l.strip_prefix(SPEED_PREFIX).and_then(|s| s.parse().ok()))
            .collect()
    }

    pub fn get(&self, label: &str) -> Option<f64> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|k| self.inertia[k])
    }
}

/// Solves `H M = b` for a real `M` by stacking real and imaginary parts.
pub fn estimate_inertia(prob: &EstimationProblem) -> Result<InertiaEstimate> {
    let (m, n) = prob.h.shape();
    if m == 0 || n == 0 {
        return Err(Error::NoInformation);
    }
    if prob.b.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            actual: prob.b.len(),
        });
    }
    if prob.h.iter().all(|z| *z == C64::new(0.0, 0.0)) {
        return Err(Error::NoInformation);
    }
    let mut a = DMatrix::<f64>::zeros(2 * m, n);
    let mut rhs = DMatrix::<f64>::zeros(2 * m, 1);
    for r in 0..m {
        for c in 0..n {
            a[(r, c)] = prob.h[(r, c)].re;
            a[(m + r, c)] = prob.h[(r, c)].im;
        }
        rhs[r] = prob.b[r].re;
        rhs[m + r] = prob.b[r].im;
    }
    let sol = lstsq(a.clone(), &rhs, RANK_TOLERANCE)?;
    let inertia: Vec<f64> = sol.solution.column(0).iter().copied().collect();
    let residual = (&a * &sol.solution - &rhs).norm();
    Ok(InertiaEstimate {
        labels: prob.labels.clone(),
        system_wide: inertia.iter().sum(),
        inertia,
        residual,
        condition: sol.condition(),
        solver: if sol.full_rank() {
            Solver::LeastSquares
        } else {
            Solver::PseudoInverse
        },
        rows: m,
        window: prob.window,
    })
}

/// Decomposition settings for the end-to-end estimate.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct EstimatorConfig {
    /// Prony order; `None` takes the largest the window admits.
    pub order: Option<usize>,
    /// Optional energy threshold applied after the decomposition.
    pub energy_eps: Option<f64>,
}

impl EstimatorConfig {
    pub fn with_order(order: usize) -> Self {
        Self {
            order: Some(order),
            ..Self::default()
        }
    }

    pub fn decompose(&self, data: &TimeSeriesSet) -> Result<KoopmanSpectrum> {
        let order = self.order.unwrap_or_else(|| max_order(data.len()));
        let spec = vector_prony(data, order)?;
        match self.energy_eps {
            Some(eps) => spec.select(ModePolicy::Energy(eps)),
            None => Ok(spec),
        }
    }
}

/// Decompose, assemble and solve on all of `data`.
pub fn estimate_from_data(data: &TimeSeriesSet, cfg: &EstimatorConfig) -> Result<InertiaEstimate> {
    let partition = Partition::from_labels(data.labels())?;
    let spec = cfg.decompose(data)?;
    estimate_inertia(&assemble_system(&spec, &partition)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WindowEstimate {
    pub window: f64,
    pub estimate: InertiaEstimate,
}

/// Estimate on the first `window` seconds of `data`.
pub fn estimate_window(
    data: &TimeSeriesSet,
    window: f64,
    cfg: &EstimatorConfig,
) -> Result<InertiaEstimate> {
    let run = || -> Result<InertiaEstimate> {
        let mut est = estimate_from_data(&data.window(window)?, cfg)?;
        est.window = Some(window);
        Ok(est)
    };
    run().map_err(|e| e.in_window(window))
}

/// One estimate per window length, in the order given. Windows run in
/// parallel on the current rayon pool.
pub fn window_sweep(
    data: &TimeSeriesSet,
    windows: &[f64],
    cfg: &EstimatorConfig,
) -> Result<Vec<WindowEstimate>> {
    windows
        .par_iter()
        .map(|&window| {
            estimate_window(data, window, cfg).map(|estimate| WindowEstimate { window, estimate })
        })
        .collect()
}

/// Estimate with the speed channel `dropped` removed. The system-wide value
/// is the sum over the remaining generators.
pub fn leave_one_out(
    data: &TimeSeriesSet,
    dropped: &str,
    window: f64,
    cfg: &EstimatorConfig,
) -> Result<InertiaEstimate> {
    let reduced = data.without_channel(dropped)?;
    if !reduced.labels().iter().any(|l| l.starts_with(SPEED_PREFIX)) {
        return Err(Error::NoSpeedChannels);
    }
    estimate_window(&reduced, window, cfg)
}

/// [`leave_one_out`] for every speed channel in turn.
pub fn leave_each_out(
    data: &TimeSeriesSet,
    window: f64,
    cfg: &EstimatorConfig,
) -> Result<Vec<(String, InertiaEstimate)>> {
    let speeds: Vec<String> = data
        .labels()
        .iter()
        .filter(|l| l.starts_with(SPEED_PREFIX))
        .cloned()
        .collect();
    speeds
        .par_iter()
        .map(|label| leave_one_out(data, label, window, cfg).map(|e| (label.clone(), e)))
        .collect()
}
