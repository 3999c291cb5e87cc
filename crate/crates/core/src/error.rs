use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("power flow did not converge after {iterations} iterations (mismatch {mismatch:.3e} p.u.)")]
    PowerFlowDiverged { iterations: usize, mismatch: f64 },

    #[error("singular interior block during Kron reduction at bus {bus}")]
    SingularReduction { bus: usize },

    #[error("invalid fault scenario: {0}")]
    InvalidScenario(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("simulation diverged at t = {time:.6} s")]
    Diverged { time: f64 },

    #[error("time alignment: {0}")]
    Alignment(String),

    #[error("insufficient data: {samples} samples, order {order} needs at least {needed}")]
    InsufficientData {
        samples: usize,
        order: usize,
        needed: usize,
    },

    #[error("degenerate spectrum: eigenvalues {0} and {1} coincide")]
    DegenerateSpectrum(usize, usize),

    #[error("logarithm of zero eigenvalue is undefined")]
    ZeroEigenvalue,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("mode selection kept no modes")]
    EmptySelection,

    #[error("no accelerating-power channel `{0}` in data")]
    MissingPowerChannel(String),

    #[error("no rotor-speed channels in data")]
    NoSpeedChannels,

    #[error("unknown channel `{0}`")]
    UnknownChannel(String),

    #[error("estimation system carries no information (all-zero matrix)")]
    NoInformation,

    #[error("window {window} s: {source}")]
    Window {
        window: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: row {row}, column {column}: {message}")]
    Parse {
        path: PathBuf,
        row: usize,
        column: usize,
        message: String,
    },

    #[error("{path}: non-uniform timestamps at row {row} (gap {gap:.12e} s, expected {expected:.12e} s)")]
    NonUniform {
        path: PathBuf,
        row: usize,
        gap: f64,
        expected: f64,
    },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn in_window(self, window: f64) -> Self {
        Error::Window {
            window,
            source: Box::new(self),
        }
    }
}
