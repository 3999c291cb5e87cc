//! Inertia estimation for multi-machine power systems from sampled
//! rotor-speed and accelerating-power data.
//!
//! The pipeline has four stages:
//!
//! * [`grid_model`] holds the network, solves the pre-fault power flow and
//!   Kron-reduces the network to generator internal nodes.
//! * [`simulator`] integrates the classical swing equations through a
//!   fault sequence and samples the observables.
//! * [`kmd`] computes a finite Koopman mode decomposition of multichannel
//!   data by vector Prony analysis.
//! * [`inertia`] turns the Koopman eigenvalues and modes into a linear
//!   system for the inertia vector and solves it.
//!
//! [`io`] covers CSV interchange and run configuration.

pub mod error;
pub mod grid_model;
pub mod inertia;
pub mod io;
pub mod kmd;
pub mod linalg;
pub mod simulator;

pub use error::{Error, Result};
pub use inertia::{
    EstimationProblem, EstimatorConfig, InertiaEstimate, Partition, Solver, WindowEstimate,
};
pub use kmd::{KoopmanMode, KoopmanSpectrum, ModePolicy};
pub use simulator::{Simulation, TimeSeriesSet, Trajectory};
pub use grid_model::{
    Branch, Bus, BusKind, FaultScenario, Generator, NetworkModel, OperatingPoint, Phase,
    PowerFlowSolution, ReducedNetwork, SwingSystem, SystemState,
};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Label of the net accelerating power channel.
pub const POWER_CHANNEL: &str = "deltaP";

/// Channel label for the rotor speed of generator `id`.
pub fn omega_label(id: usize) -> String {
    format!("omega_{id}")
}
