//! Multi-machine network model with classical generators.
//!
//! Generators are constant EMFs behind transient reactance, loads are
//! constant impedances at the power-flow solution, and the network is
//! Kron-reduced to the generator internal nodes for each topology phase of
//! a fault sequence.

mod ieee39;
pub mod kron;
mod network;
mod power_flow;
mod scenario;
mod swing;

pub use kron::{augmented_admittance, kron_reduce, AugmentedAdmittance, ReducedNetwork};
pub use network::{Branch, Bus, BusKind, Generator, NetworkModel};
pub use power_flow::{solve_power_flow, OperatingPoint, PowerFlowSolution};
pub use scenario::{FaultScenario, Phase, FAULT_CONDUCTANCE};
pub use swing::{SwingSystem, SystemState};

/// Synchronous angular speed in rad/s for a system frequency in Hz.
/// Default uniform scale on the builtin loads and dispatch for fault
/// studies. At nominal loading the reference faults at buses 16 and 23 lose
/// synchronism under a near-bolted fault; at 0.2 both stay well inside the
/// stable region.
pub const DEFAULT_LOADING: f64 = 0.2;

pub fn synchronous_speed(frequency_hz: f64) -> f64 {
    2.0 * std::f64::consts::PI * frequency_hz
}
