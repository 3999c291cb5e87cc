use serde::{Deserialize, Serialize};

use super::network::NetworkModel;
use crate::{Error, Result};

/// Shunt conductance (p.u.) placed at the faulted bus while the fault is on.
pub const FAULT_CONDUCTANCE: f64 = 1e6;

/// Network topology in force during one segment of a fault sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase {
    PreFault,
    FaultOn,
    PostFault,
}

/// Three-phase fault at a bus, cleared by tripping one branch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaultScenario {
    pub bus: usize,
    /// Branch removed at clearing, by its end buses.
    pub trip: (usize, usize),
    /// Fault duration in cycles of the system frequency.
    pub cycles: f64,
    /// Fault inception time, s.
    #[serde(default)]
    pub start: f64,
}

impl FaultScenario {
    /// Fault at bus 16 for 10 cycles, line 16-17 tripped.
    pub fn case_i() -> Self {
        Self {
            bus: 16,
            trip: (16, 17),
            cycles: 10.0,
            start: 0.0,
        }
    }

    /// Fault at bus 23 for 15 cycles, line 22-23 tripped.
    pub fn case_ii() -> Self {
        Self {
            bus: 23,
            trip: (22, 23),
            cycles: 15.0,
            start: 0.0,
        }
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "i" | "1" => Some(Self::case_i()),
            "ii" | "2" => Some(Self::case_ii()),
            _ => None,
        }
    }

    /// Fault duration in seconds.
    pub fn duration(&self, frequency_hz: f64) -> f64 {
        self.cycles / frequency_hz
    }

    pub fn clearing_time(&self, frequency_hz: f64) -> f64 {
        self.start + self.duration(frequency_hz)
    }

    /// Index into `net.branches` of the branch tripped at clearing.
    pub fn tripped_branch(&self, net: &NetworkModel) -> Result<usize> {
        let (a, b) = self.trip;
        net.branches
            .iter()
            .position(|br| br.in_service && br.connects(a, b))
            .ok_or_else(|| Error::InvalidScenario(format!("no in-service branch {a}-{b}")))
    }

    pub fn validate(&self, net: &NetworkModel) -> Result<()> {
        if !(self.cycles > 0.0) || !self.cycles.is_finite() {
            return Err(Error::InvalidScenario(format!(
                "fault duration must be positive, got {} cycles",
                self.cycles
            )));
        }
        if !(self.start >= 0.0) || !self.start.is_finite() {
            return Err(Error::InvalidScenario(format!(
                "fault start must be non-negative, got {}",
                self.start
            )));
        }
        if !net.buses.iter().any(|b| b.id == self.bus) {
            return Err(Error::InvalidScenario(format!("unknown faulted bus {}", self.bus)));
        }
        self.tripped_branch(net).map(|_| ())
    }
}
