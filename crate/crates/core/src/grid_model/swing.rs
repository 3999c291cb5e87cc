//! Classical swing equations on a reduced network.

use super::kron::ReducedNetwork;
use super::network::NetworkModel;
use super::power_flow::OperatingPoint;
use crate::{Error, Result};

/// Rotor angles (rad, synchronous frame) and relative speeds (rad/s) of the
/// dynamic generators.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemState {
    pub delta: Vec<f64>,
    pub omega: Vec<f64>,
}

impl SystemState {
    pub fn len(&self) -> usize {
        self.delta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delta.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.delta.iter().chain(&self.omega).all(|x| x.is_finite())
    }

    /// `[delta; omega]` as one vector.
    pub fn pack(&self) -> Vec<f64> {
        let mut v = self.delta.clone();
        v.extend_from_slice(&self.omega);
        v
    }

    pub fn unpack(packed: &[f64]) -> Self {
        let n = packed.len() / 2;
        Self {
            delta: packed[..n].to_vec(),
            omega: packed[n..].to_vec(),
        }
    }
}

/// Swing dynamics `d(delta)/dt = omega`, `M d(omega)/dt = Pm - Pe - D omega`
/// for the dynamic generators. Infinite-bus nodes keep their pre-fault
/// angle.
#[derive(Debug, Clone)]
pub struct SwingSystem {
    /// Ids of the dynamic generators, in state order.
    pub generator_ids: Vec<usize>,
    pub inertia: Vec<f64>,
    pub mechanical_power: Vec<f64>,
    /// Uniform damping coefficient, p.u. power per rad/s. Zero by default.
    pub damping: f64,
    /// Internal-node index of each dynamic generator.
    nodes: Vec<usize>,
    /// Pre-fault angle of every internal node.
    node_angles: Vec<f64>,
}

impl SwingSystem {
    pub fn new(net: &NetworkModel, op: &OperatingPoint) -> Self {
        let mut generator_ids = Vec::new();
        let mut inertia = Vec::new();
        let mut mechanical_power = Vec::new();
        let mut nodes = Vec::new();
        for (k, g) in net.generators.iter().enumerate() {
            if let (false, Some(m)) = (g.infinite_bus, g.inertia) {
                generator_ids.push(g.id);
                inertia.push(m);
                mechanical_power.push(op.mechanical_power[k]);
                nodes.push(k);
            }
        }
        Self {
            generator_ids,
            inertia,
            mechanical_power,
            damping: 0.0,
            nodes,
            node_angles: op.emf.iter().map(|e| e.arg()).collect(),
        }
    }

    pub fn with_damping(mut self, damping: f64) -> Self {
        self.damping = damping;
        self
    }

    /// Number of dynamic generators.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Pre-fault equilibrium: power-flow angles, zero speed deviation.
    pub fn equilibrium(&self) -> SystemState {
        SystemState {
            delta: self.nodes.iter().map(|&k| self.node_angles[k]).collect(),
            omega: vec![0.0; self.len()],
        }
    }

    /// Angle of every internal node for the given dynamic-generator angles.
    pub fn node_angles(&self, delta: &[f64]) -> Vec<f64> {
        let mut angles = self.node_angles.clone();
        for (&k, &d) in self.nodes.iter().zip(delta) {
            angles[k] = d;
        }
        angles
    }

    fn check(&self, red: &ReducedNetwork, state_len: usize) -> Result<()> {
        if red.len() != self.node_angles.len() {
            return Err(Error::DimensionMismatch {
                expected: self.node_angles.len(),
                actual: red.len(),
            });
        }
        if state_len != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                actual: state_len,
            });
        }
        Ok(())
    }

    /// Accelerating power `Pm_i - Pe_i` of each dynamic generator.
    pub fn accelerating_power(&self, red: &ReducedNetwork, delta: &[f64]) -> Result<Vec<f64>> {
        self.check(red, delta.len())?;
        let mut pe = vec![0.0; red.len()];
        red.electrical_power_into(&self.node_angles(delta), &mut pe);
        Ok(self
            .nodes
            .iter()
            .zip(&self.mechanical_power)
            .map(|(&k, pm)| pm - pe[k])
            .collect())
    }

    /// Net accelerating power of the system, the sum over dynamic generators.
    pub fn net_accelerating_power(&self, red: &ReducedNetwork, delta: &[f64]) -> Result<f64> {
        Ok(self.accelerating_power(red, delta)?.iter().sum())
    }

    pub fn rhs(&self, state: &SystemState, red: &ReducedNetwork) -> Result<SystemState> {
        if state.omega.len() != state.delta.len() {
            return Err(Error::DimensionMismatch {
                expected: state.delta.len(),
                actual: state.omega.len(),
            });
        }
        let dp = self.accelerating_power(red, &state.delta)?;
        Ok(SystemState {
            delta: state.omega.clone(),
            omega: dp
                .iter()
                .zip(&state.omega)
                .zip(&self.inertia)
                .map(|((p, w), m)| (p - self.damping * w) / m)
                .collect(),
        })
    }

    /// Right-hand side on packed `[delta; omega]` vectors. Dimensions are
    /// assumed checked; `angles` and `pe` are scratch space of node length.
    pub(crate) fn rhs_packed(
        &self,
        red: &ReducedNetwork,
        y: &[f64],
        dy: &mut [f64],
        angles: &mut [f64],
        pe: &mut [f64],
    ) {
        let n = self.len();
        let (delta, omega) = y.split_at(n);
        angles.copy_from_slice(&self.node_angles);
        for (&k, &d) in self.nodes.iter().zip(delta) {
            angles[k] = d;
        }
        red.electrical_power_into(angles, pe);
        dy[..n].copy_from_slice(omega);
        for i in 0..n {
            let dp = self.mechanical_power[i] - pe[self.nodes[i]];
            dy[n + i] = (dp - self.damping * omega[i]) / self.inertia[i];
        }
    }

    pub(crate) fn node_count(&self) -> usize {
        self.node_angles.len()
    }

    pub(crate) fn validate_network(&self, red: &ReducedNetwork) -> Result<()> {
        self.check(red, self.len())
    }
}
