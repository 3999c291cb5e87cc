//! Reduction of the network to generator internal nodes.
//!
//! The augmented admittance matrix orders generator internal nodes first
//! (in `NetworkModel::generators` order) followed by the buses. Every bus is
//! interior and is eliminated.

use nalgebra::DMatrix;

use super::network::NetworkModel;
use super::power_flow::OperatingPoint;
use super::scenario::{FaultScenario, Phase, FAULT_CONDUCTANCE};
use crate::{Error, Result, C64};

/// Admittance matrix of the network with loads and generator reactances,
/// before reduction.
#[derive(Debug, Clone)]
pub struct AugmentedAdmittance {
    pub y: DMatrix<C64>,
    /// Number of leading generator internal nodes.
    pub internal: usize,
    /// Bus ids of the trailing nodes.
    pub bus_ids: Vec<usize>,
}

/// Admittance among generator internal nodes for one topology phase.
#[derive(Debug, Clone)]
pub struct ReducedNetwork {
    pub phase: Phase,
    pub y: DMatrix<C64>,
    /// EMF magnitude of each internal node.
    pub emf_magnitude: Vec<f64>,
    pub generator_ids: Vec<usize>,
}

pub fn augmented_admittance(
    net: &NetworkModel,
    op: &OperatingPoint,
    phase: Phase,
    scenario: &FaultScenario,
) -> Result<AugmentedAdmittance> {
    scenario.validate(net)?;
    let tripped = scenario.tripped_branch(net)?;
    let index = net.bus_index();
    let y_bus = match phase {
        Phase::PostFault => {
            let removed = &net.branches[tripped];
            net.bus_admittance_where(|b| !std::ptr::eq(b, removed))
        }
        Phase::PreFault | Phase::FaultOn => net.bus_admittance(),
    };

    let g = net.generators.len();
    let n = net.buses.len();
    let mut y = DMatrix::zeros(g + n, g + n);
    y.view_mut((g, g), (n, n)).copy_from(&y_bus);
    for (k, yl) in op.load_admittance.iter().enumerate() {
        y[(g + k, g + k)] += yl;
    }
    for (i, gen) in net.generators.iter().enumerate() {
        let b = g + index[&gen.bus];
        let yg = C64::new(0.0, gen.xd_prime).inv();
        y[(i, i)] += yg;
        y[(b, b)] += yg;
        y[(i, b)] -= yg;
        y[(b, i)] -= yg;
    }
    if phase == Phase::FaultOn {
        let f = g + index[&scenario.bus];
        y[(f, f)] += C64::new(FAULT_CONDUCTANCE, 0.0);
    }
    Ok(AugmentedAdmittance {
        y,
        internal: g,
        bus_ids: net.buses.iter().map(|b| b.id).collect(),
    })
}

/// Eliminates nodes `keep..n` one at a time, last first, returning the
/// `keep x keep` reduced matrix. On a zero pivot returns the index of the
/// offending node.
pub fn eliminate(mut y: DMatrix<C64>, keep: usize) -> std::result::Result<DMatrix<C64>, usize> {
    let n = y.nrows();
    assert_eq!(n, y.ncols(), "admittance matrix must be square");
    let scale = y.iter().map(|v| v.norm()).fold(0.0, f64::max);
    for k in (keep..n).rev() {
        let pivot = y[(k, k)];
        if !(pivot.norm() > f64::EPSILON * scale) {
            return Err(k);
        }
        for i in 0..k {
            let factor = y[(i, k)] / pivot;
            if factor == C64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..k {
                let ykj = y[(k, j)];
                y[(i, j)] -= factor * ykj;
            }
        }
    }
    Ok(y.view((0, 0), (keep, keep)).into_owned())
}

pub fn kron_reduce(
    net: &NetworkModel,
    op: &OperatingPoint,
    phase: Phase,
    scenario: &FaultScenario,
) -> Result<ReducedNetwork> {
    let aug = augmented_admittance(net, op, phase, scenario)?;
    let y = eliminate(aug.y, aug.internal).map_err(|k| Error::SingularReduction {
        bus: aug.bus_ids[k - aug.internal],
    })?;
    Ok(ReducedNetwork {
        phase,
        y,
        emf_magnitude: op.emf.iter().map(|e| e.norm()).collect(),
        generator_ids: net.generators.iter().map(|g| g.id).collect(),
    })
}

impl ReducedNetwork {
    pub fn len(&self) -> usize {
        self.y.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Currents injected at the internal nodes for the given EMFs.
    pub fn currents(&self, emf: &[C64]) -> Vec<C64> {
        (0..self.len())
            .map(|i| (0..self.len()).map(|j| self.y[(i, j)] * emf[j]).sum())
            .collect()
    }

    /// Largest entry of `Y - Y^T`.
    pub fn asymmetry(&self) -> f64 {
        (&self.y - self.y.transpose())
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    /// Electrical output of every internal node for the given rotor angles
    /// (one per node, infinite buses included):
    /// `P_i = sum_j E_i E_j (G_ij cos(d_i - d_j) + B_ij sin(d_i - d_j))`.
    pub fn electrical_power(&self, angles: &[f64]) -> Result<Vec<f64>> {
        let n = self.len();
        if angles.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: angles.len(),
            });
        }
        let mut out = vec![0.0; n];
        self.electrical_power_into(angles, &mut out);
        Ok(out)
    }

    pub(crate) fn electrical_power_into(&self, angles: &[f64], out: &mut [f64]) {
        let n = self.len();
        let e = &self.emf_magnitude;
        for i in 0..n {
            let mut p = 0.0;
            for j in 0..n {
                let yij = self.y[(i, j)];
                let (s, c) = (angles[i] - angles[j]).sin_cos();
                p += e[j] * (yij.re * c + yij.im * s);
            }
            out[i] = e[i] * p;
        }
    }
}
