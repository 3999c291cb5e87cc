//! Newton-Raphson AC power flow in polar coordinates and the classical
//! generator initialization that follows from it.

use nalgebra::{DMatrix, DVector};

use super::network::{BusKind, NetworkModel};
use crate::{Error, Result, C64};

pub const MAX_ITERATIONS: usize = 50;
pub const TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct PowerFlowSolution {
    /// Bus voltage phasors in `NetworkModel::buses` order.
    pub voltages: Vec<C64>,
    pub iterations: usize,
    /// Infinity norm of the final P/Q mismatch, p.u.
    pub mismatch: f64,
}

/// Complex power injected into the network at each bus.
pub(crate) fn injections(y: &DMatrix<C64>, v: &DVector<C64>) -> DVector<C64> {
    let current = y * v;
    v.zip_map(&current, |vk, ik| vk * ik.conj())
}

pub fn solve_power_flow(net: &NetworkModel) -> Result<PowerFlowSolution> {
    net.validate()?;
    let n = net.buses.len();
    let y = net.bus_admittance();
    let index = net.bus_index();

    let mut spec = vec![C64::new(0.0, 0.0); n];
    for (k, bus) in net.buses.iter().enumerate() {
        spec[k] -= C64::new(bus.p_load, bus.q_load);
    }
    for g in &net.generators {
        spec[index[&g.bus]] += C64::new(g.p_gen, 0.0);
    }

    let pvpq: Vec<usize> = (0..n)
        .filter(|&k| net.buses[k].kind != BusKind::Slack)
        .collect();
    let pq: Vec<usize> = (0..n)
        .filter(|&k| net.buses[k].kind == BusKind::Pq)
        .collect();

    let mut vm: Vec<f64> = net
        .buses
        .iter()
        .map(|b| if b.kind == BusKind::Pq { 1.0 } else { b.v_set })
        .collect();
    let mut va = vec![0.0; n];
    let phasors = |vm: &[f64], va: &[f64]| -> DVector<C64> {
        DVector::from_iterator(n, vm.iter().zip(va).map(|(&m, &a)| C64::from_polar(m, a)))
    };

    let mismatch_vector = |v: &DVector<C64>| -> DVector<f64> {
        let s = injections(&y, v);
        let mut f = DVector::zeros(pvpq.len() + pq.len());
        for (r, &k) in pvpq.iter().enumerate() {
            f[r] = (s[k] - spec[k]).re;
        }
        for (r, &k) in pq.iter().enumerate() {
            f[pvpq.len() + r] = (s[k] - spec[k]).im;
        }
        f
    };

    let mut v = phasors(&vm, &va);
    let mut f = mismatch_vector(&v);
    let mut norm = f.amax();
    for iteration in 0..=MAX_ITERATIONS {
        if !norm.is_finite() {
            break;
        }
        if norm < TOLERANCE {
            return Ok(PowerFlowSolution {
                voltages: v.iter().copied().collect(),
                iterations: iteration,
                mismatch: norm,
            });
        }
        if iteration == MAX_ITERATIONS {
            break;
        }
        let jac = jacobian(&y, &v, &pvpq, &pq);
        let Some(dx) = jac.lu().solve(&(-&f)) else {
            break;
        };
        for (r, &k) in pvpq.iter().enumerate() {
            va[k] += dx[r];
        }
        for (r, &k) in pq.iter().enumerate() {
            vm[k] += dx[pvpq.len() + r];
        }
        v = phasors(&vm, &va);
        f = mismatch_vector(&v);
        norm = f.amax();
    }
    Err(Error::PowerFlowDiverged {
        iterations: MAX_ITERATIONS,
        mismatch: norm,
    })
}

/// Power-flow Jacobian with respect to angles at PV/PQ buses and magnitudes
/// at PQ buses.
fn jacobian(y: &DMatrix<C64>, v: &DVector<C64>, pvpq: &[usize], pq: &[usize]) -> DMatrix<f64> {
    let n = v.len();
    let i_bus = y * v;
    let v_unit = v.map(|x| x / x.norm());
    let j = C64::i();
    // dS/dVa = j diag(V) conj(diag(I) - Y diag(V))
    // dS/dVm = diag(V) conj(Y diag(V/|V|)) + conj(diag(I)) diag(V/|V|)
    let mut ds_dva = DMatrix::zeros(n, n);
    let mut ds_dvm = DMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            let diag_i = if r == c { i_bus[r] } else { C64::new(0.0, 0.0) };
            ds_dva[(r, c)] = j * v[r] * (diag_i - y[(r, c)] * v[c]).conj();
            let mut dm = v[r] * (y[(r, c)] * v_unit[c]).conj();
            if r == c {
                dm += i_bus[r].conj() * v_unit[r];
            }
            ds_dvm[(r, c)] = dm;
        }
    }
    let (a, b) = (pvpq.len(), pq.len());
    let mut jac = DMatrix::zeros(a + b, a + b);
    for (r, &kr) in pvpq.iter().enumerate() {
        for (c, &kc) in pvpq.iter().enumerate() {
            jac[(r, c)] = ds_dva[(kr, kc)].re;
        }
        for (c, &kc) in pq.iter().enumerate() {
            jac[(r, a + c)] = ds_dvm[(kr, kc)].re;
        }
    }
    for (r, &kr) in pq.iter().enumerate() {
        for (c, &kc) in pvpq.iter().enumerate() {
            jac[(a + r, c)] = ds_dva[(kr, kc)].im;
        }
        for (c, &kc) in pq.iter().enumerate() {
            jac[(a + r, a + c)] = ds_dvm[(kr, kc)].im;
        }
    }
    jac
}

/// Pre-fault operating point of the classical model.
#[derive(Debug, Clone)]
pub struct OperatingPoint {
    /// Bus voltages in `buses` order.
    pub voltages: Vec<C64>,
    /// Constant-impedance load admittance at each bus.
    pub load_admittance: Vec<C64>,
    /// Complex power delivered by each generator, `generators` order.
    pub generator_power: Vec<C64>,
    /// Internal EMF behind x'd, `generators` order.
    pub emf: Vec<C64>,
    /// Mechanical power, equal to the pre-fault electrical output.
    pub mechanical_power: Vec<f64>,
}

impl OperatingPoint {
    /// Solves the power flow and initializes the generators from it.
    pub fn initialize(net: &NetworkModel) -> Result<(PowerFlowSolution, Self)> {
        let pf = solve_power_flow(net)?;
        let op = Self::from_voltages(net, &pf.voltages)?;
        Ok((pf, op))
    }

    /// Initializes generators and load admittances from arbitrary bus
    /// voltages. Only a converged power flow yields an equilibrium.
    pub fn from_voltages(net: &NetworkModel, voltages: &[C64]) -> Result<Self> {
        if voltages.len() != net.buses.len() {
            return Err(Error::DimensionMismatch {
                expected: net.buses.len(),
                actual: voltages.len(),
            });
        }
        let index = net.bus_index();
        let v = DVector::from_column_slice(voltages);
        let s_inj = injections(&net.bus_admittance(), &v);

        let load_admittance = net
            .buses
            .iter()
            .zip(voltages)
            .map(|(bus, vk)| C64::new(bus.p_load, -bus.q_load) / vk.norm_sqr())
            .collect();

        let mut generator_power = Vec::with_capacity(net.generators.len());
        let mut emf = Vec::with_capacity(net.generators.len());
        for g in &net.generators {
            let k = index[&g.bus];
            let bus = &net.buses[k];
            let s = s_inj[k] + C64::new(bus.p_load, bus.q_load);
            let current = (s / voltages[k]).conj();
            emf.push(voltages[k] + C64::new(0.0, g.xd_prime) * current);
            generator_power.push(s);
        }
        let mechanical_power = generator_power.iter().map(|s| s.re).collect();
        Ok(Self {
            voltages: voltages.to_vec(),
            load_admittance,
            generator_power,
            emf,
            mechanical_power,
        })
    }
}
