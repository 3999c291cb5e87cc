//! Builders and independent oracles shared by the integration tests.
#![allow(dead_code)]

use kmd_inertia::grid_model::{FAULT_CONDUCTANCE, DEFAULT_LOADING};
use kmd_inertia::grid_model::kron_reduce;
use kmd_inertia::inertia::{assemble_system, estimate_inertia};
use kmd_inertia::kmd::vector_prony;
use kmd_inertia::simulator::integrate_segments;
use kmd_inertia::{
    Branch, Bus, BusKind, FaultScenario, Generator, KoopmanSpectrum, NetworkModel,
    OperatingPoint, Partition, Phase, Simulation, TimeSeriesSet, C64,
};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const T60: f64 = 1.0 / 60.0;
pub const SYSTEM_WIDE: f64 = 1.4998;

fn bus(id: usize, kind: BusKind, p: f64, q: f64) -> Bus {
    Bus {
        id,
        kind,
        v_set: 1.0,
        p_load: p,
        q_load: q,
        g_shunt: 0.0,
        b_shunt: 0.0,
    }
}

fn line(from: usize, to: usize, r: f64, x: f64, b: f64) -> Branch {
    Branch {
        from,
        to,
        r,
        x,
        b,
        tap: 1.0,
        in_service: true,
    }
}

fn generator(id: usize, bus: usize, xd: f64, m: Option<f64>, p: f64) -> Generator {
    Generator {
        id,
        bus,
        xd_prime: xd,
        inertia: m,
        p_gen: p,
        infinite_bus: m.is_none(),
    }
}

/// Random connected network of `n` buses with a generator on the first
/// `gens` buses, random loads and shunts, some off-nominal taps, plus a
/// random internal operating point. Branch 0 joins buses 1 and 2.
pub fn random_network<R: Rng>(rng: &mut R, n: usize, gens: usize) -> (NetworkModel, OperatingPoint) {
    assert!(n >= 2 && gens >= 1 && gens <= n);
    let mut buses = Vec::new();
    for id in 1..=n {
        let kind = if id == 1 {
            BusKind::Slack
        } else if id <= gens {
            BusKind::Pv
        } else {
            BusKind::Pq
        };
        let mut b = bus(id, kind, rng.random_range(0.1..2.0), rng.random_range(-0.5..0.8));
        b.g_shunt = rng.random_range(0.0..0.05);
        b.b_shunt = rng.random_range(-0.2..0.2);
        buses.push(b);
    }
    let mut branches = vec![line(1, 2, rng.random_range(0.0..0.05), rng.random_range(0.02..0.3), 0.1)];
    for id in 3..=n {
        let to = rng.random_range(1..id);
        branches.push(line(
            to,
            id,
            rng.random_range(0.0..0.05),
            rng.random_range(0.02..0.3),
            rng.random_range(0.0..0.3),
        ));
    }
    for _ in 0..n / 2 {
        let a = rng.random_range(1..=n);
        let b = rng.random_range(1..=n);
        if a != b {
            let mut br = line(a, b, rng.random_range(0.0..0.05), rng.random_range(0.02..0.3), 0.05);
            if rng.random_bool(0.3) {
                br.tap = rng.random_range(0.9..1.1);
            }
            branches.push(br);
        }
    }
    let generators = (1..=gens)
        .map(|k| generator(k, k, rng.random_range(0.02..0.3), Some(rng.random_range(0.05..0.3)), 1.0))
        .collect();
    let net = NetworkModel {
        base_mva: 100.0,
        frequency_hz: 60.0,
        buses,
        branches,
        generators,
    };
    net.validate().expect("random network is valid");
    let voltages: Vec<C64> = (0..n)
        .map(|_| C64::from_polar(rng.random_range(0.9..1.1), rng.random_range(-0.4..0.4)))
        .collect();
    let op = OperatingPoint::from_voltages(&net, &voltages).unwrap();
    (net, op)
}

/// Full augmented admittance, internal nodes first, assembled directly
/// from the branch data.
pub fn full_admittance(
    net: &NetworkModel,
    op: &OperatingPoint,
    phase: Phase,
    scenario: &FaultScenario,
) -> DMatrix<C64> {
    let g = net.generators.len();
    let n = net.buses.len();
    let pos = |id: usize| g + net.buses.iter().position(|b| b.id == id).unwrap();
    let mut y = DMatrix::<C64>::zeros(g + n, g + n);
    let mut tripped = false;
    for br in &net.branches {
        if !br.in_service {
            continue;
        }
        if phase == Phase::PostFault && !tripped && br.connects(scenario.trip.0, scenario.trip.1) {
            tripped = true;
            continue;
        }
        let ys = C64::new(1.0, 0.0) / C64::new(br.r, br.x);
        let half = C64::new(0.0, br.b / 2.0);
        let (f, t) = (pos(br.from), pos(br.to));
        y[(f, f)] += (ys + half) / (br.tap * br.tap);
        y[(t, t)] += ys + half;
        y[(f, t)] -= ys / br.tap;
        y[(t, f)] -= ys / br.tap;
    }
    for (k, b) in net.buses.iter().enumerate() {
        let v2 = op.voltages[k].norm_sqr();
        y[(g + k, g + k)] += C64::new(b.g_shunt, b.b_shunt) + C64::new(b.p_load, -b.q_load) / v2;
    }
    for (i, gen) in net.generators.iter().enumerate() {
        let yg = C64::new(0.0, -1.0 / gen.xd_prime);
        let b = pos(gen.bus);
        y[(i, i)] += yg;
        y[(b, b)] += yg;
        y[(i, b)] -= yg;
        y[(b, i)] -= yg;
    }
    if phase == Phase::FaultOn {
        let f = pos(scenario.bus);
        y[(f, f)] += C64::new(FAULT_CONDUCTANCE, 0.0);
    }
    y
}

/// Internal-node currents of the full network for internal voltages `e`,
/// with no injection at the buses: a dense block solve.
pub fn full_network_currents(y: &DMatrix<C64>, g: usize, e: &[C64]) -> Vec<C64> {
    let n = y.nrows() - g;
    let e = DVector::from_column_slice(e);
    let y_ee = y.view((0, 0), (g, g));
    let y_eb = y.view((0, g), (g, n));
    let y_be = y.view((g, 0), (n, g));
    let y_bb = y.view((g, g), (n, n)).into_owned();
    let v_bus = y_bb.lu().solve(&(-(y_be * &e))).expect("interior block is nonsingular");
    (y_ee * &e + y_eb * v_bus).iter().copied().collect()
}

/// Single machine (generator 2, bus 2) against an infinite bus (generator
/// 1, bus 1) over a lossless line. `p` is the scheduled output.
pub fn smib(m: f64, p: f64) -> NetworkModel {
    NetworkModel {
        base_mva: 100.0,
        frequency_hz: 60.0,
        buses: vec![bus(1, BusKind::Slack, 0.0, 0.0), bus(2, BusKind::Pv, 0.0, 0.0), bus(3, BusKind::Pq, 0.0, 0.0)],
        branches: vec![line(2, 3, 0.0, 0.2, 0.0), line(3, 1, 0.0, 0.2, 0.0), line(2, 1, 0.0, 0.5, 0.0)],
        generators: vec![generator(1, 1, 0.05, None, 0.0), generator(2, 2, 0.2, Some(m), p)],
    }
}

/// Three machines and an infinite bus on a lossless meshed network with
/// purely reactive loads, so the reduced network has no conductance.
pub fn lossless_network() -> NetworkModel {
    let mut buses = vec![
        bus(1, BusKind::Slack, 0.0, 0.0),
        bus(2, BusKind::Pv, 0.0, 0.0),
        bus(3, BusKind::Pv, 0.0, 0.0),
        bus(4, BusKind::Pv, 0.0, 0.0),
        bus(5, BusKind::Pq, 0.0, 0.3),
        bus(6, BusKind::Pq, 0.0, -0.1),
    ];
    buses[5].b_shunt = 0.05;
    NetworkModel {
        base_mva: 100.0,
        frequency_hz: 60.0,
        buses,
        branches: vec![
            line(1, 5, 0.0, 0.1, 0.02),
            line(2, 5, 0.0, 0.15, 0.0),
            line(3, 6, 0.0, 0.12, 0.04),
            line(4, 6, 0.0, 0.2, 0.0),
            line(5, 6, 0.0, 0.1, 0.02),
            line(1, 6, 0.0, 0.3, 0.0),
        ],
        generators: vec![
            generator(1, 1, 0.02, None, 0.0),
            generator(2, 2, 0.1, Some(0.15), 0.8),
            generator(3, 3, 0.08, Some(0.2), 1.0),
            generator(4, 4, 0.12, Some(0.1), 0.5),
        ],
    }
}

/// Real multichannel samples `y_k = sum_j z_j^k v_j` for a conjugate-closed
/// mode list.
pub fn synthetic(modes: &[(C64, Vec<C64>)], samples: usize, labels: &[&str], period: f64) -> TimeSeriesSet {
    let channels = labels.len();
    let data = DMatrix::from_fn(samples, channels, |k, c| {
        modes
            .iter()
            .map(|(z, v)| (z.powu(k as u32) * v[c]).re)
            .sum::<f64>()
    });
    TimeSeriesSet::new(period, 0.0, labels.iter().map(|s| s.to_string()).collect(), data).unwrap()
}

/// Adds each mode's conjugate partner.
pub fn with_conjugates(modes: &[(C64, Vec<C64>)]) -> Vec<(C64, Vec<C64>)> {
    let mut out = Vec::new();
    for (z, v) in modes {
        out.push((*z, v.clone()));
        if z.im != 0.0 {
            out.push((z.conj(), v.iter().map(|a| a.conj()).collect()));
        }
    }
    out
}

/// Exact swing data: `omega_i(t) = sum_j Re(w_ij e^{lambda_j t})` and
/// `deltaP = sum_i M_i d(omega_i)/dt`, evaluated in closed form.
pub fn swing_channels(
    m: &[f64],
    modes: &[(C64, Vec<C64>)],
    samples: usize,
    period: f64,
) -> TimeSeriesSet {
    let n = m.len();
    let mut labels: Vec<String> = (0..n).map(|i| format!("omega_{}", i + 2)).collect();
    labels.push("deltaP".into());
    let modes = with_conjugates(modes);
    let data = DMatrix::from_fn(samples, n + 1, |k, c| {
        let t = k as f64 * period;
        modes
            .iter()
            .map(|(lambda, w)| {
                let e = (lambda * t).exp();
                if c < n {
                    (w[c] * e).re
                } else {
                    (0..n).map(|i| (lambda * w[i] * e).re * m[i]).sum()
                }
            })
            .sum()
    });
    TimeSeriesSet::new(period, 0.0, labels, data).unwrap()
}

/// The builtin 39-bus system at the default study loading.
pub fn study_network() -> NetworkModel {
    NetworkModel::ieee39().with_loading(DEFAULT_LOADING).unwrap()
}

/// Largest current mismatch between the reduced network and a dense solve
/// of the full network, over `trials` random networks and all phases.
pub fn kron_worst_mismatch(trials: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let n = rng.random_range(2..=10);
        let gens = rng.random_range(1..=n);
        let (net, op) = random_network(&mut rng, n, gens);
        let scenario = FaultScenario {
            bus: rng.random_range(1..=n),
            trip: (1, 2),
            cycles: 5.0,
            start: 0.0,
        };
        for phase in [Phase::PreFault, Phase::FaultOn, Phase::PostFault] {
            let red = kron_reduce(&net, &op, phase, &scenario).unwrap();
            let full = full_admittance(&net, &op, phase, &scenario);
            let e: Vec<C64> = (0..gens)
                .map(|_| C64::from_polar(rng.random_range(0.8..1.2), rng.random_range(-1.0..1.0)))
                .collect();
            let reduced = red.currents(&e);
            let direct = full_network_currents(&full, gens, &e);
            for (a, b) in reduced.iter().zip(&direct) {
                worst = worst.max((a - b).norm());
            }
        }
    }
    worst
}

pub fn relative_rms(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).norm() / b.norm()
}

/// Worst relative errors of a decomposition against known modes: each true
/// eigenvalue is matched to the nearest recovered one.
#[derive(Debug, Clone, Copy)]
pub struct RecoveryError {
    pub eigenvalue: f64,
    pub mode: f64,
    /// Root mean square of the reconstruction residual over all samples
    /// and channels.
    pub reconstruction: f64,
}

pub fn reconstruction_rms(spec: &KoopmanSpectrum, data: &TimeSeriesSet) -> f64 {
    let rec = spec.reconstruct(0..data.len());
    (rec.values - data.data()).norm() / ((data.len() * data.channels()) as f64).sqrt()
}

pub fn recovery_error(spec: &KoopmanSpectrum, truth: &[(C64, Vec<C64>)], data: &TimeSeriesSet) -> RecoveryError {
    let mut eigenvalue = 0.0f64;
    let mut mode = 0.0f64;
    for (z, v) in truth {
        let best = spec
            .modes
            .iter()
            .min_by(|a, b| (a.discrete - z).norm().total_cmp(&(b.discrete - z).norm()))
            .unwrap();
        eigenvalue = eigenvalue.max((best.discrete - z).norm() / z.norm());
        let diff: f64 = v.iter().zip(&best.amplitudes).map(|(a, b)| (a - b).norm_sqr()).sum();
        let norm: f64 = v.iter().map(|a| a.norm_sqr()).sum();
        mode = mode.max((diff / norm).sqrt());
    }
    RecoveryError {
        eigenvalue,
        mode,
        reconstruction: reconstruction_rms(spec, data),
    }
}

/// Five known modes (two oscillatory pairs and one real decay) on three
/// channels, 601 samples, with discrete eigenvalues spread around the unit
/// circle.
pub fn five_mode_signal() -> (Vec<(C64, Vec<C64>)>, TimeSeriesSet) {
    let modes = vec![
        (C64::from_polar(0.995, 0.7), vec![C64::new(0.5, 0.2), C64::new(-0.3, 0.4), C64::new(0.1, -0.6)]),
        (C64::from_polar(0.99, 1.9), vec![C64::new(0.2, -0.1), C64::new(0.25, 0.05), C64::new(-0.4, 0.3)]),
        (C64::new(0.98, 0.0), vec![C64::new(0.7, 0.0), C64::new(-0.2, 0.0), C64::new(0.4, 0.0)]),
    ];
    let truth = with_conjugates(&modes);
    let data = synthetic(&truth, 601, &["a", "b", "c"], T60);
    (truth, data)
}

/// The same layout with electromechanical modes (0.6 Hz and 1.3 Hz) sampled
/// at 60 Hz: every eigenvalue lies within 0.14 of 1.
pub fn clustered_five_mode_signal() -> (Vec<(C64, Vec<C64>)>, TimeSeriesSet) {
    let tau = std::f64::consts::TAU;
    let lam = [C64::new(-0.1, tau * 0.6), C64::new(-0.3, tau * 1.3)];
    let modes = vec![
        ((lam[0] * T60).exp(), vec![C64::new(0.5, 0.2), C64::new(-0.3, 0.4), C64::new(0.1, -0.6)]),
        ((lam[1] * T60).exp(), vec![C64::new(0.2, -0.1), C64::new(0.25, 0.05), C64::new(-0.4, 0.3)]),
        (C64::new((-0.5 * T60).exp(), 0.0), vec![C64::new(0.7, 0.0), C64::new(-0.2, 0.0), C64::new(0.4, 0.0)]),
    ];
    let truth = with_conjugates(&modes);
    let data = synthetic(&truth, 601, &["a", "b", "c"], T60);
    (truth, data)
}

pub fn five_mode_recovery() -> RecoveryError {
    let (truth, data) = five_mode_signal();
    let spec = vector_prony(&data, 5).unwrap();
    recovery_error(&spec, &truth, &data)
}

/// Relative error of the inertia recovered from closed-form single-machine
/// swing data: `omega = Re(w e^{lambda t})`, `deltaP = M d(omega)/dt`.
pub fn smib_recovery(m: f64) -> f64 {
    let lambda = C64::new(-0.2, std::f64::consts::TAU * 1.1);
    let data = swing_channels(&[m], &[(lambda, vec![C64::new(0.0, -0.01)])], 601, T60);
    let spec = vector_prony(&data, 2).unwrap();
    let partition = Partition::from_labels(data.labels()).unwrap();
    let est = estimate_inertia(&assemble_system(&spec, &partition).unwrap()).unwrap();
    (est.inertia[0] - m).abs() / m
}

/// Single-machine fault: bus 3 faulted for 6 cycles, line 2-1 tripped.
pub fn smib_simulation() -> Simulation {
    let scenario = FaultScenario {
        bus: 3,
        trip: (2, 1),
        cycles: 6.0,
        start: 0.0,
    };
    Simulation::new(&smib(0.1, 1.0), &scenario).unwrap()
}

/// `(e(dt) / e(dt/2))` for the end state of the single-machine fault run,
/// with errors against a run at `dt/8`. Close to 16 for a fourth-order
/// method.
pub fn rk4_order_ratio() -> f64 {
    let sim = smib_simulation();
    let end = |dt: f64| sim.integrate(2.0, dt).unwrap().last().pack();
    let reference = end(1.0 / 9600.0);
    let err = |dt: f64| {
        end(dt)
            .iter()
            .zip(&reference)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    };
    err(1.0 / 600.0) / err(1.0 / 1200.0)
}

/// Transient energy of a lossless system: kinetic energy, minus mechanical
/// work, minus the stored coupling energy of every node pair.
pub fn lossless_energy(sim: &Simulation, red: &kmd_inertia::ReducedNetwork, state: &kmd_inertia::SystemState) -> f64 {
    let sys = &sim.system;
    let angles = sys.node_angles(&state.delta);
    let e = &red.emf_magnitude;
    let mut w = 0.0;
    for i in 0..sys.len() {
        w += 0.5 * sys.inertia[i] * state.omega[i].powi(2) - sys.mechanical_power[i] * state.delta[i];
    }
    for i in 0..angles.len() {
        for j in i + 1..angles.len() {
            w -= e[i] * e[j] * red.y[(i, j)].im * (angles[i] - angles[j]).cos();
        }
    }
    w
}

/// Largest drift of the transient energy over 10 s after clearing, on the
/// lossless network with zero damping.
pub fn lossless_energy_drift() -> f64 {
    let scenario = FaultScenario {
        bus: 6,
        trip: (1, 6),
        cycles: 6.0,
        start: 0.0,
    };
    let sim = Simulation::new(&lossless_network(), &scenario).unwrap();
    let traj = sim.integrate(0.1 + 10.0, 1.0 / 1200.0).unwrap();
    let first = traj.clearing_index().unwrap();
    let w0 = lossless_energy(&sim, &sim.post_fault, &traj.states[first]);
    traj.states[first..]
        .iter()
        .map(|s| (lossless_energy(&sim, &sim.post_fault, s) - w0).abs())
        .fold(0.0, f64::max)
}

/// Largest speed deviation and angle drift over 10 s held at the pre-fault
/// equilibrium.
pub fn equilibrium_drift(net: &NetworkModel) -> f64 {
    let sim = Simulation::new(net, &FaultScenario::case_i()).unwrap();
    let eq = sim.system.equilibrium();
    let traj = integrate_segments(&sim.system, &eq, &[(&sim.pre_fault, 12000)], 1.0 / 1200.0, 0.0).unwrap();
    traj.states
        .iter()
        .flat_map(|s| {
            s.omega
                .iter()
                .map(|w| w.abs())
                .chain(s.delta.iter().zip(&eq.delta).map(|(a, b)| (a - b).abs()))
                .collect::<Vec<_>>()
        })
        .fold(0.0, f64::max)
}

/// Random conjugate-closed mode set: `pairs` oscillatory pairs with
/// frequencies at least 0.2 Hz apart, as per-sample multipliers for
/// sample period `period`.
pub fn random_modes<R: Rng>(rng: &mut R, pairs: usize, channels: usize, period: f64) -> Vec<(C64, Vec<C64>)> {
    let tau = std::f64::consts::TAU;
    let base = rng.random_range(0.2..0.5);
    let modes: Vec<(C64, Vec<C64>)> = (0..pairs)
        .map(|j| {
            let f = base + 0.35 * j as f64 + rng.random_range(0.0..0.1);
            let lambda = C64::new(rng.random_range(-0.5..0.0), tau * f);
            let v = (0..channels)
                .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            ((lambda * period).exp(), v)
        })
        .collect();
    with_conjugates(&modes)
}

/// Random conjugate-closed set of discrete eigenvalues, angles at least
/// 0.5 rad apart, radii in [0.97, 1].
pub fn random_discrete_modes<R: Rng>(rng: &mut R, pairs: usize, channels: usize) -> Vec<(C64, Vec<C64>)> {
    let base = rng.random_range(0.2..0.5);
    let modes: Vec<(C64, Vec<C64>)> = (0..pairs)
        .map(|j| {
            let angle = base + 0.7 * j as f64 + rng.random_range(0.0..0.2);
            let z = C64::from_polar(rng.random_range(0.97..1.0), angle);
            let v = (0..channels)
                .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            (z, v)
        })
        .collect();
    with_conjugates(&modes)
}

pub fn channel_labels(channels: usize) -> Vec<String> {
    (0..channels).map(|c| format!("y{c}")).collect()
}

pub fn random_signal(seed: u64) -> (Vec<(C64, Vec<C64>)>, TimeSeriesSet) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = rng.random_range(1..=3);
    let channels = rng.random_range(1..=4);
    let samples = rng.random_range(200..=601);
    let truth = random_discrete_modes(&mut rng, pairs, channels);
    let labels = channel_labels(channels);
    let labels: Vec<&str> = labels.iter().map(String::as_str).collect();
    let data = synthetic(&truth, samples, &labels, T60);
    (truth, data)
}

/// Every non-real mode has a conjugate partner with conjugate amplitudes,
/// and the reconstruction is real to rounding.
pub fn check_conjugate_closure(seed: u64) -> Result<(), String> {
    let (truth, data) = random_signal(seed);
    let spec = vector_prony(&data, truth.len() + 2).map_err(|e| e.to_string())?;
    for (j, mode) in spec.modes.iter().enumerate() {
        if mode.discrete.im.abs() <= 1e-8 {
            continue;
        }
        let p = spec
            .conjugate_partner(j)
            .ok_or_else(|| format!("seed {seed}: mode {j} has no partner"))?;
        for (a, b) in mode.amplitudes.iter().zip(&spec.modes[p].amplitudes) {
            if (a - b.conj()).norm() > 1e-6 * a.norm().max(1e-3) {
                return Err(format!("seed {seed}: amplitudes of {j}/{p} not conjugate"));
            }
        }
    }
    let rec = spec.reconstruct(0..data.len());
    let scale = data.data().amax();
    if rec.max_imaginary > 1e-8 * scale {
        return Err(format!("seed {seed}: imaginary residue {:e}", rec.max_imaginary));
    }
    Ok(())
}

/// Known modes are recovered from exact-order data.
pub fn check_exact_recovery(seed: u64) -> Result<(), String> {
    let (truth, data) = random_signal(seed);
    let spec = vector_prony(&data, truth.len()).map_err(|e| e.to_string())?;
    let err = recovery_error(&spec, &truth, &data);
    if err.eigenvalue > 1e-8 || err.mode > 1e-6 || err.reconstruction > 1e-9 {
        return Err(format!("seed {seed}: {err:?}"));
    }
    Ok(())
}

/// Sample period of the synthetic swing sets. Coarser than the simulator's
/// so that up to ten modes stay well resolved at exact order.
pub const SWING_PERIOD: f64 = 0.1;

/// Exact swing data for `n` machines with known inertia.
pub fn random_swing(seed: u64) -> (Vec<f64>, TimeSeriesSet) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=4);
    let m: Vec<f64> = (0..n).map(|_| rng.random_range(0.02..0.5)).collect();
    let modes = random_modes(&mut rng, n + 1, n, SWING_PERIOD);
    let modes: Vec<(C64, Vec<C64>)> = modes
        .into_iter()
        .filter(|(z, _)| z.im > 0.0)
        .map(|(z, w)| (z.ln() / SWING_PERIOD, w.iter().map(|a| a * 0.01).collect()))
        .collect();
    let data = swing_channels(&m, &modes, 301, SWING_PERIOD);
    (m, data)
}

fn exact_estimate(data: &TimeSeriesSet) -> Result<kmd_inertia::InertiaEstimate, String> {
    // n machines carry n + 1 oscillatory pairs, and there are n + 1 channels.
    let order = 2 * data.channels();
    let spec = vector_prony(data, order).map_err(|e| e.to_string())?;
    let partition = Partition::from_labels(data.labels()).map_err(|e| e.to_string())?;
    estimate_inertia(&assemble_system(&spec, &partition).map_err(|e| e.to_string())?).map_err(|e| e.to_string())
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1e-12)
}

/// Scaling the power channel by `c` scales the estimate by `c`; scaling
/// every speed channel by `c` divides it by `c`.
pub fn check_scaling_laws(seed: u64, c: f64) -> Result<(), String> {
    let (_, data) = random_swing(seed);
    let base = exact_estimate(&data)?;
    let power = exact_estimate(&data.scale_channel("deltaP", c).unwrap())?;
    let mut speeds = data.clone();
    for label in data.labels().iter().filter(|l| l.starts_with("omega_")) {
        speeds = speeds.scale_channel(label, c).unwrap();
    }
    let speeds = exact_estimate(&speeds)?;
    for k in 0..base.inertia.len() {
        if !close(power.inertia[k], c * base.inertia[k], 1e-6) {
            return Err(format!("seed {seed}: power scaling {} vs {}", power.inertia[k], c * base.inertia[k]));
        }
        if !close(speeds.inertia[k], base.inertia[k] / c, 1e-6) {
            return Err(format!("seed {seed}: speed scaling {} vs {}", speeds.inertia[k], base.inertia[k] / c));
        }
    }
    Ok(())
}

/// Reordering the speed channels reorders the estimate the same way.
pub fn check_permutation(seed: u64) -> Result<(), String> {
    let (_, data) = random_swing(seed);
    let base = exact_estimate(&data)?;
    let mut labels: Vec<&str> = data.labels().iter().map(String::as_str).collect();
    labels.reverse();
    let permuted = exact_estimate(&data.select(&labels).unwrap())?;
    for (k, label) in base.labels.iter().enumerate() {
        let other = permuted.get(label).ok_or("label lost")?;
        if !close(other, base.inertia[k], 1e-6) {
            return Err(format!("seed {seed}: {label} {other} vs {}", base.inertia[k]));
        }
    }
    Ok(())
}

/// Exact swing data give back the true inertia.
pub fn check_exact_inertia(seed: u64) -> Result<(), String> {
    let (m, data) = random_swing(seed);
    let est = exact_estimate(&data)?;
    for (k, &truth) in m.iter().enumerate() {
        if !close(est.inertia[k], truth, 1e-6) {
            return Err(format!("seed {seed}: M[{k}] {} vs {truth}", est.inertia[k]));
        }
    }
    Ok(())
}

/// Writing then reading a set reproduces every value bit for bit.
pub fn check_csv_round_trip(data: &TimeSeriesSet) -> Result<(), String> {
    let text = kmd_inertia::io::timeseries_csv(data);
    let back = kmd_inertia::io::parse_timeseries_csv(&text, std::path::Path::new("mem.csv"))
        .map_err(|e| e.to_string())?;
    if back.labels() != data.labels() {
        return Err("labels differ".into());
    }
    for (a, b) in back.data().iter().zip(data.data().iter()) {
        if a.to_bits() != b.to_bits() {
            return Err(format!("value {b:e} came back as {a:e}"));
        }
    }
    Ok(())
}
