//! Fixed-step integration of the swing equations through a fault sequence
//! and sampling of the observable channels.

mod rk4;
mod timeseries;

pub use rk4::Rk4;
pub use timeseries::TimeSeriesSet;

use crate::grid_model::{
    kron_reduce, FaultScenario, NetworkModel, OperatingPoint, Phase, PowerFlowSolution,
    ReducedNetwork, SwingSystem, SystemState,
};
use crate::{omega_label, Error, Result, POWER_CHANNEL};

/// Integration step that divides 10- and 15-cycle faults and the 60 Hz
/// sample period exactly.
pub const DEFAULT_DT: f64 = 1.0 / 1200.0;

/// States at integrator resolution. `times[k] = t0 + k * dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub dt: f64,
    pub times: Vec<f64>,
    pub states: Vec<SystemState>,
    /// Index of the first state of each topology phase.
    pub phase_starts: Vec<(Phase, usize)>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn phase_start(&self, phase: Phase) -> Option<usize> {
        self.phase_starts
            .iter()
            .find(|(p, _)| *p == phase)
            .map(|&(_, k)| k)
    }

    /// Index of the fault-clearing instant, where sampling starts.
    pub fn clearing_index(&self) -> Option<usize> {
        self.phase_start(Phase::PostFault)
    }

    pub fn last(&self) -> &SystemState {
        self.states.last().expect("trajectory holds the initial state")
    }
}

/// Number of `dt` steps spanning `duration`, which must be an integer
/// multiple of `dt`.
pub fn aligned_steps(duration: f64, dt: f64) -> Result<usize> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidArgument(format!("step must be positive, got {dt}")));
    }
    if !(duration >= 0.0) || !duration.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "duration must be non-negative, got {duration}"
        )));
    }
    let ratio = duration / dt;
    let steps = ratio.round();
    if (ratio - steps).abs() > 1e-9 * ratio.max(1.0) {
        return Err(Error::Alignment(format!(
            "{duration} s is not a multiple of the step {dt} s"
        )));
    }
    Ok(steps as usize)
}

/// Integrates from `initial` through consecutive segments, each a network
/// held for a number of steps. The state carries over unchanged at each
/// switch.
pub fn integrate_segments(
    system: &SwingSystem,
    initial: &SystemState,
    segments: &[(&ReducedNetwork, usize)],
    dt: f64,
    t0: f64,
) -> Result<Trajectory> {
    if initial.delta.len() != system.len() || initial.omega.len() != system.len() {
        return Err(Error::DimensionMismatch {
            expected: system.len(),
            actual: initial.delta.len(),
        });
    }
    for (red, _) in segments {
        system.validate_network(red)?;
    }
    let total: usize = segments.iter().map(|(_, n)| n).sum();
    let mut times = Vec::with_capacity(total + 1);
    let mut states = Vec::with_capacity(total + 1);
    let mut phase_starts = Vec::with_capacity(segments.len());
    times.push(t0);
    states.push(initial.clone());

    let n = system.len();
    let mut y = initial.pack();
    let mut next = vec![0.0; 2 * n];
    let mut rk = Rk4::new(2 * n);
    let mut angles = vec![0.0; system.node_count()];
    let mut pe = vec![0.0; system.node_count()];
    let mut step = 0usize;
    for &(red, steps) in segments {
        phase_starts.push((red.phase, step));
        for _ in 0..steps {
            rk.step(
                |x, dx| system.rhs_packed(red, x, dx, &mut angles, &mut pe),
                &y,
                dt,
                &mut next,
            );
            step += 1;
            let t = t0 + step as f64 * dt;
            if next.iter().any(|v| !v.is_finite()) {
                return Err(Error::Diverged { time: t });
            }
            std::mem::swap(&mut y, &mut next);
            times.push(t);
            states.push(SystemState::unpack(&y));
        }
    }
    Ok(Trajectory {
        dt,
        times,
        states,
        phase_starts,
    })
}

/// Everything needed to simulate one fault scenario on one network.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub network: NetworkModel,
    pub scenario: FaultScenario,
    pub power_flow: PowerFlowSolution,
    pub operating_point: OperatingPoint,
    pub system: SwingSystem,
    pub pre_fault: ReducedNetwork,
    pub fault_on: ReducedNetwork,
    pub post_fault: ReducedNetwork,
}

impl Simulation {
    pub fn new(net: &NetworkModel, scenario: &FaultScenario) -> Result<Self> {
        net.validate()?;
        scenario.validate(net)?;
        let (power_flow, operating_point) = OperatingPoint::initialize(net)?;
        let reduce = |phase| kron_reduce(net, &operating_point, phase, scenario);
        Ok(Self {
            pre_fault: reduce(Phase::PreFault)?,
            fault_on: reduce(Phase::FaultOn)?,
            post_fault: reduce(Phase::PostFault)?,
            system: SwingSystem::new(net, &operating_point),
            network: net.clone(),
            scenario: scenario.clone(),
            power_flow,
            operating_point,
        })
    }

    pub fn with_damping(mut self, damping: f64) -> Self {
        self.system = self.system.with_damping(damping);
        self
    }

    /// Integrates from the pre-fault equilibrium at t = 0 to `t_end`
    /// (absolute time, truncated to the step grid).
    pub fn integrate(&self, t_end: f64, dt: f64) -> Result<Trajectory> {
        let f = self.network.frequency_hz;
        let clearing = self.scenario.clearing_time(f);
        if !(t_end > clearing) {
            return Err(Error::InvalidArgument(format!(
                "end time {t_end} s must exceed fault clearing at {clearing} s"
            )));
        }
        let pre = aligned_steps(self.scenario.start, dt)?;
        let on = aligned_steps(self.scenario.duration(f), dt)?;
        if on == 0 {
            return Err(Error::Alignment(format!(
                "fault duration shorter than the step {dt} s"
            )));
        }
        let post = ((t_end - clearing) / dt + 1e-9).floor() as usize;
        let mut segments = Vec::with_capacity(3);
        if pre > 0 {
            segments.push((&self.pre_fault, pre));
        }
        segments.push((&self.fault_on, on));
        segments.push((&self.post_fault, post));
        integrate_segments(&self.system, &self.system.equilibrium(), &segments, dt, 0.0)
    }

    pub fn sample(&self, traj: &Trajectory, period: f64) -> Result<TimeSeriesSet> {
        sample_observables(traj, &self.post_fault, &self.system, period)
    }

    /// Integrate then sample.
    pub fn run(&self, t_end: f64, dt: f64, period: f64) -> Result<TimeSeriesSet> {
        let traj = self.integrate(t_end, dt)?;
        self.sample(&traj, period)
    }
}

/// Integrates `scenario` on `net` from the pre-fault equilibrium.
pub fn integrate(
    net: &NetworkModel,
    scenario: &FaultScenario,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    Simulation::new(net, scenario)?.integrate(t_end, dt)
}

/// Samples rotor speeds and the net accelerating power every `period`
/// seconds, starting at fault clearing (or at the first state when the
/// trajectory has no post-fault phase). The power channel is evaluated on
/// `post_fault` at each sampled state.
pub fn sample_observables(
    traj: &Trajectory,
    post_fault: &ReducedNetwork,
    system: &SwingSystem,
    period: f64,
) -> Result<TimeSeriesSet> {
    if !(period > 0.0) || !period.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "sample period must be positive, got {period}"
        )));
    }
    let ratio = period / traj.dt;
    let stride = ratio.round();
    if stride < 1.0 || (ratio - stride).abs() > 1e-9 * ratio {
        return Err(Error::Alignment(format!(
            "sample period {period} s is not a multiple of the step {} s",
            traj.dt
        )));
    }
    let stride = stride as usize;
    let first = traj.clearing_index().unwrap_or(0);
    let n = system.len();
    let mut labels: Vec<String> = system.generator_ids.iter().map(|&id| omega_label(id)).collect();
    labels.push(POWER_CHANNEL.to_string());

    let mut rows = Vec::new();
    for state in traj.states[first..].iter().step_by(stride) {
        let mut row = state.omega.clone();
        row.push(system.net_accelerating_power(post_fault, &state.delta)?);
        rows.push(row);
    }
    let data = nalgebra::DMatrix::from_fn(rows.len(), n + 1, |r, c| rows[r][c]);
    TimeSeriesSet::new(period, 0.0, labels, data)
}
