//! Shared fixtures for the benchmarks.

use kmd_inertia::grid_model::DEFAULT_LOADING;
use kmd_inertia::simulator::DEFAULT_DT;
use kmd_inertia::{FaultScenario, NetworkModel, Simulation, TimeSeriesSet};

pub const SAMPLE_PERIOD: f64 = 1.0 / 60.0;

pub fn study_network() -> NetworkModel {
    NetworkModel::ieee39().with_loading(DEFAULT_LOADING).unwrap()
}

pub fn case_i() -> Simulation {
    Simulation::new(&study_network(), &FaultScenario::case_i()).unwrap()
}

/// First 10 s after clearing of the case (i) run: 601 samples.
pub fn case_i_window() -> TimeSeriesSet {
    case_i()
        .run(11.0, DEFAULT_DT, SAMPLE_PERIOD)
        .unwrap()
        .window(10.0)
        .unwrap()
}
