//! Run configuration: a TOML file with flat dotted keys, e.g.
//!
//! ```toml
//! network = "ieee39"
//! loading = 0.2
//! scenario.bus = 16
//! scenario.trip = [16, 17]
//! scenario.cycles = 10.0
//! integration.dt = 0.0008333333333333334
//! integration.t_end = 15.0
//! sampling.hz = 60.0
//! study.window = 10.0
//! ```
//!
//! Every key is optional; the defaults reproduce fault case (i).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::grid_model::DEFAULT_LOADING;
use crate::inertia::EstimatorConfig;
use crate::simulator::DEFAULT_DT;
use crate::{Error, FaultScenario, NetworkModel, Result, Simulation, TimeSeriesSet};

/// Name of the manifest written next to every output.
pub const MANIFEST_FILE: &str = "manifest.toml";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Builtin network name or path to a network file.
    pub network: String,
    /// Uniform scale on loads and scheduled generation.
    pub loading: f64,
    /// Measured data to analyse instead of a simulation.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    pub scenario: ScenarioConfig,
    pub integration: IntegrationConfig,
    pub sampling: SamplingConfig,
    pub kmd: KmdConfig,
    pub study: StudyConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub bus: usize,
    pub trip: [usize; 2],
    pub cycles: f64,
    pub start: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntegrationConfig {
    pub dt: f64,
    /// End of the simulation, s from fault inception.
    pub t_end: f64,
    pub damping: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplingConfig {
    pub hz: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KmdConfig {
    /// Prony order; absent means the largest the window admits.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy_eps: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StudyConfig {
    /// Analysis window for single estimates and leave-one-out, s.
    pub window: f64,
    /// Windows of a sweep, s.
    pub windows: Vec<f64>,
    /// Add the window sweep to a plain estimate run.
    pub sweep: bool,
    /// Add the leave-one-out study to a plain estimate run.
    pub leave_one_out: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            network: "ieee39".into(),
            loading: DEFAULT_LOADING,
            input: None,
            scenario: ScenarioConfig::default(),
            integration: IntegrationConfig::default(),
            sampling: SamplingConfig::default(),
            kmd: KmdConfig::default(),
            study: StudyConfig::default(),
        }
    }
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self::from(&FaultScenario::case_i())
    }
}

impl From<&FaultScenario> for ScenarioConfig {
    fn from(s: &FaultScenario) -> Self {
        Self {
            bus: s.bus,
            trip: [s.trip.0, s.trip.1],
            cycles: s.cycles,
            start: s.start,
        }
    }
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        Self {
            dt: DEFAULT_DT,
            t_end: 15.0,
            damping: 0.0,
        }
    }
}

impl Default for SamplingConfig {
    fn default() -> Self {
        Self { hz: 60.0 }
    }
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            window: 10.0,
            windows: vec![2.0, 4.0, 6.0, 8.0, 10.0, 12.0],
            sweep: false,
            leave_one_out: false,
        }
    }
}

/// Parses `lo:hi:step` into the windows `lo, lo + step, ...` up to `hi`.
pub fn parse_sweep(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Config(format!("sweep `{text}`: expected lo:hi:step")));
    }
    let num = |s: &str| -> Result<f64> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::Config(format!("sweep `{text}`: `{s}` is not a number")))
    };
    let (lo, hi, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
    if !(lo > 0.0 && hi >= lo && step > 0.0) || !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::Config(format!(
            "sweep `{text}`: need 0 < lo <= hi and step > 0"
        )));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| lo + k as f64 * step).collect())
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must be positive, got {v}")))
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| {
            Error::Config(e.message().replace('\n', " "))
        })?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            e => e,
        })
    }

    /// Replaces the scenario by a named preset (`i` or `ii`).
    pub fn apply_case(&mut self, name: &str) -> Result<()> {
        let preset = FaultScenario::preset(name)
            .ok_or_else(|| Error::Config(format!("unknown case `{name}` (expected i or ii)")))?;
        self.scenario = ScenarioConfig::from(&preset);
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if NetworkModel::builtin(&self.network).is_none() && !Path::new(&self.network).exists() {
            return Err(Error::Config(format!(
                "network `{}` is neither a builtin nor an existing file",
                self.network
            )));
        }
        if let Some(input) = &self.input {
            if !input.exists() {
                return Err(Error::Config(format!(
                    "input {} does not exist",
                    input.display()
                )));
            }
        }
        positive("loading", self.loading)?;
        positive("scenario.cycles", self.scenario.cycles)?;
        if !(self.scenario.start >= 0.0) || !self.scenario.start.is_finite() {
            return Err(Error::Config("scenario.start must be non-negative".into()));
        }
        positive("integration.dt", self.integration.dt)?;
        positive("integration.t_end", self.integration.t_end)?;
        if !(self.integration.damping >= 0.0) || !self.integration.damping.is_finite() {
            return Err(Error::Config("integration.damping must be non-negative".into()));
        }
        positive("sampling.hz", self.sampling.hz)?;
        let ratio = self.sample_period() / self.integration.dt;
        if (ratio - ratio.round()).abs() > 1e-9 * ratio.max(1.0) || ratio.round() < 1.0 {
            return Err(Error::Config(format!(
                "sample period {} s is not a whole number of steps of {} s",
                self.sample_period(),
                self.integration.dt
            )));
        }
        if let Some(order) = self.kmd.order {
            if order == 0 {
                return Err(Error::Config("kmd.order must be at least 1".into()));
            }
        }
        if let Some(eps) = self.kmd.energy_eps {
            if !(0.0..1.0).contains(&eps) {
                return Err(Error::Config(format!("kmd.energy_eps must be in [0, 1), got {eps}")));
            }
        }
        positive("study.window", self.study.window)?;
        if self.study.windows.is_empty() {
            return Err(Error::Config("study.windows is empty".into()));
        }
        for &w in &self.study.windows {
            positive("study.windows entry", w)?;
        }
        Ok(())
    }

    pub fn fault(&self) -> FaultScenario {
        FaultScenario {
            bus: self.scenario.bus,
            trip: (self.scenario.trip[0], self.scenario.trip[1]),
            cycles: self.scenario.cycles,
            start: self.scenario.start,
        }
    }

    pub fn sample_period(&self) -> f64 {
        1.0 / self.sampling.hz
    }

    pub fn estimator(&self) -> EstimatorConfig {
        EstimatorConfig {
            order: self.kmd.order,
            energy_eps: self.kmd.energy_eps,
        }
    }

    /// The network with the configured loading applied.
    pub fn network_model(&self) -> Result<NetworkModel> {
        NetworkModel::load(&self.network)?.with_loading(self.loading)
    }

    /// Sampled observables from the configured simulation.
    pub fn simulate(&self) -> Result<TimeSeriesSet> {
        let net = self.network_model()?;
        let sim = Simulation::new(&net, &self.fault())?.with_damping(self.integration.damping);
        sim.run(self.integration.t_end, self.integration.dt, self.sample_period())
    }

    /// The measured input when one is configured, otherwise a simulation.
    pub fn observations(&self) -> Result<TimeSeriesSet> {
        match &self.input {
            Some(path) => super::read_timeseries_csv(path),
            None => self.simulate(),
        }
    }

    /// Every effective parameter as flat `key = value` lines in a fixed
    /// order. Reading it back gives the same configuration.
    pub fn to_manifest(&self) -> String {
        let value = toml::Value::try_from(self).expect("configuration serializes");
        let mut lines = Vec::new();
        flatten("", &value, &mut lines);
        let mut out = lines.join("\n");
        out.push('\n');
        out
    }
}

fn flatten(prefix: &str, value: &toml::Value, out: &mut Vec<String>) {
    match value {
        toml::Value::Table(table) => {
            for (k, v) in table {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, v, out);
            }
        }
        v => out.push(format!("{prefix} = {v}")),
    }
}
