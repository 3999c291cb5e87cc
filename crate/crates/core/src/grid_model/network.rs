use std::collections::{HashMap, HashSet};
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::ieee39;
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BusKind {
    Slack,
    Pv,
    Pq,
}

/// Bus data. Powers are per unit on the system base.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bus {
    pub id: usize,
    pub kind: BusKind,
    /// Voltage magnitude setpoint for slack and PV buses.
    #[serde(default = "unity")]
    pub v_set: f64,
    #[serde(default)]
    pub p_load: f64,
    #[serde(default)]
    pub q_load: f64,
    #[serde(default)]
    pub g_shunt: f64,
    #[serde(default)]
    pub b_shunt: f64,
}

/// Pi-model branch. A tap ratio other than one puts an ideal transformer on
/// the `from` side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub from: usize,
    pub to: usize,
    #[serde(default)]
    pub r: f64,
    pub x: f64,
    /// Total line charging susceptance.
    #[serde(default)]
    pub b: f64,
    #[serde(default = "unity")]
    pub tap: f64,
    #[serde(default = "in_service")]
    pub in_service: bool,
}

impl Branch {
    pub fn connects(&self, a: usize, b: usize) -> bool {
        (self.from == a && self.to == b) || (self.from == b && self.to == a)
    }
}

/// Classical generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Generator {
    pub id: usize,
    pub bus: usize,
    /// Transient reactance x'd, p.u.
    pub xd_prime: f64,
    /// Inertia M = 2H/omega_s in p.u. s^2 (with omega in rad/s). Absent for
    /// an infinite bus.
    #[serde(default)]
    pub inertia: Option<f64>,
    /// Scheduled active power for a PV bus, p.u. Ignored at the slack bus.
    #[serde(default)]
    pub p_gen: f64,
    #[serde(default)]
    pub infinite_bus: bool,
}

impl Generator {
    pub fn is_dynamic(&self) -> bool {
        !self.infinite_bus
    }
}

/// Bus, branch and generator data plus system constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkModel {
    #[serde(default = "default_base")]
    pub base_mva: f64,
    #[serde(default = "default_frequency")]
    pub frequency_hz: f64,
    pub buses: Vec<Bus>,
    pub branches: Vec<Branch>,
    pub generators: Vec<Generator>,
}

fn unity() -> f64 {
    1.0
}

fn in_service() -> bool {
    true
}

fn default_base() -> f64 {
    100.0
}

fn default_frequency() -> f64 {
    60.0
}

impl NetworkModel {
    /// Names accepted by [`NetworkModel::builtin`].
    pub const BUILTINS: &'static [&'static str] = &["ieee39"];

    /// The New England 39-bus, 10-machine system. Generator 1 (bus 39) is
    /// the infinite bus.
    pub fn ieee39() -> Self {
        ieee39::model()
    }

    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "ieee39" => Some(Self::ieee39()),
            _ => None,
        }
    }

    /// Resolves `source` as a builtin name first, then as a path to a
    /// network description file.
    pub fn load(source: &str) -> Result<Self> {
        if let Some(net) = Self::builtin(source) {
            return Ok(net);
        }
        let path = Path::new(source);
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let net: NetworkModel =
            toml::from_str(text).map_err(|e| Error::InvalidNetwork(e.to_string()))?;
        net.validate()?;
        Ok(net)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("network model serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::InvalidNetwork(msg));
        if self.buses.is_empty() {
            return invalid("no buses".into());
        }
        if self.branches.is_empty() {
            return invalid("no branches".into());
        }
        if !(self.base_mva > 0.0) || !(self.frequency_hz > 0.0) {
            return invalid("base MVA and frequency must be positive".into());
        }
        let mut ids = HashSet::new();
        for bus in &self.buses {
            if !ids.insert(bus.id) {
                return invalid(format!("duplicate bus {}", bus.id));
            }
            if !(bus.v_set > 0.0) {
                return invalid(format!("bus {}: non-positive voltage setpoint", bus.id));
            }
        }
        let slacks: Vec<_> = self
            .buses
            .iter()
            .filter(|b| b.kind == BusKind::Slack)
            .collect();
        match slacks.len() {
            0 => return invalid("missing slack bus".into()),
            1 => {}
            _ => return invalid(format!("{} slack buses, expected one", slacks.len())),
        }
        for (k, br) in self.branches.iter().enumerate() {
            for end in [br.from, br.to] {
                if !ids.contains(&end) {
                    return invalid(format!(
                        "branch {k} ({}-{}) references unknown bus {end}",
                        br.from, br.to
                    ));
                }
            }
            if br.from == br.to {
                return invalid(format!("branch {k} ({}-{}) is a self-loop", br.from, br.to));
            }
            if !(br.x > 0.0) {
                return invalid(format!(
                    "branch {k} ({}-{}): non-positive reactance {}",
                    br.from, br.to, br.x
                ));
            }
            if !(br.tap > 0.0) {
                return invalid(format!("branch {k} ({}-{}): non-positive tap", br.from, br.to));
            }
        }
        if self.generators.is_empty() {
            return invalid("no generators".into());
        }
        let kinds: HashMap<usize, BusKind> = self.buses.iter().map(|b| (b.id, b.kind)).collect();
        let mut gen_ids = HashSet::new();
        let mut gen_buses = HashSet::new();
        for g in &self.generators {
            if !gen_ids.insert(g.id) {
                return invalid(format!("duplicate generator {}", g.id));
            }
            let Some(kind) = kinds.get(&g.bus) else {
                return invalid(format!("generator {} references unknown bus {}", g.id, g.bus));
            };
            if *kind == BusKind::Pq {
                return invalid(format!("generator {} sits on PQ bus {}", g.id, g.bus));
            }
            if !gen_buses.insert(g.bus) {
                return invalid(format!("bus {} hosts more than one generator", g.bus));
            }
            if !(g.xd_prime > 0.0) {
                return invalid(format!(
                    "generator {}: non-positive transient reactance {}",
                    g.id, g.xd_prime
                ));
            }
            match (g.infinite_bus, g.inertia) {
                (true, Some(_)) => {
                    return invalid(format!("generator {}: infinite bus carries no inertia", g.id))
                }
                (false, None) => return invalid(format!("generator {}: missing inertia", g.id)),
                (false, Some(m)) if !(m > 0.0) => {
                    return invalid(format!("generator {}: non-positive inertia {m}", g.id))
                }
                _ => {}
            }
        }
        for bus in &self.buses {
            if bus.kind != BusKind::Pq && !gen_buses.contains(&bus.id) {
                return invalid(format!("{:?} bus {} has no generator", bus.kind, bus.id));
            }
        }
        if !self.generators.iter().any(Generator::is_dynamic) {
            return invalid("no dynamic generators".into());
        }
        Ok(())
    }

    /// Position of each bus id in `buses`.
    pub fn bus_index(&self) -> HashMap<usize, usize> {
        self.buses.iter().enumerate().map(|(k, b)| (b.id, k)).collect()
    }

    /// Scales every load and every scheduled generator output by `factor`.
    /// The slack output follows from the power flow.
    pub fn scale_loading(&mut self, factor: f64) -> Result<()> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "loading factor must be positive, got {factor}"
            )));
        }
        for b in &mut self.buses {
            b.p_load *= factor;
            b.q_load *= factor;
        }
        for g in &mut self.generators {
            g.p_gen *= factor;
        }
        Ok(())
    }

    pub fn with_loading(mut self, factor: f64) -> Result<Self> {
        self.scale_loading(factor)?;
        Ok(self)
    }

    pub fn generator(&self, id: usize) -> Option<&Generator> {
        self.generators.iter().find(|g| g.id == id)
    }

    pub fn dynamic_generators(&self) -> impl Iterator<Item = &Generator> {
        self.generators.iter().filter(|g| g.is_dynamic())
    }

    /// Sum of the inertia of all dynamic generators.
    pub fn system_inertia(&self) -> f64 {
        self.dynamic_generators().filter_map(|g| g.inertia).sum()
    }

    pub fn synchronous_speed(&self) -> f64 {
        super::synchronous_speed(self.frequency_hz)
    }

    /// Bus admittance matrix over in-service branches and bus shunts, in
    /// `buses` order. Loads are not included.
    pub fn bus_admittance(&self) -> DMatrix<C64> {
        self.bus_admittance_where(|_| true)
    }

    /// Bus admittance matrix restricted to in-service branches accepted by
    /// `keep`.
    pub fn bus_admittance_where(&self, keep: impl Fn(&Branch) -> bool) -> DMatrix<C64> {
        let index = self.bus_index();
        let n = self.buses.len();
        let mut y = DMatrix::zeros(n, n);
        for br in self.branches.iter().filter(|b| b.in_service && keep(b)) {
            let (f, t) = (index[&br.from], index[&br.to]);
            let ys = C64::new(br.r, br.x).inv();
            let charging = C64::new(0.0, br.b / 2.0);
            y[(f, f)] += (ys + charging) / (br.tap * br.tap);
            y[(t, t)] += ys + charging;
            y[(f, t)] -= ys / br.tap;
            y[(t, f)] -= ys / br.tap;
        }
        for (k, bus) in self.buses.iter().enumerate() {
            y[(k, k)] += C64::new(bus.g_shunt, bus.b_shunt);
        }
        y
    }
}
