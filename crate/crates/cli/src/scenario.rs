use std::collections::BTreeMap;
use std::path::Path;

use cavnet::feasibility::FeasibilityOptions;
use cavnet::model::{RadioConfig, RoadScenario, REFERENCE_GAPS_M, REFERENCE_LANES};
use cavnet::registry::ClassifierThresholds;
use cavnet::sim::{BackoffConfig, MacKind, SimConfig, SimDuration, Traffic};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Scenario file. Every block is optional; omitted blocks take the defaults
/// of the typical DSRC setting.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Scenario {
    pub radio: RadioConfig,
    pub road: RoadScenario,
    pub sweep: Sweep,
    pub thresholds: ClassifierThresholds,
    pub simulation: Simulation,
    pub feasibility: Feasibility,
    /// JSON registry replacing the built-in one.
    pub registry: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Sweep {
    pub gaps: Vec<f64>,
    pub lanes: Vec<u32>,
}

impl Default for Sweep {
    fn default() -> Self {
        Self {
            gaps: REFERENCE_GAPS_M.to_vec(),
            lanes: REFERENCE_LANES.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Simulation {
    pub mac: MacKind,
    /// Defaults to 110 frames (TDMA) or 10⁴ slots after warm-up (contention).
    pub duration: Option<SimDuration>,
    pub seed: u64,
    pub contention_window: u32,
    pub traffic: Traffic,
    pub queue_limit: usize,
}

impl Default for Simulation {
    fn default() -> Self {
        let sim = SimConfig::default();
        Self {
            mac: MacKind::Tdma,
            duration: None,
            seed: sim.seed,
            contention_window: BackoffConfig::default().contention_window,
            traffic: sim.traffic,
            queue_limit: sim.queue_limit,
        }
    }
}

impl Simulation {
    pub fn backoff(&self) -> BackoffConfig {
        BackoffConfig {
            contention_window: self.contention_window,
        }
    }

    pub fn config(&self, mac: MacKind) -> SimConfig {
        SimConfig {
            duration: self
                .duration
                .unwrap_or_else(|| SimDuration::default_for(mac, &self.backoff())),
            seed: self.seed,
            traffic: self.traffic,
            queue_limit: self.queue_limit,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Feasibility {
    /// Application ids to check; all when absent.
    pub apps: Option<Vec<String>>,
    pub packet_length_overrides: BTreeMap<String, u32>,
    pub distance_dependent_bound_ms: Option<f64>,
    pub adaptive_range: Option<f64>,
    /// Also check the summed periodic demand of the selected apps.
    pub aggregate: bool,
}

impl Feasibility {
    pub fn options(&self) -> FeasibilityOptions {
        FeasibilityOptions {
            packet_length_overrides: self.packet_length_overrides.clone(),
            distance_dependent_bound_ms: self.distance_dependent_bound_ms,
            adaptive_range: self.adaptive_range,
        }
    }
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
    }

    /// Checks every block before any computation.
    pub fn validate(&self) -> Result<(), CliError> {
        self.radio.validate()?;
        self.road.validate()?;
        self.thresholds.validate()?;
        self.feasibility.options().validate()?;
        for &gap in &self.sweep.gaps {
            RoadScenario::uniform(1, gap).validate_model()?;
        }
        for &lanes in &self.sweep.lanes {
            RoadScenario::uniform(lanes, 1.0).validate_model()?;
        }
        self.simulation.config(self.simulation.mac).validate()?;
        if self.simulation.contention_window == 0 {
            return Err(CliError::Validation("simulation.contention_window must be >= 1".into()));
        }
        Ok(())
    }
}
