//! Deterministic discrete-event simulation of periodic broadcast on a
//! straight multi-lane road.
//!
//! Time is divided into slots of one packet each. In every slot the MAC
//! picks the transmitting vehicles; a broadcast succeeds when no other
//! vehicle on the same channel transmits within two conflict hops of the
//! sender (otherwise some neighbour hears two packets at once). Two MACs
//! are provided:
//!
//! * [`run_tdma`]: spatial-reuse TDMA driven by a [`TdmaSchedule`]. Each slot
//!   carries the packet airtime plus dead time, `airtime / U`.
//! * [`run_contention`]: slotted uniform random backoff with carrier sense,
//!   no acknowledgements and no retransmission. Slots are bare airtime; the
//!   achieved utilization is measured.
//!
//! Measurements exclude a warm-up of ten frames and are taken over vehicles
//! in the central half of the corridor.

mod compare;
mod contention;
mod engine;
mod events;
mod graph;
mod outcome;
mod road;
mod schedule;
mod tdma;

use serde::{Deserialize, Serialize};

pub use compare::{compare, Discrepancy, DEFAULT_TOLERANCE};
pub use contention::run_contention;
pub use graph::{build_conflict_graph, ConflictGraph};
pub use outcome::{Counters, DelayStats, SimOutcome, OUTCOME_CSV_HEADER};
pub use road::{build_road, Vehicle};
pub use schedule::{tdma_schedule, TdmaSchedule};
pub use tdma::run_tdma;

use crate::error::{invalid, Result};
use crate::model::{RadioConfig, RoadScenario};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MacKind {
    Tdma,
    Contention,
}

/// Run length. A contention "frame" is one contention window of slots.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimDuration {
    Seconds(f64),
    Frames(u64),
    Slots(u64),
}

impl SimDuration {
    /// 10 warm-up frames followed by 100 measured frames (TDMA), or by
    /// 10⁴ measured packet times (contention).
    pub fn default_for(mac: MacKind, backoff: &BackoffConfig) -> Self {
        match mac {
            MacKind::Tdma => SimDuration::Frames(110),
            MacKind::Contention => {
                SimDuration::Slots(10_000 + WARMUP_FRAMES * u64::from(backoff.contention_window))
            }
        }
    }

    pub(crate) fn total_slots(self, slot_s: f64, frame_slots: u64) -> Result<u64> {
        match self {
            SimDuration::Seconds(s) => {
                if !(s.is_finite() && s >= 0.0) {
                    return Err(invalid("duration", "seconds must be finite and >= 0"));
                }
                let ratio = s / slot_s;
                Ok((ratio + 1e-9 * ratio.max(1.0)).floor() as u64)
            }
            SimDuration::Frames(f) => Ok(f * frame_slots),
            SimDuration::Slots(k) => Ok(k),
        }
    }
}

/// Frames excluded from measurement at the start of a run.
pub const WARMUP_FRAMES: u64 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Traffic {
    /// Every vehicle always has a packet queued; a fresh packet is
    /// generated the moment the previous one leaves.
    Saturated,
    /// One packet every `1/rate_hz` seconds from a random phase.
    Periodic { rate_hz: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub duration: SimDuration,
    pub seed: u64,
    pub traffic: Traffic,
    /// Packets a vehicle can hold; arrivals to a full queue are dropped.
    pub queue_limit: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            duration: SimDuration::Frames(110),
            seed: 1,
            traffic: Traffic::Saturated,
            queue_limit: 16,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if let Traffic::Periodic { rate_hz } = self.traffic {
            if !(rate_hz.is_finite() && rate_hz > 0.0) {
                return Err(invalid("traffic.rate_hz", "must be finite and > 0"));
            }
        }
        if self.queue_limit == 0 {
            return Err(invalid("queue_limit", "must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BackoffConfig {
    /// Backoff is drawn uniformly from `0..contention_window` slots.
    pub contention_window: u32,
}

impl Default for BackoffConfig {
    /// 16 slots: the 802.11p best-effort minimum window (CWmin = 15).
    fn default() -> Self {
        Self {
            contention_window: 16,
        }
    }
}

/// Vehicles of a road together with their conflict graph.
#[derive(Debug, Clone)]
pub struct Corridor {
    road_length_m: f64,
    vehicles: Vec<Vehicle>,
    graph: ConflictGraph,
}

impl Corridor {
    pub fn build(road: &RoadScenario, radio: &RadioConfig) -> Result<Self> {
        radio.validate()?;
        let vehicles = build_road(road)?;
        let graph = build_conflict_graph(&vehicles, radio);
        Ok(Self {
            road_length_m: road.road_length_m,
            vehicles,
            graph,
        })
    }

    /// Arbitrary placement; `road_length_m` only sets the mid-road band.
    pub fn from_vehicles(vehicles: Vec<Vehicle>, road_length_m: f64, radio: &RadioConfig) -> Result<Self> {
        radio.validate()?;
        if !(road_length_m.is_finite() && road_length_m >= 0.0) {
            return Err(invalid("road_length_m", "must be finite and >= 0"));
        }
        for (i, v) in vehicles.iter().enumerate() {
            if v.id != i {
                return Err(invalid("vehicles", format!("vehicle at index {i} has id {}", v.id)));
            }
            if !v.position_m.is_finite() {
                return Err(invalid("vehicles", format!("vehicle {i} has a non-finite position")));
            }
        }
        let graph = build_conflict_graph(&vehicles, radio);
        Ok(Self {
            road_length_m,
            vehicles,
            graph,
        })
    }

    pub fn road_length_m(&self) -> f64 {
        self.road_length_m
    }

    pub fn vehicles(&self) -> &[Vehicle] {
        &self.vehicles
    }

    pub fn graph(&self) -> &ConflictGraph {
        &self.graph
    }

    /// Vehicles in the central half of the road.
    pub fn is_mid_road(&self, vehicle: usize) -> bool {
        let x = self.vehicles[vehicle].position_m;
        let len = self.road_length_m;
        (0.25 * len..=0.75 * len).contains(&x)
    }

    /// Reporting population: mid-road vehicles, or every vehicle when
    /// none lies in the central half.
    pub fn measured(&self) -> Vec<bool> {
        let mid: Vec<bool> = (0..self.vehicles.len()).map(|v| self.is_mid_road(v)).collect();
        if mid.iter().any(|&m| m) {
            mid
        } else {
            vec![true; self.vehicles.len()]
        }
    }

    pub(crate) fn check_radio(&self, radio: &RadioConfig) -> Result<()> {
        radio.validate()?;
        if radio.channel_capacity_mbps <= 0.0 {
            return Err(invalid("channel_capacity_mbps", "must be > 0 to simulate"));
        }
        let reach = radio.interference_range_m();
        if (reach - self.graph.reach_m()).abs() > 1e-9 * reach.max(1.0) {
            return Err(invalid(
                "radio",
                format!(
                    "interference reach {reach} m differs from the conflict graph's {} m",
                    self.graph.reach_m()
                ),
            ));
        }
        Ok(())
    }
}
