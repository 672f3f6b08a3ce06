use std::io::Write;
use std::ops::AddAssign;

use serde::{Deserialize, Serialize};

use super::MacKind;
use crate::error::Result;

/// Packet accounting. At the end of a run
/// `generated = delivered + collided + overflow_dropped + queued`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counters {
    pub generated: u64,
    pub delivered: u64,
    pub collided: u64,
    pub overflow_dropped: u64,
    pub queued: u64,
}

impl Counters {
    pub fn is_conserved(&self) -> bool {
        self.generated == self.delivered + self.collided + self.overflow_dropped + self.queued
    }
}

impl AddAssign for Counters {
    fn add_assign(&mut self, o: Self) {
        self.generated += o.generated;
        self.delivered += o.delivered;
        self.collided += o.collided;
        self.overflow_dropped += o.overflow_dropped;
        self.queued += o.queued;
    }
}

/// Delay of delivered packets, generation to end of transmission.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct DelayStats {
    pub count: u64,
    pub mean_ms: f64,
    pub p95_ms: f64,
    pub max_ms: f64,
}

impl DelayStats {
    /// Nearest-rank percentile; sorts `samples` in place.
    pub(crate) fn from_samples(samples: &mut [f64]) -> Self {
        if samples.is_empty() {
            return Self::default();
        }
        samples.sort_by(f64::total_cmp);
        let n = samples.len();
        let idx = ((0.95 * n as f64).ceil() as usize).clamp(1, n) - 1;
        Self {
            count: n as u64,
            mean_ms: samples.iter().sum::<f64>() / n as f64,
            p95_ms: samples[idx],
            max_ms: samples[n - 1],
        }
    }
}

/// Measurements of one run. Rates, delays, PDR and utilization cover the
/// measurement window and the reporting population; counters cover the
/// whole run and every vehicle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimOutcome {
    pub mac: MacKind,
    pub seed: u64,
    pub vehicles: usize,
    pub measured_vehicles: usize,
    pub channels: u32,
    pub frame_slots: u64,
    pub slot_duration_s: f64,
    pub total_slots: u64,
    pub warmup_slots: u64,
    pub duration_s: f64,
    pub window_s: f64,
    /// Mean over the reporting population of delivered payload rate.
    pub per_vehicle_throughput_mbps: f64,
    pub delay: DelayStats,
    /// Successful over attempted transmissions; 1 when nothing was sent.
    pub pdr: f64,
    /// Share of neighbourhood airtime carrying a successful payload.
    pub utilization: f64,
    pub transmissions: u64,
    pub collisions: u64,
    pub event_count: u64,
    pub counters: Counters,
    /// Indexed by vehicle id.
    #[serde(skip, default)]
    pub per_vehicle: Vec<Counters>,
}

pub const OUTCOME_CSV_HEADER: &str = "mac,seed,vehicles,measured_vehicles,channels,frame_slots,\
slot_duration_s,total_slots,warmup_slots,duration_s,window_s,per_vehicle_throughput_mbps,\
delay_count,mean_delay_ms,p95_delay_ms,max_delay_ms,pdr,utilization,transmissions,collisions,\
event_count,generated,delivered,collided,overflow_dropped,queued";

impl SimOutcome {
    pub fn mac_name(&self) -> &'static str {
        match self.mac {
            MacKind::Tdma => "tdma",
            MacKind::Contention => "contention",
        }
    }

    pub fn csv_row(&self) -> String {
        let c = &self.counters;
        let fields: [String; 26] = [
            self.mac_name().to_string(),
            self.seed.to_string(),
            self.vehicles.to_string(),
            self.measured_vehicles.to_string(),
            self.channels.to_string(),
            self.frame_slots.to_string(),
            self.slot_duration_s.to_string(),
            self.total_slots.to_string(),
            self.warmup_slots.to_string(),
            self.duration_s.to_string(),
            self.window_s.to_string(),
            self.per_vehicle_throughput_mbps.to_string(),
            self.delay.count.to_string(),
            self.delay.mean_ms.to_string(),
            self.delay.p95_ms.to_string(),
            self.delay.max_ms.to_string(),
            self.pdr.to_string(),
            self.utilization.to_string(),
            self.transmissions.to_string(),
            self.collisions.to_string(),
            self.event_count.to_string(),
            c.generated.to_string(),
            c.delivered.to_string(),
            c.collided.to_string(),
            c.overflow_dropped.to_string(),
            c.queued.to_string(),
        ];
        fields.join(",")
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{OUTCOME_CSV_HEADER}")?;
        writeln!(w, "{}", self.csv_row())?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Conservation holds for every vehicle and in total.
    pub fn is_conserved(&self) -> bool {
        let mut sum = Counters::default();
        for c in &self.per_vehicle {
            if !c.is_conserved() {
                return false;
            }
            sum += *c;
        }
        self.counters.is_conserved() && (self.per_vehicle.is_empty() || sum == self.counters)
    }
}
