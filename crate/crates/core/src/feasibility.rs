//! Latency and throughput checks of application requirements against the
//! closed-form V2V model.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::model::{adapt_radio, per_packet_delay, per_vehicle_capacity, RadioConfig, RoadScenario};
use crate::registry::{AppRequirement, LatencySpec, RangeSpec};

/// Header of the verdict CSV export.
pub const VERDICT_CSV_HEADER: [&str; 10] = [
    "app",
    "D",
    "N",
    "delay_ms",
    "latency_bound_ms",
    "latency_ok",
    "capacity_mbps",
    "demand_mbps",
    "throughput_ok",
    "verdict",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    FeasibleV2V,
    InfeasibleV2V,
    NotV2VApplication,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityVerdict {
    pub app_id: String,
    pub gap_m: f64,
    pub lanes: u32,
    pub transmission_range_m: f64,
    pub delay_ms: f64,
    /// `None` when nothing is checked (best effort, or an unresolved
    /// distance-dependent bound).
    pub latency_bound_ms: Option<f64>,
    pub latency_ok: bool,
    /// Tolerable minus predicted delay.
    pub latency_margin_ms: Option<f64>,
    pub capacity_mbps: f64,
    pub demand_mbps: f64,
    pub event_driven: bool,
    pub throughput_ok: bool,
    /// Capacity minus demand.
    pub throughput_margin_mbps: f64,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

/// Knobs the requirement tables leave open.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FeasibilityOptions {
    /// Per-application packet size in bytes; others use the radio's.
    pub packet_length_overrides: BTreeMap<String, u32>,
    /// Bound applied to distance-dependent latency; skipped when absent.
    pub distance_dependent_bound_ms: Option<f64>,
    /// Range = multiplier × gap, clamped at the radio's range.
    pub adaptive_range: Option<f64>,
}

impl FeasibilityOptions {
    pub fn validate(&self) -> Result<()> {
        if self.packet_length_overrides.values().any(|&l| l == 0) {
            return Err(invalid("packet_length_overrides", "packet lengths must be >= 1"));
        }
        if let Some(b) = self.distance_dependent_bound_ms {
            if !(b.is_finite() && b > 0.0) {
                return Err(invalid("distance_dependent_bound_ms", "must be finite and > 0"));
            }
        }
        if let Some(m) = self.adaptive_range {
            if !(m.is_finite() && m > 0.0) {
                return Err(invalid("adaptive_range", "must be finite and > 0"));
            }
        }
        Ok(())
    }

    fn packet_length(&self, app: &AppRequirement, radio: &RadioConfig) -> u32 {
        self.packet_length_overrides
            .get(&app.id)
            .copied()
            .unwrap_or(radio.packet_length_bytes)
    }
}

/// Offered periodic load of one application.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Demand {
    pub mbps: f64,
    /// No periodic rate is stated; the load is zero.
    pub event_driven: bool,
}

/// Periodic load at the highest stated rate: `hz · 8 · L / 10⁶` Mbit/s.
pub fn v2v_demand(app: &AppRequirement, packet_length_bytes: u32) -> Demand {
    match app.frequency.max_stated_hz() {
        Some(hz) => Demand {
            mbps: hz * 8.0 * f64::from(packet_length_bytes) / 1e6,
            event_driven: false,
        },
        None => Demand {
            mbps: 0.0,
            event_driven: true,
        },
    }
}

/// Sum of periodic demands of applications active on the same vehicle.
pub fn aggregate_demand(apps: &[AppRequirement], packet_length_bytes: u32) -> f64 {
    apps.iter()
        .map(|app| v2v_demand(app, packet_length_bytes).mbps)
        .sum()
}

fn demanding_range_m(range: &RangeSpec) -> Option<f64> {
    match range {
        RangeSpec::Fixed { meters, .. } => Some(*meters),
        RangeSpec::Between { min_m, .. } => Some(*min_m),
        RangeSpec::AtLeast { min_m } => Some(*min_m),
        RangeSpec::Symbolic { .. } => None,
    }
}

pub fn check(
    app: &AppRequirement,
    radio: &RadioConfig,
    road: &RoadScenario,
    options: &FeasibilityOptions,
) -> Result<FeasibilityVerdict> {
    app.validate()?;
    options.validate()?;
    let mut radio = match options.adaptive_range {
        Some(multiplier) => adapt_radio(radio, road, multiplier)?,
        None => *radio,
    };
    radio.packet_length_bytes = options.packet_length(app, &radio);

    let capacity = per_vehicle_capacity(&radio, road)?;
    let delay = per_packet_delay(&radio, road)?;
    let demand = v2v_demand(app, radio.packet_length_bytes);
    let mut notes = Vec::new();

    if let Some(needed) = demanding_range_m(&app.range) {
        if radio.transmission_range_m < needed {
            notes.push(format!(
                "transmission range {} m is below the required {} m",
                radio.transmission_range_m, needed
            ));
        }
    }

    let latency_bound_ms = match &app.latency {
        LatencySpec::DistanceDependent => {
            if options.distance_dependent_bound_ms.is_none() {
                notes.push("distance-dependent latency not checked".into());
            }
            options.distance_dependent_bound_ms
        }
        spec => spec.tightest_ms(),
    };
    if matches!(app.latency, LatencySpec::BestEffort) {
        notes.push("best-effort latency".into());
    }
    let latency_margin_ms = latency_bound_ms.map(|bound| bound - delay);
    let latency_ok = latency_margin_ms.map_or(true, |m| m >= 0.0);

    if demand.event_driven {
        notes.push("event-driven: no periodic load".into());
    }
    let throughput_margin_mbps = capacity - demand.mbps;
    let throughput_ok = throughput_margin_mbps >= 0.0;

    let verdict = if !app.uses_v2x_direct() {
        Verdict::NotV2VApplication
    } else if latency_ok && throughput_ok {
        Verdict::FeasibleV2V
    } else {
        Verdict::InfeasibleV2V
    };

    Ok(FeasibilityVerdict {
        app_id: app.id.clone(),
        gap_m: road.inter_vehicle_gap_m,
        lanes: road.lane_count,
        transmission_range_m: radio.transmission_range_m,
        delay_ms: delay,
        latency_bound_ms,
        latency_ok,
        latency_margin_ms,
        capacity_mbps: capacity,
        demand_mbps: demand.mbps,
        event_driven: demand.event_driven,
        throughput_ok,
        throughput_margin_mbps,
        verdict,
        notes,
    })
}

/// Throughput check of several applications sharing one vehicle's capacity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AggregateCheck {
    pub capacity_mbps: f64,
    pub demand_mbps: f64,
    pub throughput_ok: bool,
}

pub fn check_aggregate(
    apps: &[AppRequirement],
    radio: &RadioConfig,
    road: &RoadScenario,
) -> Result<AggregateCheck> {
    let capacity = per_vehicle_capacity(radio, road)?;
    let demand = aggregate_demand(apps, radio.packet_length_bytes);
    Ok(AggregateCheck {
        capacity_mbps: capacity,
        demand_mbps: demand,
        throughput_ok: capacity >= demand,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    /// Ordered by application, then gap, then lane count (input order).
    pub verdicts: Vec<FeasibilityVerdict>,
    pub infeasible_cells: usize,
    pub latency_infeasible_cells: usize,
    pub throughput_infeasible_cells: usize,
}

/// Cross product of [`check`] over applications × gaps × lanes.
pub fn scenario_sweep(
    apps: &[AppRequirement],
    radio: &RadioConfig,
    gaps: &[f64],
    lanes: &[u32],
    options: &FeasibilityOptions,
) -> Result<SweepResult> {
    let cells: Vec<(&AppRequirement, f64, u32)> = apps
        .iter()
        .flat_map(|app| {
            gaps.iter()
                .flat_map(move |&gap| lanes.iter().map(move |&n| (app, gap, n)))
        })
        .collect();
    let verdicts = cells
        .par_iter()
        .map(|&(app, gap, n)| check(app, radio, &RoadScenario::uniform(n, gap), options))
        .collect::<Result<Vec<_>>>()?;
    let count = |f: fn(&FeasibilityVerdict) -> bool| verdicts.iter().filter(|v| f(v)).count();
    Ok(SweepResult {
        infeasible_cells: count(|v| v.verdict == Verdict::InfeasibleV2V),
        latency_infeasible_cells: count(|v| !v.latency_ok),
        throughput_infeasible_cells: count(|v| !v.throughput_ok),
        verdicts,
    })
}

/// Writes verdict rows with full-precision numbers.
pub fn write_verdicts_csv<W: Write>(verdicts: &[FeasibilityVerdict], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(VERDICT_CSV_HEADER)?;
    for v in verdicts {
        writer.write_record([
            v.app_id.clone(),
            v.gap_m.to_string(),
            v.lanes.to_string(),
            v.delay_ms.to_string(),
            v.latency_bound_ms.map(|b| b.to_string()).unwrap_or_default(),
            v.latency_ok.to_string(),
            v.capacity_mbps.to_string(),
            v.demand_mbps.to_string(),
            v.throughput_ok.to_string(),
            format!("{:?}", v.verdict),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::Registry;

    fn app(id: &str) -> AppRequirement {
        Registry::builtin().get(id).unwrap().clone()
    }

    #[test]
    fn demand_examples() {
        assert!((v2v_demand(&app("PCS"), 400).mbps - 0.16).abs() < 1e-15);
        assert!((v2v_demand(&app("EBL"), 400).mbps - 0.032).abs() < 1e-15);
        let rvc = v2v_demand(&app("RVC"), 400);
        assert_eq!(rvc.mbps, 0.0);
        assert!(rvc.event_driven);
    }

    #[test]
    fn check_examples() {
        let radio = RadioConfig::default();
        let opts = FeasibilityOptions::default();
        let ebl = check(&app("EBL"), &radio, &RoadScenario::uniform(2, 6.0), &opts).unwrap();
        assert!(ebl.latency_ok);
        assert!((ebl.delay_ms - 52.938_271_604_938_27).abs() < 1e-9);

        let pcs = check(&app("PCS"), &radio, &RoadScenario::uniform(2, 6.0), &opts).unwrap();
        assert!(!pcs.latency_ok);
        assert!(pcs.latency_margin_ms.unwrap() < 0.0);
        assert_eq!(pcs.verdict, Verdict::InfeasibleV2V);

        let ebl4 = check(&app("EBL"), &radio, &RoadScenario::uniform(4, 6.0), &opts).unwrap();
        assert!(!ebl4.latency_ok);
        assert!((ebl4.delay_ms - 105.876_543_209_876_54).abs() < 1e-9);
    }

    #[test]
    fn cloud_only_apps_are_not_v2v() {
        let radio = RadioConfig::default();
        let v = check(&app("RVS"), &radio, &RoadScenario::uniform(2, 300.0), &Default::default()).unwrap();
        assert_eq!(v.verdict, Verdict::NotV2VApplication);
        assert!(v.latency_ok);
        assert_eq!(v.latency_margin_ms, None);
    }

    #[test]
    fn distance_dependent_uses_supplied_bound() {
        let radio = RadioConfig::default();
        let road = RoadScenario::uniform(8, 6.0);
        let skipped = check(&app("PFO"), &radio, &road, &Default::default()).unwrap();
        assert!(skipped.latency_ok);
        assert!(skipped.notes.iter().any(|n| n.contains("not checked")));

        let opts = FeasibilityOptions {
            distance_dependent_bound_ms: Some(50.0),
            ..Default::default()
        };
        let checked = check(&app("PFO"), &radio, &road, &opts).unwrap();
        assert!(!checked.latency_ok);
    }

    #[test]
    fn packet_override_changes_delay_and_demand() {
        let radio = RadioConfig::default();
        let road = RoadScenario::uniform(2, 6.0);
        let mut opts = FeasibilityOptions::default();
        opts.packet_length_overrides.insert("PCS".into(), 100);
        let v = check(&app("PCS"), &radio, &road, &opts).unwrap();
        assert!((v.demand_mbps - 0.04).abs() < 1e-15);
        assert!((v.delay_ms - 52.938_271_604_938_27 / 4.0).abs() < 1e-9);
        assert!(v.latency_ok);
    }

    #[test]
    fn empty_sweep() {
        let r = scenario_sweep(&[], &RadioConfig::default(), &[6.0], &[2], &Default::default()).unwrap();
        assert!(r.verdicts.is_empty());
        assert_eq!(r.infeasible_cells, 0);
    }

    #[test]
    fn aggregate_sums_periodic_load() {
        let apps = [app("PCS"), app("EBL"), app("RVC")];
        assert!((aggregate_demand(&apps, 400) - 0.192).abs() < 1e-12);
        let agg = check_aggregate(&apps, &RadioConfig::default(), &RoadScenario::uniform(2, 6.0)).unwrap();
        assert!(!agg.throughput_ok);
    }
}
