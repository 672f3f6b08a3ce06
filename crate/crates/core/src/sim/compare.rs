use serde::{Deserialize, Serialize};

use super::SimOutcome;
use crate::model::AnalyticResult;

/// Relative error above which a cell is flagged.
pub const DEFAULT_TOLERANCE: f64 = 0.10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub comparable: bool,
    pub analytic_throughput_mbps: f64,
    pub simulated_throughput_mbps: f64,
    pub throughput_rel_error: Option<f64>,
    pub analytic_delay_ms: f64,
    pub simulated_delay_ms: Option<f64>,
    pub delay_rel_error: Option<f64>,
    pub tolerance: f64,
    pub flagged: bool,
    pub notes: Vec<String>,
}

/// Relative error of the simulated throughput and mean delay against the
/// closed-form values.
pub fn compare(analytic: &AnalyticResult, sim: &SimOutcome) -> Discrepancy {
    let tolerance = DEFAULT_TOLERANCE;
    let mut notes = Vec::new();
    let rel = |sim: f64, model: f64| (sim - model) / model;

    let comparable = sim.window_s > 0.0 && sim.measured_vehicles > 0;
    if !comparable {
        notes.push("incomparable: empty measurement window".to_string());
    }
    let throughput_rel_error = (comparable && analytic.per_vehicle_capacity_mbps > 0.0)
        .then(|| rel(sim.per_vehicle_throughput_mbps, analytic.per_vehicle_capacity_mbps));
    let simulated_delay_ms = (sim.delay.count > 0).then_some(sim.delay.mean_ms);
    let delay_rel_error = simulated_delay_ms
        .filter(|_| comparable && analytic.per_packet_delay_ms.is_finite())
        .map(|d| rel(d, analytic.per_packet_delay_ms));

    let mut flagged = !comparable;
    if let Some(e) = throughput_rel_error {
        if e.abs() > tolerance {
            flagged = true;
            notes.push(format!("throughput off by {:.1}%", 100.0 * e));
        }
    }
    if let Some(e) = delay_rel_error {
        if e.abs() > tolerance {
            flagged = true;
            notes.push(format!("mean delay off by {:.1}%", 100.0 * e));
        }
    }
    if comparable && simulated_delay_ms.is_none() {
        flagged = true;
        notes.push("no packet delivered in the window".to_string());
    }

    Discrepancy {
        comparable,
        analytic_throughput_mbps: analytic.per_vehicle_capacity_mbps,
        simulated_throughput_mbps: sim.per_vehicle_throughput_mbps,
        throughput_rel_error,
        analytic_delay_ms: analytic.per_packet_delay_ms,
        simulated_delay_ms,
        delay_rel_error,
        tolerance,
        flagged,
        notes,
    }
}
