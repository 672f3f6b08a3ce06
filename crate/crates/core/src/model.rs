//! Closed-form V2V broadcast capacity and delay model.
//!
//! Vehicles sit on a straight road with `N` aligned lanes and a uniform gap
//! `D` between consecutive vehicles of a lane. A transmitter shares the
//! effective channel rate `C·U` with every vehicle inside its interference
//! reach `R·I` on either side, i.e. with `(2RI/D + 1)·N − 1` other vehicles.
//!
//! ```text
//! T = C·U / ((2RI/D + 1)·N)        per-vehicle capacity, Mbit/s
//! d = 8·L / (1000·T)               per-packet delay, ms
//! ```
//!
//! All arithmetic is plain `f64`; the interference term is kept continuous
//! in `D` (no flooring), which reproduces the reference grid exactly.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Default multiplier for [`adaptive_range`]: range = 10 × inter-vehicle gap.
pub const DEFAULT_RANGE_MULTIPLIER: f64 = 10.0;

/// Default road extent for simulation: 10 × R·I at the default radio.
pub const DEFAULT_ROAD_LENGTH_M: f64 = 6000.0;

/// Inter-vehicle gaps (m) of the reference capacity/delay grid.
pub const REFERENCE_GAPS_M: [f64; 6] = [6.0, 20.0, 50.0, 100.0, 200.0, 300.0];

/// Lane counts of the reference capacity/delay grid.
pub const REFERENCE_LANES: [u32; 4] = [2, 4, 6, 8];

/// Radio and channel parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RadioConfig {
    /// Transmission range `R` in meters.
    pub transmission_range_m: f64,
    /// Interference range over transmission range, `I`.
    pub interference_ratio: f64,
    /// Raw channel rate `C` in Mbit/s.
    pub channel_capacity_mbps: f64,
    /// Capacity utilization ratio `U` in `[0, 1]`.
    pub utilization: f64,
    /// Packet length `L` in bytes.
    pub packet_length_bytes: u32,
    /// Number of orthogonal channels.
    pub channel_count: u32,
}

impl Default for RadioConfig {
    fn default() -> Self {
        Self {
            transmission_range_m: 300.0,
            interference_ratio: 2.0,
            channel_capacity_mbps: 27.0,
            utilization: 0.9,
            packet_length_bytes: 400,
            channel_count: 1,
        }
    }
}

impl RadioConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.transmission_range_m.is_finite() && self.transmission_range_m > 0.0) {
            return Err(invalid("transmission_range_m", "must be finite and > 0"));
        }
        if !(self.interference_ratio.is_finite() && self.interference_ratio >= 1.0) {
            return Err(invalid("interference_ratio", "must be finite and >= 1"));
        }
        if !(self.channel_capacity_mbps.is_finite() && self.channel_capacity_mbps >= 0.0) {
            return Err(invalid("channel_capacity_mbps", "must be finite and >= 0"));
        }
        if !(0.0..=1.0).contains(&self.utilization) {
            return Err(invalid("utilization", "must lie in [0, 1]"));
        }
        if self.packet_length_bytes < 1 {
            return Err(invalid("packet_length_bytes", "must be >= 1"));
        }
        if self.channel_count < 1 {
            return Err(invalid("channel_count", "must be >= 1"));
        }
        Ok(())
    }

    /// Interference reach `R·I` in meters.
    pub fn interference_range_m(&self) -> f64 {
        self.transmission_range_m * self.interference_ratio
    }

    /// Airtime of one packet payload at the raw channel rate, in seconds.
    pub fn packet_airtime_s(&self) -> f64 {
        8.0 * f64::from(self.packet_length_bytes) / (self.channel_capacity_mbps * 1e6)
    }

    pub fn with_transmission_range(mut self, range_m: f64) -> Self {
        self.transmission_range_m = range_m;
        self
    }
}

/// Straight multi-lane road with uniform spacing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoadScenario {
    /// Number of lanes `N`.
    pub lane_count: u32,
    /// Gap `D` between consecutive vehicles of a lane, meters.
    pub inter_vehicle_gap_m: f64,
    /// Road extent used by the simulator.
    #[serde(default = "default_road_length")]
    pub road_length_m: f64,
}

fn default_road_length() -> f64 {
    DEFAULT_ROAD_LENGTH_M
}

impl Default for RoadScenario {
    fn default() -> Self {
        Self::uniform(2, 300.0)
    }
}

impl RoadScenario {
    pub fn new(lane_count: u32, inter_vehicle_gap_m: f64, road_length_m: f64) -> Self {
        Self {
            lane_count,
            inter_vehicle_gap_m,
            road_length_m,
        }
    }

    /// Road with the default simulation extent (stretched to at least one gap).
    pub fn uniform(lane_count: u32, inter_vehicle_gap_m: f64) -> Self {
        Self::new(
            lane_count,
            inter_vehicle_gap_m,
            DEFAULT_ROAD_LENGTH_M.max(inter_vehicle_gap_m),
        )
    }

    /// Checks only the parameters the closed-form model uses.
    pub fn validate_model(&self) -> Result<()> {
        if self.lane_count < 1 {
            return Err(invalid("lane_count", "must be >= 1"));
        }
        if !(self.inter_vehicle_gap_m.is_finite() && self.inter_vehicle_gap_m > 0.0) {
            return Err(invalid("inter_vehicle_gap_m", "must be finite and > 0"));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_model()?;
        if !(self.road_length_m.is_finite() && self.road_length_m > 0.0) {
            return Err(invalid("road_length_m", "must be finite and > 0"));
        }
        if self.road_length_m < self.inter_vehicle_gap_m {
            return Err(invalid(
                "road_length_m",
                format!(
                    "{} m is shorter than the inter-vehicle gap {} m",
                    self.road_length_m, self.inter_vehicle_gap_m
                ),
            ));
        }
        Ok(())
    }
}

/// Model outputs for one radio/road pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticResult {
    pub interferer_count: f64,
    pub per_vehicle_capacity_mbps: f64,
    pub per_packet_delay_ms: f64,
}

/// Vehicles sharing the channel with one transmitter, itself included.
fn contention_set_size(radio: &RadioConfig, road: &RoadScenario) -> f64 {
    (2.0 * radio.interference_range_m() / road.inter_vehicle_gap_m + 1.0)
        * f64::from(road.lane_count)
}

fn check_inputs(radio: &RadioConfig, road: &RoadScenario) -> Result<()> {
    radio.validate()?;
    road.validate_model()
}

/// Number of vehicles interfering with one mid-road transmitter,
/// `(2RI/D + 1)·N − 1`, kept as a real number.
pub fn interferer_count(radio: &RadioConfig, road: &RoadScenario) -> Result<f64> {
    check_inputs(radio, road)?;
    Ok(contention_set_size(radio, road) - 1.0)
}

/// Average per-vehicle transmission capacity `T` in Mbit/s.
///
/// Multiple orthogonal channels multiply the shared rate.
pub fn per_vehicle_capacity(radio: &RadioConfig, road: &RoadScenario) -> Result<f64> {
    check_inputs(radio, road)?;
    let shared = radio.channel_capacity_mbps * radio.utilization * f64::from(radio.channel_count);
    Ok(shared / contention_set_size(radio, road))
}

/// Average per-packet transmission delay `d` in milliseconds.
pub fn per_packet_delay(radio: &RadioConfig, road: &RoadScenario) -> Result<f64> {
    let capacity = per_vehicle_capacity(radio, road)?;
    if capacity <= 0.0 {
        return Err(Error::InfiniteDelay);
    }
    Ok(8.0 * f64::from(radio.packet_length_bytes) / (1000.0 * capacity))
}

pub fn analyze(radio: &RadioConfig, road: &RoadScenario) -> Result<AnalyticResult> {
    Ok(AnalyticResult {
        interferer_count: interferer_count(radio, road)?,
        per_vehicle_capacity_mbps: per_vehicle_capacity(radio, road)?,
        per_packet_delay_ms: per_packet_delay(radio, road)?,
    })
}

fn table_with(
    radio: &RadioConfig,
    gaps: &[f64],
    lanes: &[u32],
    cell: fn(&RadioConfig, &RoadScenario) -> Result<f64>,
) -> Result<Vec<Vec<f64>>> {
    gaps.iter()
        .map(|&gap| {
            lanes
                .iter()
                .map(|&n| cell(radio, &RoadScenario::uniform(n, gap)))
                .collect()
        })
        .collect()
}

/// `matrix[i][j]` = capacity at `(gaps[i], lanes[j])`.
pub fn capacity_table(radio: &RadioConfig, gaps: &[f64], lanes: &[u32]) -> Result<Vec<Vec<f64>>> {
    table_with(radio, gaps, lanes, per_vehicle_capacity)
}

/// `matrix[i][j]` = delay at `(gaps[i], lanes[j])`.
pub fn delay_table(radio: &RadioConfig, gaps: &[f64], lanes: &[u32]) -> Result<Vec<Vec<f64>>> {
    table_with(radio, gaps, lanes, per_packet_delay)
}

/// Transmission range scaled to the inter-vehicle gap, clamped at the
/// radio's configured (maximum) range.
pub fn adaptive_range(radio: &RadioConfig, road: &RoadScenario, gap_multiplier: f64) -> Result<f64> {
    if !(gap_multiplier.is_finite() && gap_multiplier > 0.0) {
        return Err(invalid("gap_multiplier", "must be finite and > 0"));
    }
    check_inputs(radio, road)?;
    Ok((gap_multiplier * road.inter_vehicle_gap_m).min(radio.transmission_range_m))
}

/// Radio with its range replaced by [`adaptive_range`].
pub fn adapt_radio(radio: &RadioConfig, road: &RoadScenario, gap_multiplier: f64) -> Result<RadioConfig> {
    Ok(radio.with_transmission_range(adaptive_range(radio, road, gap_multiplier)?))
}

/// Capacity ratio `T(after) / T(before)` on the same road.
pub fn capacity_gain(before: &RadioConfig, after: &RadioConfig, road: &RoadScenario) -> Result<f64> {
    let base = per_vehicle_capacity(before, road)?;
    let improved = per_vehicle_capacity(after, road)?;
    if base <= 0.0 {
        return Err(Error::ZeroCapacity);
    }
    Ok(improved / base)
}

/// Timeliness and per-vehicle throughput advantage of direct V2V over a
/// base-station relay: twice the cell radius over the V2V range, assuming
/// equal interference-to-communication range ratios in both systems.
pub fn v2v_cellular_advantage(cell_radius_m: f64, v2v_range_m: f64) -> Result<f64> {
    if !(cell_radius_m.is_finite() && cell_radius_m > 0.0) {
        return Err(invalid("cell_radius_m", "must be finite and > 0"));
    }
    if !(v2v_range_m.is_finite() && v2v_range_m > 0.0) {
        return Err(invalid("v2v_range_m", "must be finite and > 0"));
    }
    if v2v_range_m > cell_radius_m {
        log::warn!(
            "V2V range {v2v_range_m} m exceeds the cell radius {cell_radius_m} m; the ratio is below 2"
        );
    }
    Ok(2.0 * cell_radius_m / v2v_range_m)
}

/// Round half away from zero to `decimals` places.
pub fn round_half_up(value: f64, decimals: i32) -> f64 {
    let scale = 10f64.powi(decimals);
    (value * scale).round() / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    fn road(n: u32, d: f64) -> RoadScenario {
        RoadScenario::uniform(n, d)
    }

    #[test]
    fn interferer_count_examples() {
        let radio = RadioConfig::default();
        assert_eq!(interferer_count(&radio, &road(2, 6.0)).unwrap(), 401.0);
        assert_eq!(interferer_count(&radio, &road(2, 300.0)).unwrap(), 9.0);
        assert_eq!(interferer_count(&radio, &road(1, 1200.0)).unwrap(), 1.0);
    }

    #[test]
    fn interferer_count_rejects_bad_road() {
        let radio = RadioConfig::default();
        assert!(interferer_count(&radio, &road(2, 0.0)).is_err());
        assert!(interferer_count(&radio, &road(2, -5.0)).is_err());
        assert!(interferer_count(&radio, &road(0, 6.0)).is_err());
    }

    #[test]
    fn capacity_examples() {
        let radio = RadioConfig::default();
        let cap = |n, d| round_half_up(per_vehicle_capacity(&radio, &road(n, d)).unwrap(), 4);
        assert_eq!(cap(2, 6.0), 0.0604);
        assert_eq!(cap(8, 300.0), 0.6075);
        assert_eq!(cap(4, 100.0), 0.4673);

        let idle = RadioConfig {
            utilization: 0.0,
            ..radio
        };
        assert_eq!(per_vehicle_capacity(&idle, &road(4, 50.0)).unwrap(), 0.0);
        let dead = RadioConfig {
            channel_capacity_mbps: 0.0,
            ..radio
        };
        assert_eq!(per_vehicle_capacity(&dead, &road(4, 50.0)).unwrap(), 0.0);
    }

    #[test]
    fn delay_examples() {
        let radio = RadioConfig::default();
        let delay = |n, d| round_half_up(per_packet_delay(&radio, &road(n, d)).unwrap(), 4);
        assert_eq!(delay(2, 6.0), 52.9383);
        assert_eq!(delay(4, 50.0), 13.1687);
        assert_eq!(delay(2, 300.0), 1.3169);
    }

    #[test]
    fn zero_capacity_delay_is_distinct_error() {
        let radio = RadioConfig {
            utilization: 0.0,
            ..RadioConfig::default()
        };
        assert!(matches!(
            per_packet_delay(&radio, &road(2, 6.0)),
            Err(Error::InfiniteDelay)
        ));
    }

    #[test]
    fn single_and_empty_tables() {
        let radio = RadioConfig::default();
        let cap = capacity_table(&radio, &[300.0], &[2]).unwrap();
        assert_eq!(round_half_up(cap[0][0], 4), 2.43);
        let delay = delay_table(&radio, &[6.0], &[8]).unwrap();
        assert_eq!(round_half_up(delay[0][0], 4), 211.7531);
        let delay = delay_table(&radio, &[300.0], &[2]).unwrap();
        assert_eq!(round_half_up(delay[0][0], 4), 1.3169);
        assert!(capacity_table(&radio, &[], &[2, 4]).unwrap().is_empty());
        assert!(capacity_table(&radio, &[6.0, 0.0], &[2]).is_err());
    }

    #[test]
    fn adaptive_range_examples() {
        let radio = RadioConfig::default();
        assert_eq!(adaptive_range(&radio, &road(2, 6.0), 10.0).unwrap(), 60.0);
        assert_eq!(adaptive_range(&radio, &road(2, 300.0), 10.0).unwrap(), 300.0);
        assert_eq!(adaptive_range(&radio, &road(2, 20.0), 10.0).unwrap(), 200.0);
        assert!(adaptive_range(&radio, &road(2, 20.0), 0.0).is_err());
        assert!(adaptive_range(&radio, &road(2, 20.0), -1.0).is_err());
    }

    #[test]
    fn capacity_gain_examples() {
        let radio = RadioConfig::default();
        let short = radio.with_transmission_range(60.0);
        let gain = capacity_gain(&radio, &short, &road(8, 6.0)).unwrap();
        assert!((gain - 1608.0 / 328.0).abs() < 1e-12);
        assert_eq!(round_half_up(gain, 4), 4.9024);

        assert_eq!(capacity_gain(&radio, &radio, &road(4, 50.0)).unwrap(), 1.0);

        let half = radio.with_transmission_range(150.0);
        let gain = capacity_gain(&radio, &half, &road(2, 300.0)).unwrap();
        assert!((gain - 5.0 / 3.0).abs() < 1e-12);

        let idle = RadioConfig {
            utilization: 0.0,
            ..radio
        };
        assert!(matches!(
            capacity_gain(&idle, &radio, &road(2, 6.0)),
            Err(Error::ZeroCapacity)
        ));
    }

    #[test]
    fn cellular_advantage_examples() {
        assert_eq!(v2v_cellular_advantage(3000.0, 300.0).unwrap(), 20.0);
        assert_eq!(v2v_cellular_advantage(450.0, 450.0).unwrap(), 2.0);
        assert_eq!(v2v_cellular_advantage(1000.0, 50.0).unwrap(), 40.0);
        assert_eq!(v2v_cellular_advantage(100.0, 400.0).unwrap(), 0.5);
        assert!(v2v_cellular_advantage(0.0, 300.0).is_err());
        assert!(v2v_cellular_advantage(1000.0, -1.0).is_err());
    }

    #[test]
    fn radio_validation() {
        let ok = RadioConfig::default();
        assert!(ok.validate().is_ok());
        for bad in [
            RadioConfig { transmission_range_m: 0.0, ..ok },
            RadioConfig { interference_ratio: 0.5, ..ok },
            RadioConfig { utilization: 1.5, ..ok },
            RadioConfig { packet_length_bytes: 0, ..ok },
            RadioConfig { channel_count: 0, ..ok },
            RadioConfig { channel_capacity_mbps: f64::NAN, ..ok },
        ] {
            assert!(bad.validate().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn road_validation() {
        assert!(RoadScenario::new(2, 6.0, 6.0).validate().is_ok());
        assert!(RoadScenario::new(2, 6.0, 0.0).validate().is_err());
        assert!(RoadScenario::new(2, 6.0, 3.0).validate().is_err());
    }
}
