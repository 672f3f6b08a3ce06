use super::engine::{self, Policy, Setup};
use super::{Corridor, SimConfig, SimOutcome, TdmaSchedule};
use crate::error::{invalid, Result};
use crate::model::RadioConfig;

/// Runs spatial-reuse TDMA. Colour `c` of the schedule maps to frame slot
/// `c / k` on channel `c % k` for `k` channels. Any collision aborts the run
/// with [`crate::Error::TdmaCollision`].
pub fn run_tdma(
    corridor: &Corridor,
    schedule: &TdmaSchedule,
    radio: &RadioConfig,
    config: &SimConfig,
) -> Result<SimOutcome> {
    config.validate()?;
    corridor.check_radio(radio)?;
    if radio.utilization <= 0.0 {
        return Err(invalid("utilization", "TDMA slots need U > 0"));
    }
    let graph = corridor.graph();
    schedule.validate(graph)?;

    let k = radio.channel_count as usize;
    let frame_slots = schedule.frame_slots(radio.channel_count).max(1);
    let n = graph.node_count();
    let mut by_slot = vec![Vec::new(); frame_slots];
    let mut channel = vec![0; n];
    for (r, &v) in graph.order().iter().enumerate() {
        let c = schedule.slot_of(v);
        by_slot[c / k].push(r);
        channel[r] = c % k;
    }

    engine::run(
        corridor,
        radio,
        config,
        Setup {
            policy: Policy::Tdma { by_slot, channel },
            channels: k,
            slot_len_s: TdmaSchedule::slot_duration_s(radio),
            frame_slots: frame_slots as u64,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{per_packet_delay, per_vehicle_capacity, RoadScenario};
    use crate::sim::{tdma_schedule, SimDuration, Traffic};
    use crate::Error;

    fn corridor(n: u32, d: f64) -> (Corridor, TdmaSchedule) {
        let c = Corridor::build(&RoadScenario::uniform(n, d), &RadioConfig::default()).unwrap();
        let s = tdma_schedule(c.graph());
        (c, s)
    }

    #[test]
    fn default_cell_matches_model() {
        let radio = RadioConfig::default();
        let (c, s) = corridor(2, 300.0);
        let out = run_tdma(&c, &s, &radio, &SimConfig::default()).unwrap();
        let road = RoadScenario::uniform(2, 300.0);
        let t = per_vehicle_capacity(&radio, &road).unwrap();
        assert!((out.per_vehicle_throughput_mbps - t).abs() / t < 1e-9);
        let d = per_packet_delay(&radio, &road).unwrap();
        assert!((out.delay.mean_ms - d).abs() / d < 1e-9);
        assert_eq!(out.collisions, 0);
        assert!((out.utilization - 0.9).abs() < 1e-9);
        assert_eq!(out.pdr, 1.0);
        assert!(out.is_conserved());
    }

    #[test]
    fn zero_duration() {
        let (c, s) = corridor(2, 300.0);
        let cfg = SimConfig {
            duration: SimDuration::Seconds(0.0),
            ..SimConfig::default()
        };
        let out = run_tdma(&c, &s, &RadioConfig::default(), &cfg).unwrap();
        assert_eq!(out.event_count, 0);
        assert_eq!(out.pdr, 1.0);
        assert_eq!(out.counters.generated, 0);
    }

    #[test]
    fn improper_schedule_rejected() {
        let (c, s) = corridor(2, 300.0);
        let mut slots = s.slots().to_vec();
        slots[3] = slots[2];
        let bad = TdmaSchedule::from_slots(slots);
        let err = run_tdma(&c, &bad, &RadioConfig::default(), &SimConfig::default());
        assert!(matches!(err, Err(Error::ImproperSchedule { .. })));
    }

    #[test]
    fn radio_must_match_graph() {
        let (c, s) = corridor(2, 300.0);
        let short = RadioConfig::default().with_transmission_range(100.0);
        assert!(run_tdma(&c, &s, &short, &SimConfig::default()).is_err());
    }

    #[test]
    fn periodic_traffic_conserves_packets() {
        let (c, s) = corridor(2, 100.0);
        let cfg = SimConfig {
            duration: SimDuration::Seconds(0.5),
            traffic: Traffic::Periodic { rate_hz: 10.0 },
            ..SimConfig::default()
        };
        let out = run_tdma(&c, &s, &RadioConfig::default(), &cfg).unwrap();
        assert!(out.is_conserved());
        assert_eq!(out.collisions, 0);
        assert!(out.counters.generated > 0);
    }

    #[test]
    fn two_channels_halve_the_frame() {
        let radio = RadioConfig {
            channel_count: 2,
            ..RadioConfig::default()
        };
        let c = Corridor::build(&RoadScenario::uniform(2, 300.0), &radio).unwrap();
        let s = tdma_schedule(c.graph());
        let out = run_tdma(&c, &s, &radio, &SimConfig::default()).unwrap();
        assert_eq!(out.frame_slots, 5);
        let t = per_vehicle_capacity(&radio, &RoadScenario::uniform(2, 300.0)).unwrap();
        assert!((out.per_vehicle_throughput_mbps - t).abs() / t < 1e-9);
    }
}
