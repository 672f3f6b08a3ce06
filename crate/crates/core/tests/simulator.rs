use std::path::PathBuf;

use cavnet::model::*;
use cavnet::sim::*;
use proptest::prelude::*;

fn corridor(radio: &RadioConfig, road: &RoadScenario) -> (Corridor, TdmaSchedule) {
    let c = Corridor::build(road, radio).unwrap();
    let s = tdma_schedule(c.graph());
    (c, s)
}

fn contention_config(seed: u64) -> SimConfig {
    let b = BackoffConfig::default();
    SimConfig {
        duration: SimDuration::default_for(MacKind::Contention, &b),
        seed,
        ..SimConfig::default()
    }
}

#[test]
fn tdma_matches_eq1_on_the_grid() {
    let radio = RadioConfig::default();
    for &d in &REFERENCE_GAPS_M {
        for &n in &REFERENCE_LANES {
            let road = RoadScenario::uniform(n, d);
            assert!(road.road_length_m >= 10.0 * radio.interference_range_m());
            let (c, s) = corridor(&radio, &road);
            assert!(s.frame_length() <= c.graph().max_degree() + 1);
            let out = run_tdma(&c, &s, &radio, &SimConfig::default()).unwrap();
            let report = compare(&analyze(&radio, &road).unwrap(), &out);
            assert!(!report.flagged, "D={d} N={n}: {report:?}");
            assert!(report.throughput_rel_error.unwrap().abs() <= 0.10);
            assert_eq!(out.collisions, 0);
        }
    }
}

#[test]
fn schedule_frame_is_the_interference_clique() {
    let radio = RadioConfig::default();
    for &d in &REFERENCE_GAPS_M {
        for &n in &REFERENCE_LANES {
            let (_, s) = corridor(&radio, &RoadScenario::uniform(n, d));
            let clique = (2.0 * radio.interference_range_m() / d + 1.0) * f64::from(n);
            assert!((s.frame_length() as f64 - clique).abs() <= 1.0, "D={d} N={n}");
        }
    }
}

#[test]
fn contention_below_half_and_below_tdma() {
    let radio = RadioConfig::default();
    for &d in &REFERENCE_GAPS_M {
        for &n in &REFERENCE_LANES {
            let road = RoadScenario::uniform(n, d);
            let (c, s) = corridor(&radio, &road);
            let seed = 11;
            let tdma = run_tdma(&c, &s, &radio, &SimConfig { seed, ..SimConfig::default() }).unwrap();
            let cont = run_contention(&c, &radio, &contention_config(seed), &BackoffConfig::default()).unwrap();
            assert!(cont.utilization < tdma.utilization, "D={d} N={n}");
            if d == 6.0 {
                assert!(cont.utilization < 0.5);
            }
            assert!(compare(&analyze(&radio, &road).unwrap(), &cont).flagged);
        }
    }
}

#[test]
fn adaptive_range_gain_in_simulation() {
    let road = RoadScenario::uniform(8, 6.0);
    let wide = RadioConfig::default();
    let narrow = adapt_radio(&wide, &road, DEFAULT_RANGE_MULTIPLIER).unwrap();
    assert_eq!(narrow.transmission_range_m, 60.0);
    let run = |radio: &RadioConfig| {
        let (c, s) = corridor(radio, &road);
        run_tdma(&c, &s, radio, &SimConfig { seed: 3, ..SimConfig::default() }).unwrap()
    };
    let gain = run(&narrow).per_vehicle_throughput_mbps / run(&wide).per_vehicle_throughput_mbps;
    assert!((4.4..=5.4).contains(&gain), "{gain}");
}

/// Per-vehicle TDMA rate on an endless road with the same lattice: slots
/// are reused beyond two hops, `2·⌊RI/D⌋` positions away.
fn endless_road_rate(radio: &RadioConfig, n: u32, d: f64) -> f64 {
    let hop = (radio.interference_range_m() / d + 1e-9).floor();
    let clique = (2.0 * hop + 1.0) * f64::from(n);
    radio.channel_capacity_mbps * radio.utilization / clique
}

#[test]
fn boundary_effect_is_small_on_long_roads() {
    let radio = RadioConfig::default();
    for (n, d) in [(3, 7.0), (2, 45.0), (5, 130.0), (2, 300.0), (4, 20.0)] {
        let road = RoadScenario::new(n, d, 10.0 * radio.interference_range_m());
        let (c, s) = corridor(&radio, &road);
        let out = run_tdma(&c, &s, &radio, &SimConfig::default()).unwrap();
        let t = endless_road_rate(&radio, n, d);
        let err = (out.per_vehicle_throughput_mbps - t).abs() / t;
        assert!(err <= 0.05, "D={d} N={n}: {err}");
    }
}

#[test]
fn lattice_rate_equals_eq1_when_gap_divides_reach() {
    let radio = RadioConfig::default();
    for &d in &REFERENCE_GAPS_M {
        for &n in &REFERENCE_LANES {
            let t = per_vehicle_capacity(&radio, &RoadScenario::uniform(n, d)).unwrap();
            assert!((endless_road_rate(&radio, n, d) - t).abs() <= 1e-12 * t);
        }
    }
}

#[test]
fn zero_duration_is_incomparable() {
    let radio = RadioConfig::default();
    let road = RoadScenario::default();
    let (c, s) = corridor(&radio, &road);
    let cfg = SimConfig { duration: SimDuration::Frames(0), ..SimConfig::default() };
    let out = run_tdma(&c, &s, &radio, &cfg).unwrap();
    assert_eq!(out.event_count, 0);
    assert_eq!(out.pdr, 1.0);
    let report = compare(&analyze(&radio, &road).unwrap(), &out);
    assert!(!report.comparable);
    assert!(report.flagged);
}

#[test]
fn periodic_load_is_delivered_by_tdma() {
    let radio = RadioConfig::default();
    let road = RoadScenario::uniform(2, 100.0);
    let (c, s) = corridor(&radio, &road);
    let cfg = SimConfig {
        duration: SimDuration::Seconds(2.0),
        traffic: Traffic::Periodic { rate_hz: 10.0 },
        ..SimConfig::default()
    };
    let out = run_tdma(&c, &s, &radio, &cfg).unwrap();
    assert!(out.is_conserved());
    assert_eq!(out.counters.overflow_dropped, 0);
    assert_eq!(out.pdr, 1.0);
    // Worst case: arrival just after the vehicle's own slot began.
    let bound_ms = 1000.0 * (out.frame_slots + 1) as f64 * out.slot_duration_s;
    assert!(out.delay.max_ms <= bound_ms + 1e-9);
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn check_golden(name: &str, actual: &str) {
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("{}: {e}; rerun with UPDATE_GOLDEN=1", path.display()));
    assert_eq!(actual, expected, "{name} drifted");
}

#[test]
fn golden_runs() {
    let radio = RadioConfig::default();
    let road = RoadScenario::uniform(4, 6.0);
    let (c, s) = corridor(&radio, &road);
    let tdma = run_tdma(&c, &s, &radio, &SimConfig { seed: 42, ..SimConfig::default() }).unwrap();
    assert_eq!(tdma.collisions, 0);
    check_golden("tdma_d6_n4_seed42.json", &tdma.to_json().unwrap());
    let cont = run_contention(&c, &radio, &contention_config(42), &BackoffConfig::default()).unwrap();
    assert!(cont.utilization < 0.5);
    check_golden("contention_d6_n4_seed42.json", &cont.to_json().unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn runs_are_deterministic_and_conserving(
        n in 1u32..4,
        d in 20.0..300.0f64,
        seed in any::<u64>(),
        rate in prop::option::of(1.0..40.0f64),
        channels in 1u32..3,
    ) {
        let radio = RadioConfig { channel_count: channels, ..RadioConfig::default() };
        let road = RoadScenario::new(n, d, 3000.0);
        let (c, s) = corridor(&radio, &road);
        let traffic = rate.map_or(Traffic::Saturated, |rate_hz| Traffic::Periodic { rate_hz });
        let cfg = SimConfig { duration: SimDuration::Seconds(0.3), seed, traffic, queue_limit: 4 };
        let a = run_tdma(&c, &s, &radio, &cfg).unwrap();
        prop_assert_eq!(&a, &run_tdma(&c, &s, &radio, &cfg).unwrap());
        prop_assert!(a.is_conserved());
        prop_assert_eq!(a.collisions, 0);
        let b = run_contention(&c, &radio, &cfg, &BackoffConfig::default()).unwrap();
        let again = run_contention(&c, &radio, &cfg, &BackoffConfig::default()).unwrap();
        prop_assert_eq!(b.to_json().unwrap(), again.to_json().unwrap());
        prop_assert!(b.is_conserved());
        for o in [&a, &b] {
            prop_assert!((0.0..=1.0).contains(&o.pdr));
            prop_assert!((0.0..=1.0).contains(&o.utilization));
        }
    }
}
