//! Built-in requirement rows for the 26 canonical applications.

use super::types::{
    AppRequirement, Bound, Category, CommLink, Endpoint, FrequencySpec, LatencySpec, RangeSpec,
    SymbolicRange,
};

use Endpoint::{Cloud as C, Infrastructure as I, MobileDevice as M, Sensor, Vehicle as V};

const V2V: CommLink = CommLink::direct(V, V);
const V2I: CommLink = CommLink::direct(V, I);
const I2V: CommLink = CommLink::direct(I, V);
const V2C: CommLink = CommLink::direct(V, C);
const C2V: CommLink = CommLink::direct(C, V);
const C2M: CommLink = CommLink::direct(C, M);
const M2C: CommLink = CommLink::direct(M, C);
const V2C2V: CommLink = CommLink::relayed(V, C, V);
const V2SENSOR: CommLink = CommLink::direct(V, Sensor);

fn app(
    id: &str,
    name: &str,
    category: Category,
    links: &[CommLink],
    range: RangeSpec,
    frequency: FrequencySpec,
    latency: LatencySpec,
) -> AppRequirement {
    AppRequirement {
        id: id.to_string(),
        name: name.to_string(),
        category,
        links: links.to_vec(),
        range,
        frequency,
        latency,
        notes: String::new(),
    }
}

fn with_note(mut app: AppRequirement, note: &str) -> AppRequirement {
    app.notes = note.to_string();
    app
}

fn m(meters: f64) -> RangeSpec {
    RangeSpec::Fixed { meters, approx: false }
}

fn approx_m(meters: f64) -> RangeSpec {
    RangeSpec::Fixed { meters, approx: true }
}

fn between_m(min_m: f64, max_m: f64) -> RangeSpec {
    RangeSpec::Between { min_m, max_m, open_above: false }
}

fn symbolic(scales: &[SymbolicRange]) -> RangeSpec {
    RangeSpec::Symbolic {
        scales: scales.to_vec(),
        nominal_m: None,
        floor_m: None,
        ceiling_m: None,
    }
}

fn hz(hz: f64, bound: Bound) -> FrequencySpec {
    FrequencySpec::Periodic { hz, bound }
}

fn ms(ms: f64, bound: Bound) -> LatencySpec {
    LatencySpec::Bounded { ms, bound }
}

/// The registry rows in table order.
pub(super) fn builtin() -> Vec<AppRequirement> {
    use Bound::*;
    use Category::*;
    use SymbolicRange::*;

    // C/I/V2V,V2V/I/C
    let trip_links = [C2V, I2V, V2V, V2I, V2C];

    vec![
        // Active safety
        app("PCS", "Pre-crash sensing", ActiveSafety, &[V2V], m(50.0), hz(50.0, Exact), ms(20.0, Exact)),
        app("EBL", "Emergency brake lights", ActiveSafety, &[V2V], m(200.0), hz(10.0, Exact), ms(100.0, Exact)),
        app("CCW", "Collaborative collision warning", ActiveSafety, &[V2V], m(150.0), hz(10.0, Exact), ms(100.0, Exact)),
        app("LTA", "Left turn assistant", ActiveSafety, &[I2V, V2I], m(300.0), hz(10.0, Exact), ms(100.0, Exact)),
        app("LCW", "Lane change warning", ActiveSafety, &[V2V], m(150.0), hz(10.0, Exact), ms(100.0, Exact)),
        app("TSV", "Traffic signal violation warning", ActiveSafety, &[I2V], m(250.0), hz(10.0, Exact), ms(100.0, Exact)),
        app("SSV", "Stop sign violation warning", ActiveSafety, &[I2V, V2I], m(300.0), hz(10.0, Exact), ms(100.0, Exact)),
        app("CSW", "Curve speed warning", ActiveSafety, &[I2V], m(200.0), hz(1.0, Exact), ms(1000.0, Exact)),
        // Fuel economy and emission control
        with_note(
            app("LEZ", "Low emission zone", FuelEmission, &[C2V, V2C], RangeSpec::AtLeast { min_m: 1000.0 }, hz(1.0, AtMost), ms(10_000.0, AtLeast)),
            "typical rate 0.1 Hz",
        ),
        app("FEP", "Fuel-economy-oriented trip planning", FuelEmission, &trip_links, RangeSpec::AtLeast { min_m: 300.0 }, hz(1.0, AtLeast), ms(1000.0, Approx)),
        app("PFO", "Preview-based fuel economy optimization", FuelEmission, &trip_links, between_m(300.0, 13_000.0), hz(1.0, AtLeast), LatencySpec::DistanceDependent),
        app("Stop-start", "Stop-start", FuelEmission, &[V2V, V2I, I2V], approx_m(50.0), hz(1.0, AtLeast), ms(100.0, Approx)),
        app("Platoon", "Platoon", FuelEmission, &[V2V], between_m(50.0, 300.0), hz(10.0, AtLeast), ms(100.0, Approx)),
        // Networked vehicle automation
        with_note(
            app(
                "AVT",
                "Adaptive vehicle tuning",
                Automation,
                &[V2V, V2C2V],
                RangeSpec::Symbolic {
                    scales: vec![ContextDependent],
                    nominal_m: Some(100.0),
                    floor_m: None,
                    ceiling_m: None,
                },
                hz(10.0, Approx),
                ms(100.0, Approx),
            ),
            "range context dependent (e.g. speed, inter-vehicle gaps)",
        ),
        app("CFEM", "Collaborative failure-mode-effect-management", Automation, &[V2V, V2I, I2V], approx_m(300.0), hz(10.0, Approx), ms(100.0, Approx)),
        app("TJA", "Traffic jam assist", Automation, &[V2V], between_m(10.0, 300.0), hz(10.0, Approx), ms(100.0, Approx)),
        app("SCLC", "Supercruise with opportunistic lane change", Automation, &[V2V], between_m(10.0, 300.0), hz(10.0, Approx), ms(100.0, Approx)),
        app(
            "AP",
            "Automated valet/street parking",
            Automation,
            &[V2V, V2C2V, V2SENSOR],
            RangeSpec::Between { min_m: 10.0, max_m: 1000.0, open_above: true },
            hz(1.0, AtMost),
            ms(1000.0, AtLeast),
        ),
        // Vehicular infotainment
        app("RVS", "Remote vehicle status", Infotainment, &[V2C, C2V, C2M], symbolic(&[CellularRadius, VehicleUserDistance]), hz(0.1, AtMost), LatencySpec::BestEffort),
        app("RVC", "Remote vehicle command", Infotainment, &[M2C, C2V, V2C, C2M], symbolic(&[CellularRadius, VehicleUserDistance]), FrequencySpec::EventDriven, ms(5000.0, AtMost)),
        app("RTCS", "Real-time cloud services to vehicle", Infotainment, &[C2V], symbolic(&[CellularRadius]), hz(10.0, AtMost), LatencySpec::Between { min_ms: 100.0, max_ms: 10_000.0 }),
        app("CSS", "Crowd-sourced sensing", Infotainment, &[V2V, V2C, C2V, I2V], symbolic(&[CellularRadius, InterVehicleGaps]), FrequencySpec::Mixed { hz: 1.0, bound: AtMost }, LatencySpec::Between { min_ms: 1000.0, max_ms: 60_000.0 }),
        app("DID", "Delay-insensitive downloads", Infotainment, &[C2V, V2C], symbolic(&[CellularRadius]), FrequencySpec::EventDriven, LatencySpec::BestEffort),
        app(
            "GPA",
            "Geographic proximity applications",
            Infotainment,
            &[V2V, V2C, V2I, C2V, I2V],
            symbolic(&[InterVehicleGaps, V2iDistance, CellularRadius]),
            FrequencySpec::Mixed { hz: 1.0, bound: AtMost },
            LatencySpec::BestEffortOr(Box::new(ms(100.0, AtLeast))),
        ),
        app("ESS", "Extended surrounding sensing", Infotainment, &[V2V, V2I, I2V], between_m(100.0, 300.0), hz(10.0, Approx), ms(100.0, Approx)),
        with_note(
            app(
                "CDPA",
                "Cloud-based diagnostics/prognostics/analytics",
                Infotainment,
                &[V2C],
                symbolic(&[CellularRadius]),
                FrequencySpec::Mixed { hz: 10.0, bound: AtLeast },
                LatencySpec::BestEffortOr(Box::new(LatencySpec::Between { min_ms: 300_000.0, max_ms: 600_000.0 })),
            ),
            "5-10 minutes for powertrain fault report",
        ),
    ]
}
