use std::fs;
use std::path::Path;

use cavnet::feasibility::{check_aggregate, scenario_sweep, write_verdicts_csv};
use cavnet::model::{adapt_radio, analyze, capacity_table, delay_table, RadioConfig, RoadScenario};
use cavnet::registry::{registry_report, AppRequirement, Registry, ReportFormat};
use cavnet::sim::{
    compare, run_contention, run_tdma, tdma_schedule, Corridor, Discrepancy, MacKind, SimOutcome,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::{Cli, CliError, Command, CommonArgs, Format, MacArg, Scenario};

type Result<T> = std::result::Result<T, CliError>;

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Tables(args) => tables(args),
        Command::Classify(args) => classify(args),
        Command::Feasibility(args) => feasibility(args),
        Command::Simulate(args) => {
            let mac = args.mac.map(|m| match m {
                MacArg::Tdma => MacKind::Tdma,
                MacArg::Contention => MacKind::Contention,
            });
            simulate(&args.common, mac)
        }
        Command::Compare(args) => compare_grid(args),
    }
}

/// Scenario file (or defaults) with command-line overrides applied.
fn resolve(args: &CommonArgs) -> Result<Scenario> {
    let mut s = match &args.scenario {
        Some(path) => Scenario::load(path)?,
        None => Scenario::default(),
    };
    if let Some(gaps) = &args.gaps {
        s.sweep.gaps = gaps.clone();
    }
    if let Some(lanes) = &args.lanes {
        s.sweep.lanes = lanes.clone();
    }
    if let Some(seed) = args.seed {
        s.simulation.seed = seed;
    }
    if args.adaptive_range.is_some() {
        s.feasibility.adaptive_range = args.adaptive_range;
    }
    s.validate()?;
    Ok(s)
}

fn tabular_format(args: &CommonArgs) -> Result<Format> {
    if args.format == Format::Table {
        return Err(CliError::Validation("--format table is only available for classify".into()));
    }
    Ok(args.format)
}

fn write(dir: &Path, name: &str, contents: &[u8]) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    log::info!("wrote {}", path.display());
    Ok(())
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Computation(e.to_string()))?;
    text.push('\n');
    Ok(text.into_bytes())
}

fn radio_for(s: &Scenario, road: &RoadScenario) -> Result<RadioConfig> {
    Ok(match s.feasibility.adaptive_range {
        Some(m) => adapt_radio(&s.radio, road, m)?,
        None => s.radio,
    })
}

/// Grid laid out with one row per gap, one column per lane count.
fn grid_csv(gaps: &[f64], lanes: &[u32], values: &[Vec<f64>]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["gap_m".to_string()];
    header.extend(lanes.iter().map(|n| format!("lanes_{n}")));
    w.write_record(&header).map_err(cavnet::Error::from)?;
    for (gap, row) in gaps.iter().zip(values) {
        let mut record = vec![gap.to_string()];
        record.extend(row.iter().map(|v| format!("{v:.4}")));
        w.write_record(&record).map_err(cavnet::Error::from)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

#[derive(Serialize)]
struct Tables<'a> {
    gaps_m: &'a [f64],
    lanes: &'a [u32],
    capacity_mbps: Vec<Vec<f64>>,
    delay_ms: Vec<Vec<f64>>,
}

fn tables(args: &CommonArgs) -> Result<()> {
    let format = tabular_format(args)?;
    let s = resolve(args)?;
    let (gaps, lanes) = (&s.sweep.gaps, &s.sweep.lanes);
    let (capacity, delay) = match s.feasibility.adaptive_range {
        None => (capacity_table(&s.radio, gaps, lanes)?, delay_table(&s.radio, gaps, lanes)?),
        Some(_) => {
            let mut cap = Vec::new();
            let mut del = Vec::new();
            for &gap in gaps {
                let mut cap_row = Vec::new();
                let mut del_row = Vec::new();
                for &n in lanes {
                    let road = RoadScenario::uniform(n, gap);
                    let a = analyze(&radio_for(&s, &road)?, &road)?;
                    cap_row.push(a.per_vehicle_capacity_mbps);
                    del_row.push(a.per_packet_delay_ms);
                }
                cap.push(cap_row);
                del.push(del_row);
            }
            (cap, del)
        }
    };
    match format {
        Format::Json => {
            let t = Tables { gaps_m: gaps, lanes, capacity_mbps: capacity, delay_ms: delay };
            write(&args.out, "tables.json", &to_json(&t)?)
        }
        _ => {
            write(&args.out, "capacity.csv", &grid_csv(gaps, lanes, &capacity)?)?;
            write(&args.out, "delay.csv", &grid_csv(gaps, lanes, &delay)?)
        }
    }
}

fn registry(s: &Scenario) -> Result<Registry> {
    match &s.registry {
        None => Ok(Registry::builtin()),
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
            Ok(Registry::from_json(&text)?)
        }
    }
}

fn classify(args: &CommonArgs) -> Result<()> {
    let s = resolve(args)?;
    let reg = registry(&s)?;
    let (format, name) = match args.format {
        Format::Csv => (ReportFormat::Csv, "classification.csv"),
        Format::Json => (ReportFormat::Json, "classification.json"),
        Format::Table => (ReportFormat::Table, "classification.txt"),
    };
    let mut report = registry_report(reg.apps(), &s.thresholds, format)?;
    if !report.ends_with('\n') {
        report.push('\n');
    }
    write(&args.out, name, report.as_bytes())?;
    let violations = reg.regime_violations(&s.thresholds)?;
    for v in &violations {
        log::error!("regime rule: {v}");
    }
    if violations.is_empty() {
        println!("classified {} applications", reg.len());
        Ok(())
    } else {
        Err(CliError::Computation(format!("{} regime-rule violations", violations.len())))
    }
}

fn selected_apps(s: &Scenario) -> Result<Vec<AppRequirement>> {
    let reg = registry(s)?;
    match &s.feasibility.apps {
        None => Ok(reg.apps().to_vec()),
        Some(ids) => ids
            .iter()
            .map(|id| {
                reg.get(id)
                    .cloned()
                    .ok_or_else(|| CliError::Validation(format!("unknown application `{id}`")))
            })
            .collect(),
    }
}

#[derive(Serialize)]
struct AggregateRow {
    gap_m: f64,
    lanes: u32,
    capacity_mbps: f64,
    demand_mbps: f64,
    throughput_ok: bool,
}

fn feasibility(args: &CommonArgs) -> Result<()> {
    let format = tabular_format(args)?;
    let s = resolve(args)?;
    let apps = selected_apps(&s)?;
    let options = s.feasibility.options();
    let sweep = scenario_sweep(&apps, &s.radio, &s.sweep.gaps, &s.sweep.lanes, &options)?;
    match format {
        Format::Json => write(&args.out, "feasibility.json", &to_json(&sweep)?)?,
        _ => {
            let mut buf = Vec::new();
            write_verdicts_csv(&sweep.verdicts, &mut buf)?;
            write(&args.out, "feasibility.csv", &buf)?;
        }
    }
    if s.feasibility.aggregate {
        let mut rows = Vec::new();
        for &gap in &s.sweep.gaps {
            for &n in &s.sweep.lanes {
                let road = RoadScenario::uniform(n, gap);
                let a = check_aggregate(&apps, &radio_for(&s, &road)?, &road)?;
                rows.push(AggregateRow {
                    gap_m: gap,
                    lanes: n,
                    capacity_mbps: a.capacity_mbps,
                    demand_mbps: a.demand_mbps,
                    throughput_ok: a.throughput_ok,
                });
            }
        }
        match format {
            Format::Json => write(&args.out, "aggregate.json", &to_json(&rows)?)?,
            _ => {
                let mut w = csv::Writer::from_writer(Vec::new());
                for r in &rows {
                    w.serialize(r).map_err(cavnet::Error::from)?;
                }
                let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
                write(&args.out, "aggregate.csv", &bytes)?;
            }
        }
    }
    println!(
        "infeasible cells: {} of {} (latency {}, throughput {})",
        sweep.infeasible_cells,
        sweep.verdicts.len(),
        sweep.latency_infeasible_cells,
        sweep.throughput_infeasible_cells
    );
    Ok(())
}

fn single<T: Copy>(values: &Option<Vec<T>>, flag: &str) -> Result<Option<T>> {
    match values.as_deref() {
        None => Ok(None),
        Some([v]) => Ok(Some(*v)),
        Some(_) => Err(CliError::Validation(format!("simulate takes a single value for {flag}"))),
    }
}

fn run_mac(s: &Scenario, radio: &RadioConfig, road: &RoadScenario, mac: MacKind) -> Result<SimOutcome> {
    let corridor = Corridor::build(road, radio)?;
    let config = s.simulation.config(mac);
    let outcome = match mac {
        MacKind::Tdma => run_tdma(&corridor, &tdma_schedule(corridor.graph()), radio, &config)?,
        MacKind::Contention => run_contention(&corridor, radio, &config, &s.simulation.backoff())?,
    };
    if !outcome.is_conserved() {
        return Err(CliError::Computation("packet conservation violated".into()));
    }
    Ok(outcome)
}

fn simulate(args: &CommonArgs, mac: Option<MacKind>) -> Result<()> {
    let s = resolve(args)?;
    let mut road = s.road;
    if let Some(gap) = single(&args.gaps, "--gaps")? {
        road.inter_vehicle_gap_m = gap;
        road.road_length_m = road.road_length_m.max(gap);
    }
    if let Some(n) = single(&args.lanes, "--lanes")? {
        road.lane_count = n;
    }
    road.validate()?;
    let mac = mac.unwrap_or(s.simulation.mac);
    let radio = radio_for(&s, &road)?;
    let outcome = run_mac(&s, &radio, &road, mac)?;
    let report = compare(&analyze(&radio, &road)?, &outcome);

    write(&args.out, "outcome.json", &to_json(&outcome)?)?;
    let mut csv = Vec::new();
    outcome.write_csv(&mut csv)?;
    write(&args.out, "outcome.csv", &csv)?;
    write(&args.out, "compare.json", &to_json(&report)?)?;

    log::info!(
        "{} D={} N={}: throughput {:.6} Mbps, utilization {:.4}, PDR {:.4}",
        outcome.mac_name(),
        road.inter_vehicle_gap_m,
        road.lane_count,
        outcome.per_vehicle_throughput_mbps,
        outcome.utilization,
        outcome.pdr
    );
    if mac == MacKind::Contention && outcome.utilization < 0.5 {
        log::info!("contention utilization {:.4} is below 0.5", outcome.utilization);
    }
    if report.flagged {
        log::warn!("simulation departs from the model: {}", report.notes.join("; "));
    }
    Ok(())
}

#[derive(Serialize)]
struct CompareRow {
    gap_m: f64,
    lanes: u32,
    transmission_range_m: f64,
    analytic_capacity_mbps: f64,
    analytic_delay_ms: f64,
    tdma_throughput_mbps: f64,
    tdma_rel_error: Option<f64>,
    tdma_utilization: f64,
    tdma_collisions: u64,
    tdma_flagged: bool,
    contention_throughput_mbps: f64,
    contention_rel_error: Option<f64>,
    contention_utilization: f64,
    contention_pdr: f64,
    contention_flagged: bool,
}

fn compare_cell(s: &Scenario, gap: f64, lanes: u32) -> Result<CompareRow> {
    let road = RoadScenario::uniform(lanes, gap);
    let radio = radio_for(s, &road)?;
    let analytic = analyze(&radio, &road)?;
    let tdma = run_mac(s, &radio, &road, MacKind::Tdma)?;
    let cont = run_mac(s, &radio, &road, MacKind::Contention)?;
    let t: Discrepancy = compare(&analytic, &tdma);
    let c: Discrepancy = compare(&analytic, &cont);
    Ok(CompareRow {
        gap_m: gap,
        lanes,
        transmission_range_m: radio.transmission_range_m,
        analytic_capacity_mbps: analytic.per_vehicle_capacity_mbps,
        analytic_delay_ms: analytic.per_packet_delay_ms,
        tdma_throughput_mbps: tdma.per_vehicle_throughput_mbps,
        tdma_rel_error: t.throughput_rel_error,
        tdma_utilization: tdma.utilization,
        tdma_collisions: tdma.collisions,
        tdma_flagged: t.flagged,
        contention_throughput_mbps: cont.per_vehicle_throughput_mbps,
        contention_rel_error: c.throughput_rel_error,
        contention_utilization: cont.utilization,
        contention_pdr: cont.pdr,
        contention_flagged: c.flagged,
    })
}

fn compare_grid(args: &CommonArgs) -> Result<()> {
    let format = tabular_format(args)?;
    let s = resolve(args)?;
    let cells: Vec<(f64, u32)> = s
        .sweep
        .gaps
        .iter()
        .flat_map(|&g| s.sweep.lanes.iter().map(move |&n| (g, n)))
        .collect();
    let rows = cells
        .par_iter()
        .map(|&(g, n)| compare_cell(&s, g, n))
        .collect::<Result<Vec<_>>>()?;
    match format {
        Format::Json => write(&args.out, "compare.json", &to_json(&rows)?)?,
        _ => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &rows {
                w.serialize(r).map_err(cavnet::Error::from)?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
            write(&args.out, "compare.csv", &bytes)?;
        }
    }
    let flagged = rows.iter().filter(|r| r.tdma_flagged).count();
    println!("TDMA cells outside tolerance: {flagged} of {}", rows.len());
    Ok(())
}
