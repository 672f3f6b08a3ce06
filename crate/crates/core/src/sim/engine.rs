//! Slot loop shared by both MACs.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::events::{Event, EventQueue};
use super::outcome::{Counters, DelayStats, SimOutcome};
use super::{Corridor, MacKind, SimConfig, Traffic, WARMUP_FRAMES};
use crate::error::{Error, Result};
use crate::model::RadioConfig;

pub(crate) enum Policy {
    /// `by_slot[s]` lists the ranks owning frame slot `s`, ascending.
    Tdma {
        by_slot: Vec<Vec<usize>>,
        channel: Vec<usize>,
    },
    Contention {
        window: u32,
        counter: Vec<u32>,
    },
}

pub(crate) struct Setup {
    pub policy: Policy,
    pub channels: usize,
    pub slot_len_s: f64,
    pub frame_slots: u64,
}

impl Policy {
    fn kind(&self) -> MacKind {
        match self {
            Policy::Tdma { .. } => MacKind::Tdma,
            Policy::Contention { .. } => MacKind::Contention,
        }
    }

    fn channel(&self, rank: usize, channels: usize) -> usize {
        match self {
            Policy::Tdma { channel, .. } => channel[rank],
            Policy::Contention { .. } => rank % channels,
        }
    }

    fn on_backlogged(&mut self, rank: usize, rng: &mut ChaCha8Rng) {
        if let Policy::Contention { window, counter } = self {
            counter[rank] = rng.gen_range(0..*window);
        }
    }
}

struct Window {
    start_slot: u64,
    measured: Vec<bool>,
    attempts: u64,
    successes: u64,
    delivered: Vec<u64>,
    /// Difference array over ranks: successes heard in each neighbourhood.
    heard: Vec<i64>,
    delays_ms: Vec<f64>,
}

pub(crate) fn run(
    corridor: &Corridor,
    radio: &RadioConfig,
    config: &SimConfig,
    setup: Setup,
) -> Result<SimOutcome> {
    let Setup {
        mut policy,
        channels,
        slot_len_s,
        frame_slots,
    } = setup;
    let graph = corridor.graph();
    let order = graph.order();
    let n = order.len();
    let kind = policy.kind();
    let strict = kind == MacKind::Tdma;

    let total_slots = config.duration.total_slots(slot_len_s, frame_slots)?;
    let warmup_slots = (WARMUP_FRAMES * frame_slots).min(total_slots);
    let end_s = total_slots as f64 * slot_len_s;
    let airtime_s = radio.packet_airtime_s();
    let bits = 8.0 * f64::from(radio.packet_length_bytes);

    let measured_by_id = corridor.measured();
    let mut win = Window {
        start_slot: warmup_slots,
        measured: order.iter().map(|&v| measured_by_id[v]).collect(),
        attempts: 0,
        successes: 0,
        delivered: vec![0; n],
        heard: vec![0; n + 1],
        delays_ms: Vec::new(),
    };

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut queue: Vec<VecDeque<f64>> = vec![VecDeque::new(); n];
    let mut counters = vec![Counters::default(); n];
    let mut events = EventQueue::default();

    let period_s = match config.traffic {
        Traffic::Saturated => None,
        Traffic::Periodic { rate_hz } => Some(1.0 / rate_hz),
    };
    let mut phase = vec![0.0; n];
    let mut next_arrival = vec![0u64; n];

    if total_slots > 0 {
        match period_s {
            None => {
                for r in 0..n {
                    queue[r].push_back(0.0);
                    counters[r].generated += 1;
                    policy.on_backlogged(r, &mut rng);
                }
            }
            Some(p) => {
                for r in 0..n {
                    phase[r] = rng.gen_range(0.0..p);
                    if phase[r] < end_s {
                        events.schedule(phase[r], Event::Arrival(r));
                    }
                }
            }
        }
        events.schedule(0.0, Event::Slot(0));
    }

    let mut tx: Vec<usize> = Vec::new();
    let mut sent = vec![false; n];
    let mut by_channel: Vec<Vec<usize>> = vec![Vec::new(); channels];

    while let Some((t, event)) = events.pop() {
        match event {
            Event::Arrival(r) => {
                counters[r].generated += 1;
                if queue[r].len() >= config.queue_limit {
                    counters[r].overflow_dropped += 1;
                } else {
                    queue[r].push_back(t);
                    if queue[r].len() == 1 {
                        policy.on_backlogged(r, &mut rng);
                    }
                }
                next_arrival[r] += 1;
                if let Some(p) = period_s {
                    let next = phase[r] + next_arrival[r] as f64 * p;
                    if next < end_s {
                        events.schedule(next, Event::Arrival(r));
                    }
                }
            }
            Event::Slot(k) => {
                let t_end = (k + 1) as f64 * slot_len_s;
                tx.clear();
                match &policy {
                    Policy::Tdma { by_slot, .. } => {
                        let s = (k % frame_slots) as usize;
                        tx.extend(by_slot[s].iter().copied().filter(|&r| !queue[r].is_empty()));
                    }
                    Policy::Contention { counter, .. } => {
                        tx.extend((0..n).filter(|&r| !queue[r].is_empty() && counter[r] == 0));
                    }
                }
                for list in &mut by_channel {
                    list.clear();
                }
                for &r in &tx {
                    by_channel[policy.channel(r, channels)].push(r);
                }

                let in_window = k >= win.start_slot;
                for list in &by_channel {
                    for (i, &r) in list.iter().enumerate() {
                        let left = (i > 0 && list[i - 1] >= graph.two_hop_lo(r)).then(|| list[i - 1]);
                        let right = list
                            .get(i + 1)
                            .copied()
                            .filter(|&s| s <= graph.two_hop_hi(r));
                        let rival = left.or(right);
                        if strict {
                            if let Some(b) = rival {
                                return Err(Error::TdmaCollision {
                                    time_s: k as f64 * slot_len_s,
                                    a: order[r],
                                    b: order[b],
                                });
                            }
                        }
                        let generated_at = queue[r].pop_front().expect("transmitter is backlogged");
                        sent[r] = true;
                        let ok = rival.is_none();
                        if ok {
                            counters[r].delivered += 1;
                        } else {
                            counters[r].collided += 1;
                        }
                        if in_window {
                            if ok {
                                win.heard[graph.lo(r)] += 1;
                                win.heard[graph.hi(r) + 1] -= 1;
                            }
                            if win.measured[r] {
                                win.attempts += 1;
                                if ok {
                                    win.successes += 1;
                                    win.delivered[r] += 1;
                                    win.delays_ms.push((t_end - generated_at) * 1000.0);
                                }
                            }
                        }
                        if period_s.is_none() {
                            queue[r].push_back(t_end);
                            counters[r].generated += 1;
                        }
                    }
                }

                if let Policy::Contention { window, counter } = &mut policy {
                    for r in 0..n {
                        if sent[r] {
                            if !queue[r].is_empty() {
                                counter[r] = rng.gen_range(0..*window);
                            }
                        } else if !queue[r].is_empty() && counter[r] > 0 {
                            let list = &by_channel[r % channels];
                            let first = list.partition_point(|&s| s < graph.lo(r));
                            let busy = list.get(first).is_some_and(|&s| s <= graph.hi(r));
                            if !busy {
                                counter[r] -= 1;
                            }
                        }
                    }
                }
                for &r in &tx {
                    sent[r] = false;
                }

                if k + 1 < total_slots {
                    events.schedule(t_end, Event::Slot(k + 1));
                }
            }
        }
    }

    for r in 0..n {
        counters[r].queued = queue[r].len() as u64;
    }

    let window_slots = total_slots - warmup_slots;
    let window_s = window_slots as f64 * slot_len_s;
    let measured: Vec<usize> = (0..n).filter(|&r| win.measured[r]).collect();
    let (throughput, utilization) = if window_s > 0.0 && !measured.is_empty() {
        let mut heard = 0i64;
        let mut util_sum = 0.0;
        let mut heard_at = vec![0i64; n];
        for r in 0..n {
            heard += win.heard[r];
            heard_at[r] = heard;
        }
        let mut rate_sum = 0.0;
        for &r in &measured {
            rate_sum += win.delivered[r] as f64 * bits / window_s / 1e6;
            util_sum += heard_at[r] as f64 * airtime_s / (window_s * channels as f64);
        }
        let m = measured.len() as f64;
        (rate_sum / m, (util_sum / m).min(1.0))
    } else {
        (0.0, 0.0)
    };

    let mut per_vehicle = vec![Counters::default(); n];
    let mut total = Counters::default();
    for r in 0..n {
        per_vehicle[order[r]] = counters[r];
        total += counters[r];
    }

    Ok(SimOutcome {
        mac: kind,
        seed: config.seed,
        vehicles: n,
        measured_vehicles: measured.len(),
        channels: channels as u32,
        frame_slots,
        slot_duration_s: slot_len_s,
        total_slots,
        warmup_slots,
        duration_s: end_s,
        window_s,
        per_vehicle_throughput_mbps: throughput,
        delay: DelayStats::from_samples(&mut win.delays_ms),
        pdr: if win.attempts == 0 {
            1.0
        } else {
            win.successes as f64 / win.attempts as f64
        },
        utilization,
        transmissions: total.delivered + total.collided,
        collisions: total.collided,
        event_count: events.processed(),
        counters: total,
        per_vehicle,
    })
}
