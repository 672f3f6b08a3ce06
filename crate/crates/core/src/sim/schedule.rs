//! Spatial-reuse TDMA schedule for broadcast.
//!
//! A broadcast is received by every conflicting neighbour of the sender, so
//! a slot may be reused only by vehicles more than two conflict hops apart:
//! each vehicle's interference neighbourhood then carries at most one
//! transmission per slot. The schedule is a greedy colouring of the
//! two-hop conflict relation in position order. On a corridor this relation
//! is an interval graph, for which the position-order greedy colouring is
//! optimal: the frame length equals the largest two-hop clique, i.e. the
//! vehicles within `2·R·I` of each other, `(2RI/D + 1)·N` on a uniform road.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::graph::ConflictGraph;
use crate::error::{Error, Result};
use crate::model::RadioConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TdmaSchedule {
    /// Slot (colour) of each vehicle index.
    slots: Vec<usize>,
    colors: usize,
}

pub fn tdma_schedule(graph: &ConflictGraph) -> TdmaSchedule {
    let n = graph.node_count();
    let mut by_rank = vec![0usize; n];
    let mut in_window: Vec<usize> = Vec::new();
    let mut free: BTreeSet<usize> = BTreeSet::new();
    let mut window_start = 0;

    for r in 0..n {
        let start = graph.two_hop_lo(r);
        while window_start < start {
            let c = by_rank[window_start];
            in_window[c] -= 1;
            if in_window[c] == 0 {
                free.insert(c);
            }
            window_start += 1;
        }
        let c = free.pop_first().unwrap_or_else(|| {
            in_window.push(0);
            in_window.len() - 1
        });
        by_rank[r] = c;
        in_window[c] += 1;
    }

    let mut slots = vec![0; n];
    for (r, &v) in graph.order().iter().enumerate() {
        slots[v] = by_rank[r];
    }
    TdmaSchedule {
        slots,
        colors: in_window.len(),
    }
}

impl TdmaSchedule {
    /// Builds a schedule from an explicit slot assignment.
    pub fn from_slots(slots: Vec<usize>) -> Self {
        let colors = slots.iter().max().map_or(0, |m| m + 1);
        Self { slots, colors }
    }

    pub fn slot_of(&self, vehicle: usize) -> usize {
        self.slots[vehicle]
    }

    pub fn slots(&self) -> &[usize] {
        &self.slots
    }

    /// Distinct slots on a single channel.
    pub fn frame_length(&self) -> usize {
        self.colors
    }

    /// Slots per frame when colours are spread over `channels` channels.
    pub fn frame_slots(&self, channels: u32) -> usize {
        self.colors.div_ceil(channels.max(1) as usize)
    }

    /// Payload airtime stretched by the overhead factor `U`.
    pub fn slot_duration_s(radio: &RadioConfig) -> f64 {
        radio.packet_airtime_s() / radio.utilization
    }

    /// Checks that no two vehicles within two conflict hops share a slot
    /// (which also makes the colouring proper on the conflict graph).
    pub fn validate(&self, graph: &ConflictGraph) -> Result<()> {
        if self.slots.len() != graph.node_count() {
            return Err(Error::ScheduleMismatch {
                schedule: self.slots.len(),
                vehicles: graph.node_count(),
            });
        }
        let order = graph.order();
        for r in 0..order.len() {
            let a = order[r];
            for &b in &order[r + 1..=graph.two_hop_hi(r)] {
                if self.slots[a] == self.slots[b] {
                    return Err(Error::ImproperSchedule {
                        a,
                        b,
                        slot: self.slots[a],
                    });
                }
            }
        }
        Ok(())
    }

    /// Proper colouring of the conflict graph itself (one hop).
    pub fn is_proper(&self, graph: &ConflictGraph) -> bool {
        let order = graph.order();
        (0..order.len()).all(|r| {
            order[r + 1..=graph.hi(r)]
                .iter()
                .all(|&b| self.slots[order[r]] != self.slots[b])
        })
    }
}
