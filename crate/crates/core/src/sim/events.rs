use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Event {
    /// Periodic packet generation at a vehicle (rank).
    Arrival(usize),
    /// Start of channel slot `k`.
    Slot(u64),
}

impl Event {
    /// Arrivals at the same instant as a slot boundary are queued first.
    fn priority(self) -> u8 {
        match self {
            Event::Arrival(_) => 0,
            Event::Slot(_) => 1,
        }
    }
}

#[derive(Debug)]
struct Scheduled {
    time: f64,
    priority: u8,
    seq: u64,
    event: Event,
}

impl PartialEq for Scheduled {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Scheduled {}

impl PartialOrd for Scheduled {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scheduled {
    fn cmp(&self, other: &Self) -> Ordering {
        self.time
            .total_cmp(&other.time)
            .then(self.priority.cmp(&other.priority))
            .then(self.seq.cmp(&other.seq))
    }
}

/// Time-ordered event queue; ties resolve by priority then insertion order.
#[derive(Debug, Default)]
pub(crate) struct EventQueue {
    heap: BinaryHeap<Reverse<Scheduled>>,
    next_seq: u64,
    popped: u64,
}

impl EventQueue {
    pub fn schedule(&mut self, time: f64, event: Event) {
        let seq = self.next_seq;
        self.next_seq += 1;
        self.heap.push(Reverse(Scheduled {
            time,
            priority: event.priority(),
            seq,
            event,
        }));
    }

    pub fn pop(&mut self) -> Option<(f64, Event)> {
        let Reverse(s) = self.heap.pop()?;
        self.popped += 1;
        Some((s.time, s.event))
    }

    pub fn processed(&self) -> u64 {
        self.popped
    }
}
