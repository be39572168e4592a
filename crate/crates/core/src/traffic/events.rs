use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::profile::Layer;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    Arrival(Layer),
    /// Tentative departure; stale when `generation` is behind the engine.
    Departure { flow: u64, generation: u64 },
    ProfileChange,
    KpiSample,
}

impl EventKind {
    fn rank(&self) -> u8 {
        match self {
            EventKind::Arrival(_) => 0,
            EventKind::Departure { .. } => 1,
            EventKind::ProfileChange => 2,
            EventKind::KpiSample => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub time: f64,
    pub kind: EventKind,
    /// Insertion sequence number, the last tie-breaker.
    pub id: u64,
}

impl Eq for Event {}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> Ordering {
        self.time
            .total_cmp(&other.time)
            .then(self.kind.rank().cmp(&other.kind.rank()))
            .then(self.id.cmp(&other.id))
    }
}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Min-queue of pending events: earliest time first, then arrival <
/// departure < profile change < KPI sample, then insertion order.
#[derive(Debug, Default)]
pub struct EventQueue {
    heap: BinaryHeap<std::cmp::Reverse<Event>>,
    next_id: u64,
}

impl EventQueue {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, time: f64, kind: EventKind) {
        let id = self.next_id;
        self.next_id += 1;
        self.heap.push(std::cmp::Reverse(Event { time, kind, id }));
    }

    pub fn pop(&mut self) -> Option<Event> {
        self.heap.pop().map(|r| r.0)
    }

    pub fn peek(&self) -> Option<&Event> {
        self.heap.peek().map(|r| &r.0)
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_by_time_then_kind_then_id() {
        let mut q = EventQueue::new();
        q.push(2.0, EventKind::KpiSample);
        q.push(1.0, EventKind::KpiSample);
        q.push(1.0, EventKind::ProfileChange);
        q.push(1.0, EventKind::Departure { flow: 0, generation: 0 });
        q.push(1.0, EventKind::Arrival(Layer::Hotspot));
        q.push(1.0, EventKind::Arrival(Layer::Uniform));
        let order: Vec<_> = std::iter::from_fn(|| q.pop()).map(|e| (e.time, e.kind)).collect();
        assert_eq!(
            order,
            vec![
                (1.0, EventKind::Arrival(Layer::Hotspot)),
                (1.0, EventKind::Arrival(Layer::Uniform)),
                (1.0, EventKind::Departure { flow: 0, generation: 0 }),
                (1.0, EventKind::ProfileChange),
                (1.0, EventKind::KpiSample),
                (2.0, EventKind::KpiSample),
            ]
        );
    }
}
