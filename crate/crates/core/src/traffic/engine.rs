use rand::SeedableRng;
use rand_distr::{Distribution, Exp};

use super::events::{EventKind, EventQueue};
use super::kpi::{measure_kpis, KpiPoint, KpiSeries};
use super::profile::{sample_arrival, Layer, TrafficProfile};
use super::SimRng;
use crate::network::{CellId, Point};
use crate::son::{Side, SplitEvent, SplitState};
use crate::units::fmt_sig9;
use crate::{Error, Result};

/// A cell as seen by the engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineCell {
    /// Identifier written to the outputs.
    pub label: CellId,
    /// Bandwidth-split pair and the side of the pair this cell is on.
    pub pair: Option<(usize, Side)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EngineConfig {
    pub duration_s: f64,
    pub kpi_window_s: f64,
    pub mean_volume_bits: f64,
    /// Split each pair's band by the proportional-fair rule.
    pub split_bandwidth: bool,
    pub record_events: bool,
    pub seed: u64,
}

/// Where a new flow lands and what it gets when alone on the full band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Placement {
    pub position: Point,
    /// Index into the engine's cell list.
    pub cell: usize,
    pub peak_rate_bps: f64,
}

/// Draws the position and serving cell of an arriving user.
///
/// Implementations must consume `rng` identically whatever the radio mode,
/// so that all modes see the same arrivals for a given seed.
pub trait Placer {
    fn place(&self, layer: Layer, rng: &mut SimRng) -> Result<Placement>;
}

/// An active elastic download.
#[derive(Debug, Clone, PartialEq)]
pub struct Flow {
    pub id: u64,
    pub layer: Layer,
    pub position: Point,
    pub cell: usize,
    pub arrival_time: f64,
    pub initial_volume: f64,
    pub remaining_volume: f64,
    pub peak_rate_bps: f64,
    pub rate_bps: f64,
    /// Integral of the service rate since arrival.
    pub served_bits: f64,
}

/// A completed flow.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowRecord {
    pub id: u64,
    pub layer: Layer,
    pub cell: CellId,
    pub arrival_s: f64,
    pub ftt_s: f64,
    pub volume_bits: f64,
    pub served_bits: f64,
}

impl FlowRecord {
    pub fn throughput_bps(&self) -> f64 {
        self.volume_bits / self.ftt_s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RunStats {
    pub arrivals: u64,
    pub departures: u64,
    pub active_at_end: usize,
    /// Time-average number of active flows over the run.
    pub mean_active: f64,
    pub duration_s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub kpis: KpiSeries,
    pub flows: Vec<FlowRecord>,
    pub events: Option<Vec<String>>,
    pub stats: RunStats,
}

const RNG_STREAMS: [u64; 2] = [0x756e69666f726d, 0x686f7473706f74];

/// Event-driven flow-level simulation of one run.
pub struct Simulation<'a, P: Placer> {
    cfg: EngineConfig,
    profile: &'a TrafficProfile,
    placer: &'a P,
    cells: Vec<EngineCell>,
    size_dist: Exp<f64>,
    rngs: [SimRng; 2],
    queue: EventQueue,
    now: f64,
    active: Vec<Flow>,
    counts: Vec<usize>,
    splits: Vec<SplitState>,
    generation: u64,
    next_flow_id: u64,
    busy_window: Vec<f64>,
    window_completions: Vec<(f64, f64)>,
    active_integral: f64,
    points: Vec<KpiPoint>,
    records: Vec<FlowRecord>,
    log: Option<Vec<String>>,
    arrivals: u64,
}

impl<'a, P: Placer> Simulation<'a, P> {
    pub fn new(cfg: EngineConfig, profile: &'a TrafficProfile, placer: &'a P, cells: Vec<EngineCell>) -> Result<Self> {
        if !(cfg.duration_s >= 0.0) || !cfg.duration_s.is_finite() {
            return Err(Error::Config(format!("duration {} must be >= 0", cfg.duration_s)));
        }
        if !(cfg.kpi_window_s > 0.0) {
            return Err(Error::Config(format!("KPI window {} must be positive", cfg.kpi_window_s)));
        }
        if !(cfg.mean_volume_bits > 0.0) {
            return Err(Error::Config("mean file size must be positive".into()));
        }
        let n_pairs = cells
            .iter()
            .filter_map(|c| c.pair.map(|p| p.0 + 1))
            .max()
            .unwrap_or(0);
        let mut rngs = RNG_STREAMS.map(|_| SimRng::seed_from_u64(cfg.seed));
        for (rng, stream) in rngs.iter_mut().zip(RNG_STREAMS) {
            rng.set_stream(stream);
        }
        let mut sim = Simulation {
            size_dist: Exp::new(1.0 / cfg.mean_volume_bits).expect("positive mean"),
            profile,
            placer,
            counts: vec![0; cells.len()],
            busy_window: vec![0.0; cells.len()],
            cells,
            rngs,
            queue: EventQueue::new(),
            now: 0.0,
            active: Vec::new(),
            splits: vec![SplitState::default(); n_pairs],
            generation: 0,
            next_flow_id: 0,
            window_completions: Vec::new(),
            active_integral: 0.0,
            points: Vec::new(),
            records: Vec::new(),
            log: cfg.record_events.then(Vec::new),
            arrivals: 0,
            cfg,
        };
        sim.schedule_initial();
        Ok(sim)
    }

    fn schedule_initial(&mut self) {
        let horizon = self.cfg.duration_s;
        for layer in Layer::ALL {
            self.schedule_arrival(layer, 0.0);
        }
        for t in self.profile.change_times(horizon) {
            self.queue.push(t, EventKind::ProfileChange);
        }
        let w = self.cfg.kpi_window_s;
        let n = (horizon / w + 1e-9).floor() as u64;
        for k in 1..=n {
            self.queue.push(k as f64 * w, EventKind::KpiSample);
        }
    }

    fn schedule_arrival(&mut self, layer: Layer, after: f64) {
        let rng = &mut self.rngs[layer.index()];
        if let Some(t) = sample_arrival(self.profile, rng, layer, after, self.cfg.duration_s) {
            self.queue.push(t, EventKind::Arrival(layer));
        }
    }

    pub fn now(&self) -> f64 {
        self.now
    }

    pub fn active_flows(&self) -> &[Flow] {
        &self.active
    }

    pub fn splits(&self) -> &[SplitState] {
        &self.splits
    }

    /// Processes the next event. Returns `false` once nothing is left to do
    /// before the end of the run.
    pub fn step(&mut self) -> Result<bool> {
        match self.queue.peek() {
            Some(ev) if ev.time <= self.cfg.duration_s => {}
            _ => return Ok(false),
        }
        let ev = self.queue.pop().expect("peeked");
        if let EventKind::Departure { generation, .. } = ev.kind {
            if generation != self.generation {
                return Ok(true);
            }
        }
        self.handle(ev.time, ev.kind).map_err(|e| e.at_time(ev.time))?;
        Ok(true)
    }

    fn handle(&mut self, time: f64, kind: EventKind) -> Result<()> {
        self.advance(time);
        match kind {
            EventKind::Arrival(layer) => {
                self.arrive(layer)?;
                self.schedule_arrival(layer, time);
                self.reschedule();
            }
            EventKind::Departure { flow, .. } => {
                self.depart(flow)?;
                self.reschedule();
            }
            EventKind::ProfileChange => {
                if let (Some(log), Some(step)) = (self.log.as_mut(), self.profile.step_at(time)) {
                    log.push(format!(
                        "{} profile uniform_rate={} hotspot_rate={}",
                        fmt_sig9(time),
                        fmt_sig9(step.uniform_rate),
                        fmt_sig9(step.hotspot_rate)
                    ));
                }
            }
            EventKind::KpiSample => self.sample(),
        }
        Ok(())
    }

    fn advance(&mut self, t: f64) {
        let dt = t - self.now;
        if dt > 0.0 {
            for f in &mut self.active {
                let served = f.rate_bps * dt;
                f.remaining_volume -= served;
                f.served_bits += served;
            }
            for (busy, &n) in self.busy_window.iter_mut().zip(&self.counts) {
                if n > 0 {
                    *busy += dt;
                }
            }
            self.active_integral += self.active.len() as f64 * dt;
        }
        self.now = t.max(self.now);
    }

    fn arrive(&mut self, layer: Layer) -> Result<()> {
        let rng = &mut self.rngs[layer.index()];
        let placement = self.placer.place(layer, rng)?;
        let volume = self.size_dist.sample(rng);
        if placement.cell >= self.cells.len() {
            return Err(Error::Logic(format!("placement into unknown cell {}", placement.cell)));
        }
        let id = self.next_flow_id;
        self.next_flow_id += 1;
        self.arrivals += 1;
        self.counts[placement.cell] += 1;
        self.update_split(placement.cell, SplitEvent::Arrival)?;
        if let Some(log) = self.log.as_mut() {
            log.push(format!(
                "{} arrival flow={} layer={} cell={} x={} y={} volume={} peak_rate={}",
                fmt_sig9(self.now),
                id,
                layer.as_str(),
                self.cells[placement.cell].label,
                fmt_sig9(placement.position.x),
                fmt_sig9(placement.position.y),
                fmt_sig9(volume),
                fmt_sig9(placement.peak_rate_bps)
            ));
        }
        self.active.push(Flow {
            id,
            layer,
            position: placement.position,
            cell: placement.cell,
            arrival_time: self.now,
            initial_volume: volume,
            remaining_volume: volume,
            peak_rate_bps: placement.peak_rate_bps,
            rate_bps: 0.0,
            served_bits: 0.0,
        });
        Ok(())
    }

    fn depart(&mut self, flow_id: u64) -> Result<()> {
        let k = self
            .active
            .iter()
            .position(|f| f.id == flow_id)
            .ok_or_else(|| Error::Logic(format!("departure for unknown flow {flow_id}")))?;
        let f = self.active.remove(k);
        self.counts[f.cell] = self.counts[f.cell]
            .checked_sub(1)
            .ok_or_else(|| Error::Logic(format!("departure from empty cell {}", f.cell)))?;
        self.update_split(f.cell, SplitEvent::Departure)?;
        let ftt = self.now - f.arrival_time;
        let label = self.cells[f.cell].label;
        if let Some(log) = self.log.as_mut() {
            log.push(format!(
                "{} departure flow={} cell={} ftt={}",
                fmt_sig9(self.now),
                f.id,
                label,
                fmt_sig9(ftt)
            ));
        }
        self.window_completions.push((f.initial_volume, ftt));
        self.records.push(FlowRecord {
            id: f.id,
            layer: f.layer,
            cell: label,
            arrival_s: f.arrival_time,
            ftt_s: ftt,
            volume_bits: f.initial_volume,
            served_bits: f.served_bits,
        });
        Ok(())
    }

    fn update_split(&mut self, cell: usize, event: SplitEvent) -> Result<()> {
        if !self.cfg.split_bandwidth {
            return Ok(());
        }
        if let Some((pair, side)) = self.cells[cell].pair {
            self.splits[pair] = self.splits[pair].on_event(event, side)?;
        }
        Ok(())
    }

    fn share(&self, cell: usize) -> f64 {
        match (self.cfg.split_bandwidth, self.cells[cell].pair) {
            (true, Some((pair, side))) => self.splits[pair].share(side),
            _ => 1.0,
        }
    }

    /// Recomputes every round-robin rate and schedules the next departure.
    fn reschedule(&mut self) {
        let shares: Vec<f64> = (0..self.cells.len())
            .map(|c| if self.counts[c] > 0 { self.share(c) / self.counts[c] as f64 } else { 0.0 })
            .collect();
        let mut next: Option<(f64, u64)> = None;
        for f in &mut self.active {
            f.rate_bps = f.peak_rate_bps * shares[f.cell];
            if f.rate_bps > 0.0 {
                let t = self.now + f.remaining_volume.max(0.0) / f.rate_bps;
                if next.map_or(true, |(best, _)| t < best) {
                    next = Some((t, f.id));
                }
            }
        }
        self.generation += 1;
        if let Some((t, flow)) = next {
            self.queue.push(
                t,
                EventKind::Departure {
                    flow,
                    generation: self.generation,
                },
            );
        }
    }

    fn sample(&mut self) {
        let mut point = measure_kpis(
            self.now,
            &self.window_completions,
            &self.busy_window,
            self.cfg.kpi_window_s,
        );
        point.delta = self
            .splits
            .iter()
            .map(|s| self.cfg.split_bandwidth.then_some(s.delta))
            .collect();
        self.points.push(point);
        self.window_completions.clear();
        self.busy_window.iter_mut().for_each(|b| *b = 0.0);
    }

    /// Runs to the end of the configured duration.
    pub fn run(mut self) -> Result<RunOutput> {
        while self.step()? {}
        self.advance(self.cfg.duration_s);
        let duration = self.cfg.duration_s;
        let stats = RunStats {
            arrivals: self.arrivals,
            departures: self.records.len() as u64,
            active_at_end: self.active.len(),
            mean_active: if duration > 0.0 { self.active_integral / duration } else { 0.0 },
            duration_s: duration,
        };
        Ok(RunOutput {
            kpis: KpiSeries {
                window_s: self.cfg.kpi_window_s,
                cells: self.cells.iter().map(|c| c.label).collect(),
                pairs: self.splits.len(),
                points: self.points,
            },
            flows: self.records,
            events: self.log,
            stats,
        })
    }
}
