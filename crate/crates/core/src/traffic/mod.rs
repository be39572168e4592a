//! Flow-level traffic simulation.
//!
//! Users arrive as two superposed Poisson layers, download an exponentially
//! sized file at their round-robin share of the serving cell and leave. Rates
//! are held constant between events and recomputed at each event.

mod engine;
mod events;
mod kpi;
mod output;
mod profile;
mod scenario;

pub use engine::{EngineCell, EngineConfig, Flow, FlowRecord, Placement, Placer, RunOutput, RunStats, Simulation};
pub use events::{Event, EventKind, EventQueue};
pub use kpi::{measure_kpis, nearest_rank, KpiPoint, KpiSeries, ModeSummary};
pub use output::{write_events, write_flows_csv, write_kpis_csv, write_summary_csv};
pub use profile::{sample_arrival, Layer, ProfileStep, TrafficProfile};
pub use scenario::{run_scenario, Scenario, ScenarioPlacer};

/// Random number generator used by the simulator.
pub type SimRng = rand_chacha::ChaCha8Rng;
