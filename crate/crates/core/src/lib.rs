//! Virtual-sector cellular downlink simulator.
//!
//! The crate is organised bottom-up:
//!
//! * [`antenna`]: steerable planar-array gain model, pattern integration,
//!   side-lobe measurement and the spacing/taper design search.
//! * [`network`]: hexagonal trisector layout, macro and virtual cells,
//!   link attenuations and serving-cell maps.
//! * [`radio`]: per-user SINR under the three resource-allocation modes and
//!   the capped-Shannon link model.
//! * [`son`]: proportional-fair bandwidth split between a macro sector and
//!   its virtual sector.
//! * [`traffic`]: event-driven flow-level engine with elastic downloads,
//!   round-robin sharing and windowed KPIs.
//! * [`config`]: the scenario file schema.

pub mod antenna;
pub mod config;
mod error;
pub mod network;
pub mod radio;
pub mod son;
pub mod traffic;
pub mod units;

pub use antenna::{ArrayDesign, GainPattern, Steering};
pub use config::ScenarioConfig;
pub use network::{Cell, CellId, CellKind, Deployment, LinkTable, Point, Site};
pub use radio::RadioMode;
pub use son::SplitState;
pub use traffic::{Flow, KpiSeries, TrafficProfile};

pub use error::{Error, Result};
