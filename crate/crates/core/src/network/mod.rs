//! Hexagonal trisector macro network with virtual sectors, link attenuations
//! and serving-cell maps.
//!
//! Layout coordinates are meters in a horizontal plane with the measured
//! site at the origin. Azimuths are counter-clockwise from +x.

mod deployment;
mod layout;
mod macro_antenna;
mod map;

pub use deployment::{
    attenuation, Antenna, ArrayAntenna, Cell, CellId, CellKind, Deployment, LinkTable, NetworkParams,
    VisPair, VisSpec,
};
pub use layout::{build_layout, Point, Site};
pub use macro_antenna::{macro_antenna_gain_db, pathloss_db, MacroAntenna};
pub use map::{serving_cell, serving_map, BBox, ServingMap};
