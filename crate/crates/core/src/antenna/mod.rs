//! Gain model of the virtual-sector antenna: a planar array of vertical
//! dipoles in front of a reflector, steered electronically.
//!
//! Angles follow the array frame: `theta` is measured from the +z axis
//! (zenith) and `phi` from the +y axis, which is the reflector boresight.
//! The pattern is only defined in the front half-space `|phi| <= pi/2`.

mod array;
mod design;
mod export;
mod pattern;

pub use array::{
    array_factor, element_gain, normalized_gain, reflector_factor, taper_weights, ArrayDesign,
    ArrayModel, Axis, Steering,
};
pub use design::{design_search, DesignCandidate, DesignSearchOutcome, SearchLattice, SteeringEnvelope};
pub use export::{write_cut_csv, write_grid_csv, Cut};
pub use pattern::{
    integrate_half_space, max_gain, max_gain_of, side_lobe_level, GainPattern, IntegrationGrid,
};
