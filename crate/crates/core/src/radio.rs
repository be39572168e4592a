//! Per-user SINR under the three resource-allocation modes and the
//! capped-Shannon link model.
//!
//! All powers are per Hz. A macro sector transmits `P0 / B` per Hz; how that
//! changes with virtual sectors depends on the mode:
//!
//! * baseline: virtual sectors are off.
//! * reuse one: a macro with a virtual sector and the virtual sector each
//!   transmit `P0 / 2B` over the whole band and interfere with each other.
//! * bandwidth sharing: macro and virtual sector use disjoint sub-bands at
//!   unchanged power density `P0 / B`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::network::{serving_cell, CellId, CellKind, Deployment};
use crate::units::dbm_to_mw;
use crate::{Error, Result};

/// Spectral efficiency ceiling of the link model, bit/s/Hz.
pub const MAX_SPECTRAL_EFFICIENCY: f64 = 4.4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RadioMode {
    #[serde(rename = "baseline")]
    Baseline,
    #[serde(rename = "reuse1")]
    ReuseOne,
    #[serde(rename = "sharing")]
    BandwidthSharing,
}

impl RadioMode {
    pub const ALL: [RadioMode; 3] = [RadioMode::Baseline, RadioMode::ReuseOne, RadioMode::BandwidthSharing];

    pub fn as_str(&self) -> &'static str {
        match self {
            RadioMode::Baseline => "baseline",
            RadioMode::ReuseOne => "reuse1",
            RadioMode::BandwidthSharing => "sharing",
        }
    }
}

impl fmt::Display for RadioMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RadioMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "baseline" => Ok(RadioMode::Baseline),
            "reuse1" | "reuse_one" => Ok(RadioMode::ReuseOne),
            "sharing" | "bandwidth_sharing" => Ok(RadioMode::BandwidthSharing),
            other => Err(Error::invalid(format!("unknown mode '{other}'"))),
        }
    }
}

/// Noise and per-Hz transmit power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub noise_mw_per_hz: f64,
    /// `P0 / B` of a macro sector, mW/Hz.
    pub macro_mw_per_hz: f64,
}

impl LinkBudget {
    pub fn from_deployment(dep: &Deployment) -> Self {
        LinkBudget {
            noise_mw_per_hz: dbm_to_mw(dep.params.noise_dbm_per_hz),
            macro_mw_per_hz: dbm_to_mw(dep.params.tx_power_dbm) / dep.params.bandwidth_hz,
        }
    }
}

/// Per-Hz transmit power of every cell in `mode`, indexed by cell id.
pub fn per_hz_powers(dep: &Deployment, budget: &LinkBudget, mode: RadioMode) -> Vec<f64> {
    let p0 = budget.macro_mw_per_hz;
    dep.cells
        .iter()
        .map(|c| match (mode, c.kind) {
            (RadioMode::Baseline, CellKind::Virtual { .. }) => 0.0,
            (RadioMode::Baseline, CellKind::Macro) => p0,
            (RadioMode::ReuseOne, CellKind::Virtual { .. }) => p0 / 2.0,
            (RadioMode::ReuseOne, CellKind::Macro) => {
                if dep.vis_of(c.id).is_some() {
                    p0 / 2.0
                } else {
                    p0
                }
            }
            (RadioMode::BandwidthSharing, _) => p0,
        })
        .collect()
}

/// Cells that may serve traffic of the measured site in `mode`.
pub fn serving_candidates(dep: &Deployment, mode: RadioMode) -> Vec<CellId> {
    match mode {
        RadioMode::Baseline => dep.measured_macros().to_vec(),
        _ => dep.measured_cells(),
    }
}

/// Serving cell of a user of the measured site.
pub fn serving_for(links: &[f64], dep: &Deployment, budget: &LinkBudget, mode: RadioMode) -> Result<CellId> {
    serving_cell(links, &per_hz_powers(dep, budget, mode), &serving_candidates(dep, mode))
}

fn require_macro(dep: &Deployment, serving: CellId, what: &str) -> Result<()> {
    if dep.cell(serving).is_virtual() {
        return Err(Error::invalid(format!("{what}: cell {serving} is a virtual sector")));
    }
    Ok(())
}

/// SINR with no virtual sectors: `P h_s / (N0 + Σ_{c≠s} P h_c)` over macros.
pub fn sinr_baseline(links: &[f64], serving: CellId, dep: &Deployment, budget: &LinkBudget) -> Result<f64> {
    require_macro(dep, serving, "baseline")?;
    let p = budget.macro_mw_per_hz;
    let interference: f64 = dep
        .cells
        .iter()
        .filter(|c| c.id != serving && !c.is_virtual())
        .map(|c| p * links[c.id.0])
        .sum();
    Ok(p * links[serving.0] / (budget.noise_mw_per_hz + interference))
}

/// SINR with full bandwidth reuse and the macro power split with its
/// virtual sector. The sibling cell appears as interference.
pub fn sinr_reuse_one(links: &[f64], serving: CellId, dep: &Deployment, budget: &LinkBudget) -> Result<f64> {
    let powers = per_hz_powers(dep, budget, RadioMode::ReuseOne);
    let interference: f64 = dep
        .cells
        .iter()
        .filter(|c| c.id != serving)
        .map(|c| powers[c.id.0] * links[c.id.0])
        .sum();
    Ok(powers[serving.0] * links[serving.0] / (budget.noise_mw_per_hz + interference))
}

/// SINR with disjoint macro / virtual-sector sub-bands.
///
/// Macro users see exactly the baseline SINR. Virtual-sector users see no
/// term from their parent macro; every other sector contributes one
/// full-band transmitter at `P0 / B` (its macro).
pub fn sinr_sharing(links: &[f64], serving: CellId, dep: &Deployment, budget: &LinkBudget) -> Result<f64> {
    match dep.cell(serving).kind {
        CellKind::Macro => sinr_baseline(links, serving, dep, budget),
        CellKind::Virtual { parent } => {
            let p = budget.macro_mw_per_hz;
            let interference: f64 = dep
                .cells
                .iter()
                .filter(|c| c.id != parent && !c.is_virtual())
                .map(|c| p * links[c.id.0])
                .sum();
            Ok(p * links[serving.0] / (budget.noise_mw_per_hz + interference))
        }
    }
}

pub fn sinr(mode: RadioMode, links: &[f64], serving: CellId, dep: &Deployment, budget: &LinkBudget) -> Result<f64> {
    match mode {
        RadioMode::Baseline => sinr_baseline(links, serving, dep, budget),
        RadioMode::ReuseOne => sinr_reuse_one(links, serving, dep, budget),
        RadioMode::BandwidthSharing => sinr_sharing(links, serving, dep, budget),
    }
}

/// `B min(4.4, log2(1 + SINR))`: the peak rate of a user alone in a cell
/// with `bandwidth_hz`.
pub fn rate_bps(sinr: f64, bandwidth_hz: f64) -> f64 {
    bandwidth_hz * (1.0 + sinr).log2().min(MAX_SPECTRAL_EFFICIENCY)
}
