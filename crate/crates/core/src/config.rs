//! Scenario files.
//!
//! A scenario is a TOML document. Every section except `[traffic]` and
//! `[array]` has defaults; the shipped reference scenario spells them all
//! out with comments.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::antenna::{ArrayDesign, IntegrationGrid};
use crate::network::{MacroAntenna, NetworkParams, VisSpec};
use crate::radio::RadioMode;
use crate::traffic::{ProfileStep, TrafficProfile};
use crate::{Error, Result};

/// Text of the reference scenario shipped with the crate.
pub const PAPER_SCENARIO: &str = include_str!("../../../scenarios/paper.scenario");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrayConfig {
    pub n_x: usize,
    pub n_z: usize,
    pub dx_over_lambda: f64,
    pub dz_over_lambda: f64,
    pub taper_ratio_x: f64,
    pub taper_ratio_z: f64,
    #[serde(default = "default_integration_step")]
    pub integration_step_deg: f64,
}

fn default_integration_step() -> f64 {
    0.25
}

impl ArrayConfig {
    pub fn design(&self) -> Result<ArrayDesign> {
        ArrayDesign::new(
            self.n_x,
            self.n_z,
            self.dx_over_lambda,
            self.dz_over_lambda,
            self.taper_ratio_x,
            self.taper_ratio_z,
        )
    }

    pub fn grid(&self) -> Result<IntegrationGrid> {
        IntegrationGrid::new(self.integration_step_deg)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrafficConfig {
    #[serde(default = "default_file_bits")]
    pub mean_file_bits: f64,
    #[serde(default = "default_kpi_window")]
    pub kpi_window_s: f64,
    /// Half width of the square, centred on the measured site, in which
    /// arrival positions are drawn by rejection.
    #[serde(default = "default_sampling_half_width")]
    pub sampling_half_width_m: f64,
    #[serde(default)]
    pub hotspot_scope: HotspotScope,
    pub profile: Vec<ProfileStep>,
}

/// What area a hotspot arrival rate refers to.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HotspotScope {
    /// Each virtual sector's coverage area receives the full rate.
    #[default]
    PerVis,
    /// The rate is spread uniformly over the union of all coverage areas.
    Union,
}

fn default_file_bits() -> f64 {
    3e6
}

fn default_kpi_window() -> f64 {
    10.0
}

fn default_sampling_half_width() -> f64 {
    500.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MapConfig {
    pub half_width_m: f64,
    pub resolution_m: f64,
}

impl Default for MapConfig {
    fn default() -> Self {
        MapConfig {
            half_width_m: 1250.0,
            resolution_m: 10.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub seed: u64,
    pub duration_s: f64,
    pub modes: Vec<RadioMode>,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub write_event_log: bool,
    #[serde(default)]
    pub network: NetworkParams,
    #[serde(default)]
    pub macro_antenna: MacroAntenna,
    pub array: ArrayConfig,
    #[serde(default)]
    pub vis: Vec<VisSpec>,
    pub traffic: TrafficConfig,
    #[serde(default)]
    pub map: MapConfig,
}

impl ScenarioConfig {
    /// Parses and validates a scenario document.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// The reference scenario.
    pub fn paper() -> Self {
        Self::from_toml_str(PAPER_SCENARIO).expect("shipped scenario is valid")
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn profile(&self) -> Result<TrafficProfile> {
        TrafficProfile::new(self.traffic.profile.clone())
    }

    pub fn validate(&self) -> Result<()> {
        if self.modes.is_empty() {
            return Err(Error::Config("mode list is empty".into()));
        }
        if !(self.duration_s >= 0.0) || !self.duration_s.is_finite() {
            return Err(Error::Config(format!("duration_s = {} must be >= 0", self.duration_s)));
        }
        self.network.validate()?;
        self.array
            .design()
            .map_err(|e| Error::Config(format!("array: {e}")))?;
        self.array
            .grid()
            .map_err(|e| Error::Config(format!("array: {e}")))?;
        for (i, v) in self.vis.iter().enumerate() {
            if v.parent_sector >= 3 {
                return Err(Error::Config(format!(
                    "vis[{i}]: parent sector {} does not exist (sectors 0..2)",
                    v.parent_sector
                )));
            }
            if self.vis[..i].iter().any(|w| w.parent_sector == v.parent_sector) {
                return Err(Error::Config(format!(
                    "vis[{i}]: sector {} already has a virtual sector",
                    v.parent_sector
                )));
            }
        }
        let t = &self.traffic;
        for (name, v) in [
            ("mean_file_bits", t.mean_file_bits),
            ("kpi_window_s", t.kpi_window_s),
            ("sampling_half_width_m", t.sampling_half_width_m),
            ("map.half_width_m", self.map.half_width_m),
            ("map.resolution_m", self.map.resolution_m),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Config(format!("{name} = {v} must be positive")));
            }
        }
        self.profile()?;
        Ok(())
    }
}
