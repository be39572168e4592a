use rand::Rng;

use super::engine::{EngineCell, EngineConfig, Placement, Placer, RunOutput, Simulation};
use super::profile::{Layer, ProfileStep, TrafficProfile};
use super::SimRng;
use crate::config::{HotspotScope, ScenarioConfig};
use crate::network::{serving_cell, serving_map, BBox, CellId, Deployment, Point, ServingMap};
use crate::radio::{per_hz_powers, rate_bps, serving_candidates, sinr, LinkBudget, RadioMode};
use crate::son::Side;
use crate::{Error, Result};

/// Rejection-sampling attempts before a layer's region is declared empty.
const MAX_PLACEMENT_ATTEMPTS: usize = 100_000;

/// A built scenario: deployment, link budget and traffic profile.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub deployment: Deployment,
    pub budget: LinkBudget,
    pub profile: TrafficProfile,
}

impl Scenario {
    pub fn build(config: &ScenarioConfig) -> Result<Self> {
        config.validate()?;
        let deployment = Deployment::build(
            &config.network,
            &config.macro_antenna,
            &config.array.design()?,
            &config.vis,
            &config.array.grid()?,
        )?;
        let mut steps = config.traffic.profile.clone();
        if config.traffic.hotspot_scope == HotspotScope::PerVis {
            let n = deployment.pairs.len() as f64;
            steps.iter_mut().for_each(|s: &mut ProfileStep| s.hotspot_rate *= n);
        }
        Ok(Scenario {
            budget: LinkBudget::from_deployment(&deployment),
            profile: TrafficProfile::new(steps)?,
            deployment,
            config: config.clone(),
        })
    }

    /// Engine cells: the measured macros, then the virtual sectors.
    pub fn engine_cells(&self) -> Vec<EngineCell> {
        let dep = &self.deployment;
        dep.measured_cells()
            .into_iter()
            .map(|id| EngineCell {
                label: id,
                pair: dep.pair_of(id).map(|p| {
                    let side = if dep.pairs[p].vis_cell == id { Side::Vis } else { Side::Macro };
                    (p, side)
                }),
            })
            .collect()
    }

    pub fn placer(&self, mode: RadioMode) -> ScenarioPlacer<'_> {
        ScenarioPlacer::new(self, mode)
    }

    pub fn engine_config(&self, mode: RadioMode, seed: u64) -> EngineConfig {
        EngineConfig {
            duration_s: self.config.duration_s,
            kpi_window_s: self.config.traffic.kpi_window_s,
            mean_volume_bits: self.config.traffic.mean_file_bits,
            split_bandwidth: mode == RadioMode::BandwidthSharing,
            record_events: self.config.write_event_log,
            seed,
        }
    }

    pub fn run(&self, mode: RadioMode, seed: u64) -> Result<RunOutput> {
        let placer = self.placer(mode);
        Simulation::new(self.engine_config(mode, seed), &self.profile, &placer, self.engine_cells())?.run()
    }

    /// Best server over all cells with virtual sectors transmitting.
    pub fn serving_map(&self, resolution_m: f64) -> Result<ServingMap> {
        let dep = &self.deployment;
        let powers = per_hz_powers(dep, &self.budget, RadioMode::BandwidthSharing);
        let all: Vec<CellId> = dep.cells.iter().map(|c| c.id).collect();
        serving_map(dep, &powers, &all, &BBox::centered(self.config.map.half_width_m), resolution_m)
    }
}

/// Builds the scenario from `config` and runs it once.
pub fn run_scenario(config: &ScenarioConfig, mode: RadioMode, seed: u64) -> Result<RunOutput> {
    Scenario::build(config)?.run(mode, seed)
}

/// Places users of the measured site.
///
/// Uniform-layer users are drawn over area A, the region whose best macro
/// (virtual sectors off) is a measured macro. Hotspot users are drawn over
/// the coverage area of a virtual sector: the region whose best server,
/// virtual sectors on, is that sector. With a per-sector hotspot rate the
/// sector is picked uniformly first; otherwise any virtual sector qualifies.
/// All regions are independent of the radio mode, so the random stream is
/// consumed identically in every mode.
pub struct ScenarioPlacer<'a> {
    scenario: &'a Scenario,
    mode: RadioMode,
    bbox: BBox,
    baseline_powers: Vec<f64>,
    hotspot_powers: Vec<f64>,
    all_macros: Vec<CellId>,
    all_cells: Vec<CellId>,
    mode_powers: Vec<f64>,
    candidates: Vec<CellId>,
    engine_index: Vec<Option<usize>>,
}

impl<'a> ScenarioPlacer<'a> {
    pub fn new(scenario: &'a Scenario, mode: RadioMode) -> Self {
        let dep = &scenario.deployment;
        let mut engine_index = vec![None; dep.len()];
        for (k, id) in dep.measured_cells().into_iter().enumerate() {
            engine_index[id.0] = Some(k);
        }
        ScenarioPlacer {
            scenario,
            mode,
            bbox: BBox::centered(scenario.config.traffic.sampling_half_width_m),
            baseline_powers: per_hz_powers(dep, &scenario.budget, RadioMode::Baseline),
            hotspot_powers: per_hz_powers(dep, &scenario.budget, RadioMode::BandwidthSharing),
            all_macros: dep.cells.iter().filter(|c| !c.is_virtual()).map(|c| c.id).collect(),
            all_cells: dep.cells.iter().map(|c| c.id).collect(),
            mode_powers: per_hz_powers(dep, &scenario.budget, mode),
            candidates: serving_candidates(dep, mode),
            engine_index,
        }
    }

    /// Whether `links` belong to the arrival region of `layer`.
    ///
    /// `target` restricts the hotspot region to one virtual sector.
    pub fn in_region(&self, layer: Layer, links: &[f64], target: Option<CellId>) -> Result<bool> {
        let dep = &self.scenario.deployment;
        Ok(match layer {
            Layer::Uniform => {
                let best = serving_cell(links, &self.baseline_powers, &self.all_macros)?;
                dep.is_measured(best)
            }
            Layer::Hotspot => {
                if dep.pairs.is_empty() {
                    return Ok(false);
                }
                let best = serving_cell(links, &self.hotspot_powers, &self.all_cells)?;
                match target {
                    Some(t) => best == t,
                    None => dep.cell(best).is_virtual(),
                }
            }
        })
    }

    /// Serving cell and full-band peak rate of a user with `links`.
    pub fn serve(&self, links: &[f64]) -> Result<(CellId, f64)> {
        let dep = &self.scenario.deployment;
        let cell = serving_cell(links, &self.mode_powers, &self.candidates)?;
        let s = sinr(self.mode, links, cell, dep, &self.scenario.budget)?;
        Ok((cell, rate_bps(s, dep.cell(cell).bandwidth_hz)))
    }
}

impl Placer for ScenarioPlacer<'_> {
    fn place(&self, layer: Layer, rng: &mut SimRng) -> Result<Placement> {
        let dep = &self.scenario.deployment;
        let target = match (layer, self.scenario.config.traffic.hotspot_scope) {
            (Layer::Hotspot, HotspotScope::PerVis) if !dep.pairs.is_empty() => {
                Some(dep.pairs[rng.random_range(0..dep.pairs.len())].vis_cell)
            }
            _ => None,
        };
        for _ in 0..MAX_PLACEMENT_ATTEMPTS {
            let position = Point::new(
                rng.random_range(self.bbox.min.x..self.bbox.max.x),
                rng.random_range(self.bbox.min.y..self.bbox.max.y),
            );
            let links = dep.links(position)?;
            if !self.in_region(layer, &links, target)? {
                continue;
            }
            let (cell, peak_rate_bps) = self.serve(&links)?;
            let index = self.engine_index[cell.0]
                .ok_or_else(|| Error::Logic(format!("user served by unmeasured cell {cell}")))?;
            return Ok(Placement {
                position,
                cell: index,
                peak_rate_bps,
            });
        }
        Err(Error::Config(format!(
            "no {} arrival region found in the sampling square",
            layer.as_str()
        )))
    }
}
