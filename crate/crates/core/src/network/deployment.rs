use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::layout::{build_layout, Point, Site};
use super::macro_antenna::{pathloss_db, MacroAntenna};
use crate::antenna::{ArrayDesign, ArrayModel, GainPattern, IntegrationGrid, Steering, SteeringEnvelope};
use crate::units::{db_to_linear, linear_to_db, wrap_angle};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CellId(pub usize);

impl std::fmt::Display for CellId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellKind {
    Macro,
    Virtual { parent: CellId },
}

/// Network-wide radio and geometry parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkParams {
    pub isd_m: f64,
    pub rings: usize,
    pub bs_height_m: f64,
    pub ue_height_m: f64,
    /// Rotation applied to all sector azimuths.
    pub sector_offset_deg: f64,
    /// Total transmit power of a macro sector (split with its ViS when the
    /// mode requires it).
    pub tx_power_dbm: f64,
    pub bandwidth_hz: f64,
    pub noise_dbm_per_hz: f64,
    /// Lower bound on the virtual-sector gain, including the back
    /// half-space where the reflector blocks radiation.
    pub vis_gain_floor_dbi: f64,
}

impl Default for NetworkParams {
    fn default() -> Self {
        NetworkParams {
            isd_m: 500.0,
            rings: 2,
            bs_height_m: 32.0,
            ue_height_m: 1.5,
            sector_offset_deg: 0.0,
            tx_power_dbm: 46.0,
            bandwidth_hz: 10e6,
            noise_dbm_per_hz: -174.0,
            vis_gain_floor_dbi: -30.0,
        }
    }
}

impl NetworkParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("isd_m", self.isd_m),
            ("bs_height_m", self.bs_height_m),
            ("bandwidth_hz", self.bandwidth_hz),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Config(format!("{name} = {v} must be positive")));
            }
        }
        if !(self.ue_height_m >= 0.0) {
            return Err(Error::Config("ue_height_m must be non-negative".into()));
        }
        Ok(())
    }
}

/// One virtual sector attached to a sector of the measured site.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VisSpec {
    /// Sector index (0, 1, 2) of the measured site.
    pub parent_sector: usize,
    /// Downward tilt from the horizon, degrees.
    pub vertical_tilt_deg: f64,
    /// Azimuth offset from the parent sector, degrees.
    pub horizontal_tilt_deg: f64,
}

#[derive(Debug, Clone)]
pub struct ArrayAntenna {
    pub model: ArrayModel,
    pub g0: f64,
    pub floor_dbi: f64,
}

impl ArrayAntenna {
    pub fn new(design: ArrayDesign, steering: Steering, grid: &IntegrationGrid, floor_dbi: f64) -> Result<Self> {
        let g0 = GainPattern::compute(&design, &steering, grid)?.g0;
        Ok(ArrayAntenna {
            model: ArrayModel::new(design, steering)?,
            g0,
            floor_dbi,
        })
    }

    /// Gain in dBi for array-frame angles.
    pub fn gain_dbi(&self, theta: f64, phi: f64) -> f64 {
        if phi.abs() > FRAC_PI_2 {
            return self.floor_dbi;
        }
        let g = self.g0 * self.model.gain(theta, phi).unwrap_or(0.0);
        if g > 0.0 {
            linear_to_db(g).max(self.floor_dbi)
        } else {
            self.floor_dbi
        }
    }
}

#[derive(Debug, Clone)]
pub enum Antenna {
    Macro(MacroAntenna),
    Array(ArrayAntenna),
}

/// A transmitter: macro sector or virtual sector.
#[derive(Debug, Clone)]
pub struct Cell {
    pub id: CellId,
    pub kind: CellKind,
    pub site: usize,
    pub position: Point,
    pub height_m: f64,
    pub azimuth_rad: f64,
    pub antenna: Antenna,
    pub tx_power_dbm: f64,
    pub bandwidth_hz: f64,
}

impl Cell {
    pub fn is_virtual(&self) -> bool {
        matches!(self.kind, CellKind::Virtual { .. })
    }
}

/// Linear attenuation `h` (pathloss and both antenna gains) from `cell` to a
/// user at `pos`. The receive antenna is isotropic.
pub fn attenuation(cell: &Cell, pos: Point, ue_height_m: f64) -> Result<f64> {
    let dx = pos.x - cell.position.x;
    let dy = pos.y - cell.position.y;
    let ground = dx.hypot(dy);
    let dh = cell.height_m - ue_height_m;
    let d3 = ground.hypot(dh);
    let pathloss = pathloss_db(d3 / 1000.0)?;
    let depression = dh.atan2(ground);
    // straight below the antenna the bearing is taken as boresight
    let bearing = if ground > 0.0 { dy.atan2(dx) } else { cell.azimuth_rad };
    let h_offset = wrap_angle(bearing - cell.azimuth_rad);
    let gain = match &cell.antenna {
        Antenna::Macro(m) => m.gain_db(h_offset, depression - m.downtilt_deg.to_radians()),
        Antenna::Array(a) => a.gain_dbi(FRAC_PI_2 + depression, h_offset),
    };
    Ok(db_to_linear(gain - pathloss))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VisPair {
    pub macro_cell: CellId,
    pub vis_cell: CellId,
}

/// The complete set of transmitters.
///
/// Macro cells come first (`3 * site + sector`), followed by the virtual
/// sectors in configuration order. The site at the origin is the measured
/// system; all other sites are interferers.
#[derive(Debug, Clone)]
pub struct Deployment {
    pub params: NetworkParams,
    pub sites: Vec<Site>,
    pub cells: Vec<Cell>,
    pub pairs: Vec<VisPair>,
}

impl Deployment {
    /// The steering range the virtual-sector array is designed for.
    pub fn verified_envelope() -> SteeringEnvelope {
        SteeringEnvelope::from_deg(120.0, 45.0)
    }

    pub fn build(
        params: &NetworkParams,
        macro_antenna: &MacroAntenna,
        design: &ArrayDesign,
        vis: &[VisSpec],
        grid: &IntegrationGrid,
    ) -> Result<Self> {
        params.validate()?;
        let sites = build_layout(params.isd_m, params.rings)?;
        let mut cells = Vec::with_capacity(3 * sites.len() + vis.len());
        for site in &sites {
            for (k, id) in site.sectors.iter().enumerate() {
                cells.push(Cell {
                    id: *id,
                    kind: CellKind::Macro,
                    site: site.id,
                    position: site.position,
                    height_m: params.bs_height_m,
                    azimuth_rad: wrap_angle((params.sector_offset_deg + 120.0 * k as f64).to_radians()),
                    antenna: Antenna::Macro(*macro_antenna),
                    tx_power_dbm: params.tx_power_dbm,
                    bandwidth_hz: params.bandwidth_hz,
                });
            }
        }

        let envelope = Self::verified_envelope();
        let mut pairs = Vec::with_capacity(vis.len());
        for spec in vis {
            if spec.parent_sector >= 3 {
                return Err(Error::Config(format!(
                    "virtual sector parent {} does not exist (sectors 0..2)",
                    spec.parent_sector
                )));
            }
            let parent = sites[0].sectors[spec.parent_sector];
            if pairs.iter().any(|p: &VisPair| p.macro_cell == parent) {
                return Err(Error::Config(format!(
                    "sector {} has more than one virtual sector",
                    spec.parent_sector
                )));
            }
            let steering = Steering::from_tilts_deg(spec.vertical_tilt_deg, spec.horizontal_tilt_deg)
                .map_err(|e| Error::Config(e.to_string()))?;
            if steering.theta_e > envelope.max_theta_e + 1e-12
                || steering.phi_e.abs() > envelope.max_abs_phi_e + 1e-12
            {
                return Err(Error::Config(format!(
                    "virtual sector tilt ({}°, {}°) is outside the verified steering envelope",
                    spec.vertical_tilt_deg, spec.horizontal_tilt_deg
                )));
            }
            let p = &cells[parent.0];
            let cell = Cell {
                id: CellId(cells.len()),
                kind: CellKind::Virtual { parent },
                site: p.site,
                position: p.position,
                height_m: p.height_m,
                azimuth_rad: p.azimuth_rad,
                antenna: Antenna::Array(ArrayAntenna::new(*design, steering, grid, params.vis_gain_floor_dbi)?),
                tx_power_dbm: p.tx_power_dbm,
                bandwidth_hz: params.bandwidth_hz,
            };
            pairs.push(VisPair {
                macro_cell: parent,
                vis_cell: cell.id,
            });
            cells.push(cell);
        }
        Ok(Deployment {
            params: params.clone(),
            sites,
            cells,
            pairs,
        })
    }

    pub fn cell(&self, id: CellId) -> &Cell {
        &self.cells[id.0]
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Macro sectors of the measured site.
    pub fn measured_macros(&self) -> [CellId; 3] {
        self.sites[0].sectors
    }

    /// Measured macros followed by the virtual sectors.
    pub fn measured_cells(&self) -> Vec<CellId> {
        let mut v = self.measured_macros().to_vec();
        v.extend(self.pairs.iter().map(|p| p.vis_cell));
        v
    }

    pub fn is_measured(&self, id: CellId) -> bool {
        self.cells[id.0].site == 0
    }

    pub fn pair_of(&self, id: CellId) -> Option<usize> {
        self.pairs
            .iter()
            .position(|p| p.macro_cell == id || p.vis_cell == id)
    }

    /// Virtual sector attached to a macro, if any.
    pub fn vis_of(&self, macro_cell: CellId) -> Option<CellId> {
        self.pairs
            .iter()
            .find(|p| p.macro_cell == macro_cell)
            .map(|p| p.vis_cell)
    }

    pub fn attenuation(&self, id: CellId, pos: Point) -> Result<f64> {
        attenuation(self.cell(id), pos, self.params.ue_height_m)
    }

    /// Attenuations from every cell to `pos`, indexed by cell id.
    pub fn links(&self, pos: Point) -> Result<Vec<f64>> {
        self.cells
            .iter()
            .map(|c| attenuation(c, pos, self.params.ue_height_m))
            .collect()
    }
}

/// Attenuations from every cell to a fixed set of positions.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkTable {
    pub positions: Vec<Point>,
    n_cells: usize,
    h: Vec<f64>,
}

impl LinkTable {
    pub fn compute(deployment: &Deployment, positions: Vec<Point>) -> Result<Self> {
        let rows: Vec<Vec<f64>> = positions
            .par_iter()
            .map(|p| deployment.links(*p))
            .collect::<Result<_>>()?;
        Ok(LinkTable {
            positions,
            n_cells: deployment.len(),
            h: rows.concat(),
        })
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.h[i * self.n_cells..(i + 1) * self.n_cells]
    }

    pub fn get(&self, cell: CellId, i: usize) -> f64 {
        self.h[i * self.n_cells + cell.0]
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}
