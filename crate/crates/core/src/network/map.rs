use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::deployment::{CellId, Deployment};
use super::layout::Point;
use crate::units::fmt_sig9;
use crate::{Error, Result};

/// Best server `argmax_c P_c h_c` over `candidates`; ties go to the lowest id.
///
/// `links` and `powers` are indexed by cell id.
pub fn serving_cell(links: &[f64], powers: &[f64], candidates: &[CellId]) -> Result<CellId> {
    let mut sorted = candidates.to_vec();
    sorted.sort();
    let mut best: Option<(CellId, f64)> = None;
    for c in sorted {
        let rx = powers[c.0] * links[c.0];
        if best.map_or(true, |(_, b)| rx > b) {
            best = Some((c, rx));
        }
    }
    best.map(|(c, _)| c)
        .ok_or_else(|| Error::invalid("no candidate cells"))
}

/// Axis-aligned rectangle in layout coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BBox {
    pub min: Point,
    pub max: Point,
}

impl BBox {
    pub fn centered(half_width_m: f64) -> Self {
        BBox {
            min: Point::new(-half_width_m, -half_width_m),
            max: Point::new(half_width_m, half_width_m),
        }
    }
}

/// Raster of serving cells; pixel `(i, j)` covers column `i`, row `j`
/// counted from the bottom-left corner.
#[derive(Debug, Clone, PartialEq)]
pub struct ServingMap {
    pub origin: Point,
    pub resolution_m: f64,
    pub nx: usize,
    pub ny: usize,
    pub ids: Vec<CellId>,
}

impl ServingMap {
    pub fn pixel_center(&self, i: usize, j: usize) -> Point {
        Point::new(
            self.origin.x + (i as f64 + 0.5) * self.resolution_m,
            self.origin.y + (j as f64 + 0.5) * self.resolution_m,
        )
    }

    pub fn get(&self, i: usize, j: usize) -> CellId {
        self.ids[j * self.nx + i]
    }

    /// Distinct ids in ascending order.
    pub fn distinct(&self) -> Vec<CellId> {
        let mut v = self.ids.clone();
        v.sort();
        v.dedup();
        v
    }

    /// `x_m,y_m,cell_id` per pixel center.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "x_m,y_m,cell_id")?;
        for j in 0..self.ny {
            for i in 0..self.nx {
                let p = self.pixel_center(i, j);
                writeln!(out, "{},{},{}", fmt_sig9(p.x), fmt_sig9(p.y), self.get(i, j))?;
            }
        }
        Ok(())
    }

    /// Plain (P2) greymap with the cell id as grey level, north up.
    pub fn write_pgm<W: Write>(&self, mut out: W) -> Result<()> {
        let maxval = self.ids.iter().map(|c| c.0).max().unwrap_or(0).max(1);
        writeln!(out, "P2\n{} {}\n{}", self.nx, self.ny, maxval)?;
        for j in (0..self.ny).rev() {
            let row: Vec<String> = (0..self.nx).map(|i| self.get(i, j).to_string()).collect();
            writeln!(out, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Per-pixel best server over `candidates`, using per-Hz powers `powers`.
pub fn serving_map(
    deployment: &Deployment,
    powers: &[f64],
    candidates: &[CellId],
    bbox: &BBox,
    resolution_m: f64,
) -> Result<ServingMap> {
    if !(resolution_m > 0.0) {
        return Err(Error::invalid(format!("resolution {resolution_m} m must be positive")));
    }
    let width = bbox.max.x - bbox.min.x;
    let height = bbox.max.y - bbox.min.y;
    if !(width >= 0.0 && height >= 0.0) {
        return Err(Error::invalid("bounding box has negative extent"));
    }
    let nx = ((width / resolution_m).ceil() as usize).max(1);
    let ny = ((height / resolution_m).ceil() as usize).max(1);
    let mut map = ServingMap {
        origin: bbox.min,
        resolution_m,
        nx,
        ny,
        ids: Vec::new(),
    };
    map.ids = (0..nx * ny)
        .into_par_iter()
        .map(|k| {
            let p = map.pixel_center(k % nx, k / nx);
            let links = deployment.links(p)?;
            serving_cell(&links, powers, candidates)
        })
        .collect::<Result<_>>()?;
    Ok(map)
}
