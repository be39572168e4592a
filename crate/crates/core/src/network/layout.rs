use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::deployment::CellId;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// A macro site with its three sectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Site {
    pub id: usize,
    pub position: Point,
    pub sectors: [CellId; 3],
    /// Hexagonal ring index, 0 for the measured site.
    pub ring: usize,
}

/// Hexagonal lattice of `1 + 3 r (r + 1)` sites.
///
/// Neighbours of a site sit at bearings 30°, 90°, ..., 330°, so that sector
/// azimuths 0°, 120° and 240° point between two neighbours. Sites are
/// ordered by ring, then by bearing; sector `k` of site `s` gets cell id
/// `3 s + k`.
pub fn build_layout(isd_m: f64, rings: usize) -> Result<Vec<Site>> {
    if !(isd_m > 0.0) {
        return Err(Error::invalid(format!("inter-site distance {isd_m} must be positive")));
    }
    let r = rings as i64;
    // axial basis: a = isd (cos 30°, sin 30°), b = isd (0, 1)
    let (ax, ay) = (isd_m * (PI / 6.0).cos(), isd_m * 0.5);
    let mut lattice = Vec::new();
    for q in -r..=r {
        for s in -r..=r {
            let ring = q.abs().max(s.abs()).max((q + s).abs());
            if ring > r {
                continue;
            }
            let p = Point::new(q as f64 * ax, q as f64 * ay + s as f64 * isd_m);
            let bearing = if ring == 0 { 0.0 } else { p.y.atan2(p.x).rem_euclid(2.0 * PI) };
            lattice.push((ring as usize, bearing, p));
        }
    }
    lattice.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    Ok(lattice
        .into_iter()
        .enumerate()
        .map(|(id, (ring, _, position))| Site {
            id,
            position,
            sectors: [CellId(3 * id), CellId(3 * id + 1), CellId(3 * id + 2)],
            ring,
        })
        .collect())
}
