use std::io::Write;

use super::array::ArrayModel;
use super::pattern::GainPattern;
use crate::units::{fmt_sig9, linear_to_db};
use crate::Result;

/// Gains below this are written as the floor so plots stay finite.
const FLOOR_DBI: f64 = -100.0;

/// Principal pattern cuts through the steering direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cut {
    /// Vertical cut: `phi = phi_e`, theta swept over [0, 180] deg.
    EPlane,
    /// Horizontal cut: `theta = theta_e`, phi swept over [-90, 90] deg.
    HPlane,
}

fn dbi(g: f64) -> f64 {
    if g > 0.0 {
        linear_to_db(g).max(FLOOR_DBI)
    } else {
        FLOOR_DBI
    }
}

/// Writes `theta_deg,phi_deg,gain_dbi` for every grid sample.
pub fn write_grid_csv<W: Write>(pattern: &GainPattern, mut out: W) -> Result<()> {
    writeln!(out, "theta_deg,phi_deg,gain_dbi")?;
    for (i, t) in pattern.theta.iter().enumerate() {
        for (j, p) in pattern.phi.iter().enumerate() {
            writeln!(
                out,
                "{},{},{}",
                fmt_sig9(t.to_degrees()),
                fmt_sig9(p.to_degrees()),
                fmt_sig9(dbi(pattern.get(i, j)))
            )?;
        }
    }
    Ok(())
}

/// Writes `angle_deg,gain_dbi` along a principal cut sampled every `step_deg`.
pub fn write_cut_csv<W: Write>(
    model: &ArrayModel,
    g0: f64,
    cut: Cut,
    step_deg: f64,
    mut out: W,
) -> Result<()> {
    let s = *model.steering();
    let (lo, hi) = match cut {
        Cut::EPlane => (0.0, 180.0),
        Cut::HPlane => (-90.0, 90.0),
    };
    let n = ((hi - lo) / step_deg).round() as usize;
    writeln!(out, "angle_deg,gain_dbi")?;
    for k in 0..=n {
        let a = lo + k as f64 * (hi - lo) / n as f64;
        let (theta, phi) = match cut {
            Cut::EPlane => (a.to_radians(), s.phi_e),
            Cut::HPlane => (s.theta_e, a.to_radians()),
        };
        let g = g0 * model.gain(theta, phi)?;
        writeln!(out, "{},{}", fmt_sig9(a), fmt_sig9(dbi(g)))?;
    }
    Ok(())
}
