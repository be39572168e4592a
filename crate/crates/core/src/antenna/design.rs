use rayon::prelude::*;

use super::array::{ArrayDesign, Steering};
use super::pattern::{side_lobe_level, GainPattern, IntegrationGrid};
use crate::{Error, Result};

/// Range of steering directions a design must support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteeringEnvelope {
    pub max_theta_e: f64,
    pub max_abs_phi_e: f64,
}

impl SteeringEnvelope {
    pub fn boresight() -> Self {
        SteeringEnvelope {
            max_theta_e: std::f64::consts::FRAC_PI_2,
            max_abs_phi_e: 0.0,
        }
    }

    pub fn from_deg(max_theta_e_deg: f64, max_abs_phi_e_deg: f64) -> Self {
        SteeringEnvelope {
            max_theta_e: max_theta_e_deg.to_radians(),
            max_abs_phi_e: max_abs_phi_e_deg.to_radians(),
        }
    }

    /// Side lobes grow with both tilts, so the far corner is the worst case.
    pub fn worst_case(&self) -> Result<Steering> {
        Steering::new(self.max_theta_e, self.max_abs_phi_e)
    }
}

/// Candidate values per design parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchLattice {
    pub dx_over_lambda: Vec<f64>,
    pub dz_over_lambda: Vec<f64>,
    pub taper_ratio_x: Vec<f64>,
    pub taper_ratio_z: Vec<f64>,
}

impl SearchLattice {
    pub const DEFAULT_TAPERS: [f64; 12] = [1.0, 0.7, 0.5, 0.4, 0.3, 0.25, 0.2, 0.18, 0.16, 0.14, 0.12, 0.1];

    /// Keeps the base spacings and sweeps the tapers.
    pub fn tapers_only(base: &ArrayDesign, tapers: &[f64]) -> Self {
        SearchLattice {
            dx_over_lambda: vec![base.dx_over_lambda],
            dz_over_lambda: vec![base.dz_over_lambda],
            taper_ratio_x: tapers.to_vec(),
            taper_ratio_z: tapers.to_vec(),
        }
    }

    /// Sweeps spacings from the base value down to half a wavelength in
    /// steps of 0.1, together with the default tapers.
    pub fn around(base: &ArrayDesign) -> Self {
        let spacings = |d: f64| {
            let mut v = vec![d];
            let mut x = ((d - 1e-9) * 10.0).floor() / 10.0;
            while x >= 0.5 - 1e-9 {
                if (x - d).abs() > 1e-9 {
                    v.push(x);
                }
                x -= 0.1;
            }
            v
        };
        SearchLattice {
            dx_over_lambda: spacings(base.dx_over_lambda),
            dz_over_lambda: spacings(base.dz_over_lambda),
            taper_ratio_x: Self::DEFAULT_TAPERS.to_vec(),
            taper_ratio_z: Self::DEFAULT_TAPERS.to_vec(),
        }
    }

    pub fn len(&self) -> usize {
        self.dx_over_lambda.len() * self.dz_over_lambda.len() * self.taper_ratio_x.len() * self.taper_ratio_z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Designs in tie-break preference order: larger spacing first, then
    /// weaker taper (larger edge ratio).
    fn designs(&self, base: &ArrayDesign) -> Result<Vec<ArrayDesign>> {
        let desc = |v: &[f64]| {
            let mut v = v.to_vec();
            v.sort_by(|a, b| b.total_cmp(a));
            v.dedup();
            v
        };
        let mut out = Vec::with_capacity(self.len());
        for &dx in &desc(&self.dx_over_lambda) {
            for &dz in &desc(&self.dz_over_lambda) {
                for &tx in &desc(&self.taper_ratio_x) {
                    for &tz in &desc(&self.taper_ratio_z) {
                        out.push(ArrayDesign::new(base.n_x, base.n_z, dx, dz, tx, tz)?);
                    }
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignCandidate {
    pub design: ArrayDesign,
    /// Maximum gain at the worst-case steering, linear.
    pub g0: f64,
    /// Side-lobe level at the worst-case steering, dB.
    pub sll_db: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignSearchOutcome {
    pub best: DesignCandidate,
    pub steering: Steering,
    pub feasible: usize,
    pub evaluated: usize,
}

/// Finds the highest-gain design on the lattice whose side lobes stay at or
/// below `sll_constraint_db` at the worst-case corner of the envelope.
///
/// A constraint of 0 dB is satisfied by every design.
pub fn design_search(
    base: &ArrayDesign,
    envelope: &SteeringEnvelope,
    sll_constraint_db: f64,
    lattice: &SearchLattice,
    grid: &IntegrationGrid,
) -> Result<DesignSearchOutcome> {
    if !(sll_constraint_db <= 0.0) {
        return Err(Error::invalid(format!(
            "side-lobe constraint {sll_constraint_db} dB must be negative"
        )));
    }
    base.validate()?;
    let steering = envelope.worst_case()?;
    let designs = lattice.designs(base)?;
    if designs.is_empty() {
        return Err(Error::invalid("empty search lattice"));
    }

    let evaluated: Vec<DesignCandidate> = designs
        .par_iter()
        .map(|d| {
            let pattern = GainPattern::compute(d, &steering, grid)?;
            Ok(DesignCandidate {
                design: *d,
                g0: pattern.g0,
                sll_db: side_lobe_level(&pattern),
            })
        })
        .collect::<Result<_>>()?;

    let mut best: Option<DesignCandidate> = None;
    let mut feasible = 0;
    for c in &evaluated {
        if c.sll_db > sll_constraint_db {
            continue;
        }
        feasible += 1;
        // strict improvement keeps the earlier, preferred candidate on ties
        if best.map_or(true, |b| c.g0 > b.g0 * (1.0 + 1e-12)) {
            best = Some(*c);
        }
    }
    match best {
        Some(best) => Ok(DesignSearchOutcome {
            best,
            steering,
            feasible,
            evaluated: evaluated.len(),
        }),
        None => Err(Error::Infeasible(format!(
            "none of {} designs reaches {sll_constraint_db} dB",
            evaluated.len()
        ))),
    }
}
