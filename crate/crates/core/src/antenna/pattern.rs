use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;

use super::array::{ArrayDesign, ArrayModel, Steering};
use crate::units::linear_to_db;
use crate::{Error, Result};

/// Uniform midpoint grid over `theta in [0, pi]`, `phi in [-pi/2, pi/2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationGrid {
    n: usize,
}

impl IntegrationGrid {
    /// Coarsest step that resolves the narrow beams of the arrays of interest.
    pub const MAX_STEP_DEG: f64 = 0.25;

    /// Grid with a step no larger than `step_deg`.
    pub fn new(step_deg: f64) -> Result<Self> {
        if !(step_deg > 0.0) || step_deg > Self::MAX_STEP_DEG + 1e-12 {
            return Err(Error::invalid(format!(
                "integration step {step_deg} deg must lie in (0, {}]",
                Self::MAX_STEP_DEG
            )));
        }
        let n = (180.0 / step_deg - 1e-9).ceil() as usize;
        Ok(IntegrationGrid { n })
    }

    pub fn step(&self) -> f64 {
        PI / self.n as f64
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn theta(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.step()
    }

    pub fn phi(&self, j: usize) -> f64 {
        -FRAC_PI_2 + (j as f64 + 0.5) * self.step()
    }
}

impl Default for IntegrationGrid {
    fn default() -> Self {
        IntegrationGrid::new(Self::MAX_STEP_DEG).expect("default step is valid")
    }
}

/// Midpoint-rule value of `∬ f(θ,φ) sinθ dθ dφ` over the front half-space.
pub fn integrate_half_space<F>(grid: &IntegrationGrid, f: F) -> f64
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    let h = grid.step();
    let rows: Vec<f64> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let theta = grid.theta(i);
            let row: f64 = (0..grid.len()).map(|j| f(theta, grid.phi(j))).sum();
            row * theta.sin()
        })
        .collect();
    rows.iter().sum::<f64>() * h * h
}

/// Maximum gain of an arbitrary normalized pattern from power conservation.
pub fn max_gain_of<F>(grid: &IntegrationGrid, f: F) -> Result<f64>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    gain_from_integral(integrate_half_space(grid, f))
}

fn gain_from_integral(integral: f64) -> Result<f64> {
    if !(integral > 0.0) || !integral.is_finite() {
        return Err(Error::Numeric(format!(
            "pattern integral {integral} is not positive"
        )));
    }
    Ok(4.0 * PI / integral)
}

/// Maximum gain `G_0` of a steered array.
pub fn max_gain(design: &ArrayDesign, steering: &Steering, grid: &IntegrationGrid) -> Result<f64> {
    Ok(GainPattern::compute(design, steering, grid)?.g0)
}

/// Sampled gain `G = G_0 f` of a steered array on an integration grid.
#[derive(Debug, Clone)]
pub struct GainPattern {
    pub design: ArrayDesign,
    pub steering: Steering,
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
    /// Linear gain, row-major with one row per theta sample.
    pub gain: Vec<f64>,
    pub g0: f64,
}

impl GainPattern {
    pub fn compute(design: &ArrayDesign, steering: &Steering, grid: &IntegrationGrid) -> Result<Self> {
        let model = ArrayModel::new(*design, *steering)?;
        let n = grid.len();
        let phi: Vec<f64> = (0..n).map(|j| grid.phi(j)).collect();
        let theta: Vec<f64> = (0..n).map(|i| grid.theta(i)).collect();

        let rows: Vec<(Vec<f64>, f64)> = theta
            .par_iter()
            .map(|&t| {
                let tp = model.theta_part(t);
                let st = t.sin();
                let row: Vec<f64> = phi.iter().map(|&p| tp * model.phi_part(st, p)).collect();
                let sum = row.iter().sum::<f64>() * st;
                (row, sum)
            })
            .collect();

        let h = grid.step();
        let integral = rows.iter().map(|(_, s)| s).sum::<f64>() * h * h;
        let g0 = gain_from_integral(integral)?;
        let mut gain = Vec::with_capacity(n * n);
        for (row, _) in rows {
            gain.extend(row.into_iter().map(|f| f * g0));
        }
        Ok(GainPattern {
            design: *design,
            steering: *steering,
            theta,
            phi,
            gain,
            g0,
        })
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.gain[i * self.phi.len() + j]
    }

    /// Grid index and value of the sampled maximum.
    pub fn peak(&self) -> (usize, usize, f64) {
        let (k, &v) = self
            .gain
            .iter()
            .enumerate()
            .fold((0, &f64::NEG_INFINITY), |acc, x| if *x.1 > *acc.1 { x } else { acc });
        (k / self.phi.len(), k % self.phi.len(), v)
    }
}

/// Highest side lobe relative to the main beam, in dB.
///
/// The main lobe is the set of samples reachable from the pattern maximum
/// by 4-connected paths along which the gain never increases, so it stops at
/// the first surrounding minimum in every direction. The side-lobe level is
/// the largest gain outside that region. A pattern without any minimum
/// around its maximum returns `-inf`.
pub fn side_lobe_level(pattern: &GainPattern) -> f64 {
    let rows = pattern.theta.len();
    let cols = pattern.phi.len();
    let (pi, pj, peak) = pattern.peak();
    let mut in_lobe = vec![false; rows * cols];
    let mut stack = vec![(pi, pj)];
    in_lobe[pi * cols + pj] = true;
    while let Some((i, j)) = stack.pop() {
        let here = pattern.get(i, j);
        let neighbours = [
            (i.wrapping_sub(1), j),
            (i + 1, j),
            (i, j.wrapping_sub(1)),
            (i, j + 1),
        ];
        for (ni, nj) in neighbours {
            if ni >= rows || nj >= cols {
                continue;
            }
            let k = ni * cols + nj;
            if !in_lobe[k] && pattern.gain[k] <= here {
                in_lobe[k] = true;
                stack.push((ni, nj));
            }
        }
    }
    let side = pattern
        .gain
        .iter()
        .zip(&in_lobe)
        .filter(|(_, &m)| !m)
        .map(|(g, _)| *g)
        .fold(f64::NEG_INFINITY, f64::max);
    if side == f64::NEG_INFINITY {
        f64::NEG_INFINITY
    } else {
        linear_to_db(side / peak)
    }
}
