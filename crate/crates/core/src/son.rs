//! Self-optimizing bandwidth split between a macro sector and its virtual
//! sector.
//!
//! The split maximizes the proportional-fair utility
//! `Σ_vis log(δ R_u) + Σ_macro log((1 - δ) R_u)`, whose optimum depends only
//! on the user counts: `δ = N_v / (N_v + N_m)`. It is recomputed on every
//! arrival and departure.

use crate::{Error, Result};

/// Bandwidth split of one (macro, virtual sector) pair.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SplitState {
    /// Fraction of the band given to the virtual sector.
    pub delta: f64,
    pub n_vis: usize,
    pub n_macro: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitEvent {
    Arrival,
    Departure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Vis,
    Macro,
}

/// Utility whose maximizer sets the split. Only proportional fairness is
/// implemented; other alpha-fair utilities plug in here.
pub trait SplitUtility {
    fn utility(&self, delta: f64, vis_rates: &[f64], macro_rates: &[f64]) -> Result<f64>;
    fn optimal_split(&self, n_vis: usize, n_macro: usize) -> f64;
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ProportionalFair;

impl SplitUtility for ProportionalFair {
    fn utility(&self, delta: f64, vis_rates: &[f64], macro_rates: &[f64]) -> Result<f64> {
        pf_utility(delta, vis_rates, macro_rates)
    }

    fn optimal_split(&self, n_vis: usize, n_macro: usize) -> f64 {
        optimal_delta(n_vis, n_macro)
    }
}

/// Proportional-fair utility of a split. Returns `-inf` when users sit on a
/// side that gets no bandwidth.
pub fn pf_utility(delta: f64, vis_rates: &[f64], macro_rates: &[f64]) -> Result<f64> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::invalid(format!("split {delta} outside [0, 1]")));
    }
    if let Some(r) = vis_rates.iter().chain(macro_rates).find(|r| !(**r > 0.0)) {
        return Err(Error::invalid(format!("rate {r} must be positive")));
    }
    let side = |share: f64, rates: &[f64]| {
        if rates.is_empty() {
            0.0
        } else if share <= 0.0 {
            f64::NEG_INFINITY
        } else {
            rates.iter().map(|r| (share * r).ln()).sum()
        }
    };
    Ok(side(delta, vis_rates) + side(1.0 - delta, macro_rates))
}

/// `N_v / (N_v + N_m)`, or 0 when both cells are idle.
pub fn optimal_delta(n_vis: usize, n_macro: usize) -> f64 {
    let total = n_vis + n_macro;
    if total == 0 {
        0.0
    } else {
        n_vis as f64 / total as f64
    }
}

impl SplitState {
    pub fn new(n_vis: usize, n_macro: usize) -> Self {
        SplitState {
            delta: optimal_delta(n_vis, n_macro),
            n_vis,
            n_macro,
        }
    }

    /// Bandwidth fraction currently allocated to `side`.
    pub fn share(&self, side: Side) -> f64 {
        match side {
            Side::Vis => self.delta,
            Side::Macro => 1.0 - self.delta,
        }
    }

    pub fn on_event(self, event: SplitEvent, side: Side) -> Result<Self> {
        let (mut v, mut m) = (self.n_vis, self.n_macro);
        let count = match side {
            Side::Vis => &mut v,
            Side::Macro => &mut m,
        };
        match event {
            SplitEvent::Arrival => *count += 1,
            SplitEvent::Departure => {
                *count = count
                    .checked_sub(1)
                    .ok_or_else(|| Error::Logic(format!("departure from empty {side:?} cell")))?;
            }
        }
        Ok(SplitState::new(v, m))
    }
}
