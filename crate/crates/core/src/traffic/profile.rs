use rand::Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

use super::SimRng;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layer {
    /// Uniform over the measured area.
    Uniform,
    /// Uniform over the virtual-sector coverage.
    Hotspot,
}

impl Layer {
    pub const ALL: [Layer; 2] = [Layer::Uniform, Layer::Hotspot];

    pub fn as_str(&self) -> &'static str {
        match self {
            Layer::Uniform => "uniform",
            Layer::Hotspot => "hotspot",
        }
    }

    pub(crate) fn index(&self) -> usize {
        match self {
            Layer::Uniform => 0,
            Layer::Hotspot => 1,
        }
    }
}

/// Arrival rates (users/s) in force from `start_s` until the next step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileStep {
    pub start_s: f64,
    pub uniform_rate: f64,
    pub hotspot_rate: f64,
}

impl ProfileStep {
    pub fn rate(&self, layer: Layer) -> f64 {
        match layer {
            Layer::Uniform => self.uniform_rate,
            Layer::Hotspot => self.hotspot_rate,
        }
    }
}

/// Piecewise-constant arrival-rate schedule. Before the first step both
/// rates are zero.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrafficProfile {
    steps: Vec<ProfileStep>,
}

impl TrafficProfile {
    pub fn new(steps: Vec<ProfileStep>) -> Result<Self> {
        for w in steps.windows(2) {
            if !(w[1].start_s > w[0].start_s) {
                return Err(Error::Config(format!(
                    "profile times must increase strictly ({} then {})",
                    w[0].start_s, w[1].start_s
                )));
            }
        }
        for s in &steps {
            if !(s.start_s >= 0.0) || !s.start_s.is_finite() {
                return Err(Error::Config(format!("profile start {} must be >= 0", s.start_s)));
            }
            for l in Layer::ALL {
                let r = s.rate(l);
                if !(r >= 0.0) || !r.is_finite() {
                    return Err(Error::Config(format!("{} rate {r} must be >= 0", l.as_str())));
                }
            }
        }
        Ok(TrafficProfile { steps })
    }

    pub fn constant(uniform_rate: f64, hotspot_rate: f64) -> Result<Self> {
        Self::new(vec![ProfileStep {
            start_s: 0.0,
            uniform_rate,
            hotspot_rate,
        }])
    }

    pub fn steps(&self) -> &[ProfileStep] {
        &self.steps
    }

    pub fn step_at(&self, t: f64) -> Option<&ProfileStep> {
        let k = self.steps.partition_point(|s| s.start_s <= t);
        k.checked_sub(1).map(|k| &self.steps[k])
    }

    pub fn rate(&self, layer: Layer, t: f64) -> f64 {
        self.step_at(t).map_or(0.0, |s| s.rate(layer))
    }

    pub fn max_rate(&self, layer: Layer) -> f64 {
        self.steps.iter().map(|s| s.rate(layer)).fold(0.0, f64::max)
    }

    /// Step boundaries strictly inside `(0, horizon)`.
    pub fn change_times(&self, horizon: f64) -> Vec<f64> {
        self.steps
            .iter()
            .map(|s| s.start_s)
            .filter(|&t| t > 0.0 && t < horizon)
            .collect()
    }
}

/// Next arrival time of `layer` after `now`, or `None` past `horizon`.
///
/// Candidates are drawn at the peak rate of the layer and kept with
/// probability `rate(t) / peak`, so the result is exactly a Poisson process
/// with the piecewise-constant intensity of the profile.
pub fn sample_arrival(
    profile: &TrafficProfile,
    rng: &mut SimRng,
    layer: Layer,
    now: f64,
    horizon: f64,
) -> Option<f64> {
    let peak = profile.max_rate(layer);
    if peak <= 0.0 {
        return None;
    }
    let exp = Exp::new(peak).expect("positive rate");
    let mut t = now;
    loop {
        t += exp.sample(rng);
        if t >= horizon {
            return None;
        }
        if rng.random::<f64>() * peak < profile.rate(layer, t) {
            return Some(t);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn rates_follow_steps() {
        let p = TrafficProfile::new(vec![
            ProfileStep { start_s: 10.0, uniform_rate: 1.0, hotspot_rate: 0.0 },
            ProfileStep { start_s: 20.0, uniform_rate: 2.0, hotspot_rate: 3.0 },
        ])
        .unwrap();
        assert_eq!(p.rate(Layer::Uniform, 5.0), 0.0);
        assert_eq!(p.rate(Layer::Uniform, 10.0), 1.0);
        assert_eq!(p.rate(Layer::Hotspot, 25.0), 3.0);
        assert_eq!(p.max_rate(Layer::Uniform), 2.0);
        assert_eq!(p.change_times(100.0), vec![10.0, 20.0]);
    }

    #[test]
    fn rejects_unsorted_or_negative() {
        let s = |t, r| ProfileStep { start_s: t, uniform_rate: r, hotspot_rate: 0.0 };
        assert!(TrafficProfile::new(vec![s(5.0, 1.0), s(5.0, 1.0)]).is_err());
        assert!(TrafficProfile::new(vec![s(0.0, -1.0)]).is_err());
    }

    #[test]
    fn zero_rate_layer_never_fires() {
        let p = TrafficProfile::constant(1.0, 0.0).unwrap();
        let mut rng = SimRng::seed_from_u64(3);
        assert_eq!(sample_arrival(&p, &mut rng, Layer::Hotspot, 0.0, 1e6), None);
    }

    #[test]
    fn arrivals_respect_quiet_segments() {
        let p = TrafficProfile::new(vec![
            ProfileStep { start_s: 0.0, uniform_rate: 5.0, hotspot_rate: 0.0 },
            ProfileStep { start_s: 100.0, uniform_rate: 0.0, hotspot_rate: 0.0 },
            ProfileStep { start_s: 200.0, uniform_rate: 5.0, hotspot_rate: 0.0 },
        ])
        .unwrap();
        let mut rng = SimRng::seed_from_u64(11);
        let mut t = 0.0;
        while let Some(next) = sample_arrival(&p, &mut rng, Layer::Uniform, t, 300.0) {
            assert!(!(100.0..200.0).contains(&next));
            t = next;
        }
    }
}
