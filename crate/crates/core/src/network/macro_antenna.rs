use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Parabolic macro sector pattern (3GPP TR 36.814 style).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MacroAntenna {
    pub hpbw_h_deg: f64,
    pub hpbw_v_deg: f64,
    pub front_to_back_db: f64,
    pub sla_v_db: f64,
    pub max_gain_dbi: f64,
    pub downtilt_deg: f64,
}

impl Default for MacroAntenna {
    fn default() -> Self {
        MacroAntenna {
            hpbw_h_deg: 70.0,
            hpbw_v_deg: 10.0,
            front_to_back_db: 25.0,
            sla_v_db: 20.0,
            max_gain_dbi: 14.0,
            downtilt_deg: 8.0,
        }
    }
}

impl MacroAntenna {
    /// Gain for offsets (radians) from the sector azimuth and from the
    /// downtilt direction.
    pub fn gain_db(&self, horizontal_offset: f64, vertical_offset: f64) -> f64 {
        let h = 12.0 * (horizontal_offset.to_degrees() / self.hpbw_h_deg).powi(2);
        let v = 12.0 * (vertical_offset.to_degrees() / self.hpbw_v_deg).powi(2);
        self.max_gain_dbi - h.min(self.front_to_back_db) - v.min(self.sla_v_db)
    }
}

/// Default-parameter macro gain.
pub fn macro_antenna_gain_db(horizontal_offset: f64, vertical_offset: f64) -> f64 {
    MacroAntenna::default().gain_db(horizontal_offset, vertical_offset)
}

/// Distances below this are evaluated at this value.
pub(crate) const MIN_DISTANCE_KM: f64 = 0.010;

/// `128.1 + 37.6 log10(d)` with `d` in km, floored at 10 m.
pub fn pathloss_db(d_km: f64) -> Result<f64> {
    if !(d_km > 0.0) {
        return Err(Error::invalid(format!("distance {d_km} km must be positive")));
    }
    Ok(128.1 + 37.6 * d_km.max(MIN_DISTANCE_KM).log10())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pathloss_examples() {
        assert!((pathloss_db(1.0).unwrap() - 128.1).abs() < 1e-12);
        assert!((pathloss_db(0.5).unwrap() - (128.1 - 37.6 * 2f64.log10())).abs() < 1e-12);
        assert!((pathloss_db(0.5).unwrap() - 116.78).abs() < 0.01);
        assert!((pathloss_db(0.1).unwrap() - 90.5).abs() < 1e-12);
        assert_eq!(pathloss_db(0.001).unwrap(), pathloss_db(0.01).unwrap());
        assert!(pathloss_db(0.0).is_err());
        assert!(pathloss_db(-1.0).is_err());
    }

    #[test]
    fn macro_gain_examples() {
        assert!((macro_antenna_gain_db(0.0, 0.0) - 14.0).abs() < 1e-12);
        assert!((macro_antenna_gain_db(35f64.to_radians(), 0.0) - 11.0).abs() < 1e-12);
        assert!((macro_antenna_gain_db(std::f64::consts::PI, 0.0) + 11.0).abs() < 1e-12);
        assert!((macro_antenna_gain_db(0.0, 1.0) - (14.0 - 20.0)).abs() < 1e-12);
    }
}
