use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Geometry and amplitude taper of the planar array.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArrayDesign {
    pub n_x: usize,
    pub n_z: usize,
    pub dx_over_lambda: f64,
    pub dz_over_lambda: f64,
    /// Edge-to-center amplitude ratio of the Gaussian taper along x.
    pub taper_ratio_x: f64,
    pub taper_ratio_z: f64,
}

impl ArrayDesign {
    pub fn new(
        n_x: usize,
        n_z: usize,
        dx_over_lambda: f64,
        dz_over_lambda: f64,
        taper_ratio_x: f64,
        taper_ratio_z: f64,
    ) -> Result<Self> {
        let design = ArrayDesign {
            n_x,
            n_z,
            dx_over_lambda,
            dz_over_lambda,
            taper_ratio_x,
            taper_ratio_z,
        };
        design.validate()?;
        Ok(design)
    }

    /// Untapered array.
    pub fn uniform(n_x: usize, n_z: usize, dx_over_lambda: f64, dz_over_lambda: f64) -> Result<Self> {
        Self::new(n_x, n_z, dx_over_lambda, dz_over_lambda, 1.0, 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_x == 0 || self.n_z == 0 {
            return Err(Error::invalid("array needs at least one element per axis"));
        }
        for (name, d) in [("dx/lambda", self.dx_over_lambda), ("dz/lambda", self.dz_over_lambda)] {
            if !(d > 0.0 && d <= 1.0) {
                return Err(Error::invalid(format!(
                    "{name} = {d} violates 0 < d_s/lambda <= 1"
                )));
            }
        }
        for (name, t) in [("taper_x", self.taper_ratio_x), ("taper_z", self.taper_ratio_z)] {
            if !(t > 0.0 && t <= 1.0) {
                return Err(Error::invalid(format!("{name} = {t} must lie in (0, 1]")));
            }
        }
        Ok(())
    }

    fn axis(&self, axis: Axis) -> (usize, f64, f64) {
        match axis {
            Axis::X => (self.n_x, self.dx_over_lambda, self.taper_ratio_x),
            Axis::Z => (self.n_z, self.dz_over_lambda, self.taper_ratio_z),
        }
    }
}

/// Electrical steering direction of the main beam.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Steering {
    pub theta_e: f64,
    pub phi_e: f64,
}

impl Steering {
    pub fn new(theta_e: f64, phi_e: f64) -> Result<Self> {
        if !(theta_e > 0.0 && theta_e < PI) {
            return Err(Error::invalid(format!("theta_e = {theta_e} outside (0, pi)")));
        }
        if !(phi_e > -FRAC_PI_2 && phi_e < FRAC_PI_2) {
            return Err(Error::invalid(format!("phi_e = {phi_e} outside (-pi/2, pi/2)")));
        }
        Ok(Steering { theta_e, phi_e })
    }

    /// Broadside beam: horizontal, along the reflector boresight.
    pub fn boresight() -> Self {
        Steering {
            theta_e: FRAC_PI_2,
            phi_e: 0.0,
        }
    }

    /// Builds the steering from tilts in degrees. The vertical tilt is
    /// measured downwards from the horizon, the horizontal tilt from the
    /// boresight azimuth.
    pub fn from_tilts_deg(vertical_tilt_deg: f64, horizontal_tilt_deg: f64) -> Result<Self> {
        Self::new(
            (90.0 + vertical_tilt_deg).to_radians(),
            horizontal_tilt_deg.to_radians(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Z,
}

/// Gaussian amplitude taper `exp(-a x^2)` over the normalized element
/// coordinate `x in [-1, 1]`, with `a` chosen so the end elements get
/// exactly `edge_ratio`.
pub fn taper_weights(n: usize, edge_ratio: f64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::invalid("taper needs at least one element"));
    }
    if !(edge_ratio > 0.0 && edge_ratio <= 1.0) {
        return Err(Error::invalid(format!(
            "edge ratio {edge_ratio} must lie in (0, 1]"
        )));
    }
    if n == 1 {
        return Ok(vec![1.0]);
    }
    let a = -edge_ratio.ln();
    let half = (n - 1) as f64 / 2.0;
    Ok((0..n)
        .map(|k| {
            let x = (k as f64 - half) / half;
            (-a * x * x).exp()
        })
        .collect())
}

fn direction_cosines(axis: Axis, theta: f64, phi: f64, steering: &Steering) -> (f64, f64) {
    match axis {
        Axis::Z => (theta.cos(), steering.theta_e.cos()),
        Axis::X => (
            theta.sin() * phi.sin(),
            steering.theta_e.sin() * steering.phi_e.sin(),
        ),
    }
}

/// Steered array factor along one axis, phase-referenced to the array center
/// and normalized to unit magnitude in the steering direction.
pub fn array_factor(axis: Axis, design: &ArrayDesign, steering: &Steering, theta: f64, phi: f64) -> Complex64 {
    let (n, spacing, taper) = design.axis(axis);
    let weights = taper_weights(n, taper).expect("validated design");
    let (u, u_e) = direction_cosines(axis, theta, phi, steering);
    let psi = 2.0 * PI * spacing * (u - u_e);
    let half = (n - 1) as f64 / 2.0;
    let total: f64 = weights.iter().sum();
    let sum: Complex64 = weights
        .iter()
        .enumerate()
        .map(|(k, &w)| Complex64::from_polar(w, psi * (k as f64 - half)))
        .sum();
    sum / total
}

/// Image-theory factor of an infinite conducting plane a quarter wavelength
/// behind the dipoles.
pub fn reflector_factor(theta: f64, phi: f64) -> Result<f64> {
    check_front(phi)?;
    Ok((FRAC_PI_2 * theta.sin() * phi.cos()).sin())
}

/// Power pattern of an infinitesimal vertical dipole.
#[inline]
pub fn element_gain(theta: f64) -> f64 {
    let s = theta.sin();
    s * s
}

fn check_front(phi: f64) -> Result<()> {
    if !(-FRAC_PI_2..=FRAC_PI_2).contains(&phi) {
        return Err(Error::Domain(format!(
            "phi = {phi} rad is behind the reflector"
        )));
    }
    Ok(())
}

/// Normalized power gain `|AF_x^2 AF_y^2 AF_z^2| G_d(theta)`.
pub fn normalized_gain(design: &ArrayDesign, steering: &Steering, theta: f64, phi: f64) -> Result<f64> {
    let af_y = reflector_factor(theta, phi)?;
    let af_x = array_factor(Axis::X, design, steering, theta, phi).norm_sqr();
    let af_z = array_factor(Axis::Z, design, steering, theta, phi).norm_sqr();
    Ok(af_x * af_y * af_y * af_z * element_gain(theta))
}

/// Precomputed form of a steered design for repeated evaluation.
///
/// The taper is symmetric and phase-referenced at the center, so each array
/// factor reduces to a real cosine sum.
#[derive(Debug, Clone)]
pub struct ArrayModel {
    design: ArrayDesign,
    steering: Steering,
    x: AxisSum,
    z: AxisSum,
}

#[derive(Debug, Clone)]
struct AxisSum {
    // (weight / sum of weights, 2 pi d m_k)
    terms: Vec<(f64, f64)>,
    u_e: f64,
}

impl AxisSum {
    fn new(n: usize, spacing: f64, taper: f64, u_e: f64) -> Result<Self> {
        let weights = taper_weights(n, taper)?;
        let total: f64 = weights.iter().sum();
        let half = (n - 1) as f64 / 2.0;
        let terms = weights
            .iter()
            .enumerate()
            .map(|(k, w)| (w / total, 2.0 * PI * spacing * (k as f64 - half)))
            .collect();
        Ok(AxisSum { terms, u_e })
    }

    #[inline]
    fn eval(&self, u: f64) -> f64 {
        let du = u - self.u_e;
        self.terms.iter().map(|(w, k)| w * (k * du).cos()).sum()
    }
}

impl ArrayModel {
    pub fn new(design: ArrayDesign, steering: Steering) -> Result<Self> {
        design.validate()?;
        Steering::new(steering.theta_e, steering.phi_e)?;
        let x = AxisSum::new(
            design.n_x,
            design.dx_over_lambda,
            design.taper_ratio_x,
            steering.theta_e.sin() * steering.phi_e.sin(),
        )?;
        let z = AxisSum::new(
            design.n_z,
            design.dz_over_lambda,
            design.taper_ratio_z,
            steering.theta_e.cos(),
        )?;
        Ok(ArrayModel {
            design,
            steering,
            x,
            z,
        })
    }

    pub fn design(&self) -> &ArrayDesign {
        &self.design
    }

    pub fn steering(&self) -> &Steering {
        &self.steering
    }

    /// `|AF_z|^2 G_d(theta)`, the part of the pattern that depends on theta only.
    #[inline]
    pub(crate) fn theta_part(&self, theta: f64) -> f64 {
        let af = self.z.eval(theta.cos());
        af * af * element_gain(theta)
    }

    /// Remaining factor `|AF_x|^2 AF_y^2` given precomputed sin/cos of theta.
    #[inline]
    pub(crate) fn phi_part(&self, sin_theta: f64, phi: f64) -> f64 {
        let (sp, cp) = phi.sin_cos();
        let af = self.x.eval(sin_theta * sp);
        let y = (FRAC_PI_2 * sin_theta * cp).sin();
        af * af * y * y
    }

    /// Normalized gain; same value as [`normalized_gain`].
    pub fn gain(&self, theta: f64, phi: f64) -> Result<f64> {
        check_front(phi)?;
        Ok(self.theta_part(theta) * self.phi_part(theta.sin(), phi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn paper_design() -> ArrayDesign {
        ArrayDesign::uniform(10, 40, 0.5, 0.7).unwrap()
    }

    #[test]
    fn taper_examples() {
        assert_eq!(taper_weights(5, 1.0).unwrap(), vec![1.0; 5]);
        assert_eq!(taper_weights(1, 0.5).unwrap(), vec![1.0]);
        let w = taper_weights(3, 0.5).unwrap();
        assert!((w[0] - 0.5).abs() < 1e-15 && w[1] == 1.0 && (w[2] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn taper_rejects_bad_arguments() {
        assert!(taper_weights(0, 0.5).is_err());
        assert!(taper_weights(4, 0.0).is_err());
        assert!(taper_weights(4, 1.2).is_err());
    }

    #[test]
    fn even_taper_is_symmetric_with_two_center_weights_below_one() {
        let w = taper_weights(6, 0.3).unwrap();
        for k in 0..3 {
            assert!((w[k] - w[5 - k]).abs() < 1e-15);
        }
        assert!((w[0] - 0.3).abs() < 1e-12);
        assert!(w[2] < 1.0 && w[2] > 0.9);
    }

    #[test]
    fn array_factor_is_unity_at_steering() {
        let design = ArrayDesign::new(10, 40, 0.5, 0.7, 0.3, 0.2).unwrap();
        let s = Steering::new(1.9, 0.4).unwrap();
        for axis in [Axis::X, Axis::Z] {
            let af = array_factor(axis, &design, &s, s.theta_e, s.phi_e);
            assert!((af.norm() - 1.0).abs() < 1e-12);
        }
        // z factor only depends on theta
        let af = array_factor(Axis::Z, &design, &s, s.theta_e, -1.2);
        assert!((af.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_element_axis_is_flat() {
        let design = ArrayDesign::uniform(1, 4, 0.5, 0.5).unwrap();
        let s = Steering::new(1.7, 0.3).unwrap();
        for &(t, p) in &[(0.1, 0.0), (1.2, -1.0), (2.9, 1.4)] {
            assert!((array_factor(Axis::X, &design, &s, t, p).norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn two_element_broadside_null_at_zenith() {
        // |cos(pi/2 (cos 0 - cos pi/2))| = cos(pi/2) = 0
        let design = ArrayDesign::uniform(1, 2, 0.5, 0.5).unwrap();
        let s = Steering::boresight();
        let af = array_factor(Axis::Z, &design, &s, 0.0, 0.0);
        let direct = ((PI / 2.0) * (0f64.cos() - FRAC_PI_2.cos())).cos().abs();
        assert!(af.norm() < 1e-15);
        assert!((af.norm() - direct).abs() < 1e-15);
    }

    #[test]
    fn reflector_examples() {
        assert!((reflector_factor(FRAC_PI_2, 0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(reflector_factor(FRAC_PI_2, FRAC_PI_2).unwrap().abs() < 1e-15);
        let v = reflector_factor(PI / 6.0, 0.0).unwrap();
        assert!((v - (PI / 4.0).sin()).abs() < 1e-15);
        assert!(matches!(reflector_factor(1.0, 2.0), Err(Error::Domain(_))));
    }

    #[test]
    fn element_examples() {
        assert!((element_gain(FRAC_PI_2) - 1.0).abs() < 1e-15);
        assert_eq!(element_gain(0.0), 0.0);
        assert!((element_gain(PI / 4.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn normalized_gain_examples() {
        let d = paper_design();
        let s = Steering::boresight();
        assert!((normalized_gain(&d, &s, FRAC_PI_2, 0.0).unwrap() - 1.0).abs() < 1e-12);
        for theta in [0.3, 1.2, 2.0] {
            assert!(normalized_gain(&d, &s, theta, FRAC_PI_2).unwrap().abs() < 1e-20);
            assert!(normalized_gain(&d, &s, theta, -FRAC_PI_2).unwrap().abs() < 1e-20);
        }
        assert!(normalized_gain(&d, &s, 1.0, -1.7).is_err());
    }

    #[test]
    fn value_at_steering_is_reflector_times_element() {
        let d = ArrayDesign::new(10, 40, 0.5, 0.7, 0.25, 0.15).unwrap();
        let s = Steering::from_tilts_deg(25.0, 30.0).unwrap();
        let g = normalized_gain(&d, &s, s.theta_e, s.phi_e).unwrap();
        let y = reflector_factor(s.theta_e, s.phi_e).unwrap();
        let expect = y * y * element_gain(s.theta_e);
        assert!((g - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn model_matches_direct_evaluation() {
        let d = ArrayDesign::new(7, 12, 0.6, 0.8, 0.4, 0.5).unwrap();
        let s = Steering::new(1.8, -0.5).unwrap();
        let m = ArrayModel::new(d, s).unwrap();
        for i in 0..50 {
            let theta = 0.03 + i as f64 * 0.062;
            let phi = -1.5 + i as f64 * 0.06;
            let a = normalized_gain(&d, &s, theta, phi).unwrap();
            let b = m.gain(theta, phi).unwrap();
            assert!((a - b).abs() < 1e-13, "{a} vs {b}");
        }
    }

    #[test]
    fn design_validation() {
        assert!(ArrayDesign::uniform(10, 40, 1.5, 0.7).is_err());
        assert!(ArrayDesign::uniform(0, 40, 0.5, 0.7).is_err());
        assert!(ArrayDesign::new(10, 40, 0.5, 0.7, 0.0, 1.0).is_err());
        assert!(ArrayDesign::uniform(10, 40, 1.0, 1.0).is_ok());
        assert!(Steering::new(0.0, 0.0).is_err());
        assert!(Steering::new(1.0, FRAC_PI_2).is_err());
    }
}
