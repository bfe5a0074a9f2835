//! Node placement and large-scale propagation.
//!
//! All lengths are normalized to 100 m. Air-to-ground links get an
//! elevation-dependent Rice factor and a sigmoid path-loss exponent that moves
//! from the NLOS exponent at grazing angles toward the LOS exponent overhead.
//! Ground-to-ground links are pinned to the NLOS exponent.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodePosition {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl NodePosition {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub const fn ground(x: f64, y: f64) -> Self {
        Self { x, y, z: 0.0 }
    }

    /// Distance of the ground projection from the origin.
    pub fn horizontal_norm(&self) -> f64 {
        self.x.hypot(self.y)
    }
}

/// How the endpoints `kappa_min`/`kappa_max` of the Rice-factor ramp are read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KFactorScale {
    /// The ramp value is the linear power ratio.
    #[default]
    Linear,
    /// The ramp value is in dB and converted with `10^(K/10)`.
    Decibel,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Environment {
    pub alpha_los: f64,
    pub alpha_nlos: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub kappa_min: f64,
    pub kappa_max: f64,
    pub k_factor_scale: KFactorScale,
}

impl Default for Environment {
    fn default() -> Self {
        Self {
            alpha_los: 2.0,
            alpha_nlos: 3.5,
            omega1: 0.28,
            omega2: 9.61,
            kappa_min: 1.0,
            kappa_max: 10.0,
            k_factor_scale: KFactorScale::Linear,
        }
    }
}

impl Environment {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha_los > 0.0 && self.alpha_nlos >= self.alpha_los) {
            return Err(Error::Config(format!(
                "path-loss exponents need alpha_nlos >= alpha_los > 0, got {} / {}",
                self.alpha_nlos, self.alpha_los
            )));
        }
        if !(self.kappa_min >= 0.0 && self.kappa_max >= self.kappa_min) {
            return Err(Error::Config(format!(
                "Rice factor endpoints need kappa_max >= kappa_min >= 0, got {} / {}",
                self.kappa_max, self.kappa_min
            )));
        }
        if !(self.omega2 > 0.0) {
            return Err(Error::Config(format!("omega2 must be positive, got {}", self.omega2)));
        }
        Ok(())
    }
}

pub fn distance(a: NodePosition, b: NodePosition) -> f64 {
    let (dx, dy, dz) = (a.x - b.x, a.y - b.y, a.z - b.z);
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// Elevation of `aerial` as seen from `ground`, in radians within `[0, π/2]`.
pub fn elevation_angle(ground: NodePosition, aerial: NodePosition) -> Result<f64> {
    let d = distance(ground, aerial);
    if d == 0.0 {
        return Err(Error::UndefinedAngle);
    }
    let rise = aerial.z - ground.z;
    if rise < 0.0 {
        return Err(Error::domain(
            "elevation_angle",
            format!("aerial node is {} below the ground node", -rise),
        ));
    }
    Ok((rise / d).min(1.0).asin())
}

pub fn rice_k_factor(theta: f64, env: &Environment) -> f64 {
    let ramp = env.kappa_min + (env.kappa_max - env.kappa_min) * theta / FRAC_PI_2;
    match env.k_factor_scale {
        KFactorScale::Linear => ramp,
        KFactorScale::Decibel => 10f64.powf(ramp / 10.0),
    }
}

pub fn path_loss_exponent(theta: f64, env: &Environment, ground_to_ground: bool) -> f64 {
    if ground_to_ground {
        return env.alpha_nlos;
    }
    let sigmoid = 1.0 + env.omega1 * (-env.omega2 * (theta - env.omega1)).exp();
    (env.alpha_los - env.alpha_nlos) / sigmoid + env.alpha_nlos
}

/// Large-scale gain `d^(-alpha)`.
pub fn path_loss_gain(d: f64, alpha: f64) -> Result<f64> {
    if !(d > 0.0) {
        return Err(Error::domain("path_loss_gain", format!("distance must be positive, got {d}")));
    }
    Ok(d.powf(-alpha))
}

/// Positions of the four nodes of the relay network.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkGeometry {
    pub alice: NodePosition,
    pub bob: NodePosition,
    pub eve: NodePosition,
    pub relay: NodePosition,
}

impl NetworkGeometry {
    /// Reference layout: Bob at `(dx, 0, 0)`, Eve at `(4dx/5, 1, 0)`, relay at
    /// `(dx/5, 0, altitude)`.
    pub fn reference(dx: f64, altitude: f64) -> Self {
        Self {
            alice: NodePosition::ground(0.0, 0.0),
            bob: NodePosition::ground(dx, 0.0),
            eve: NodePosition::ground(0.8 * dx, 1.0),
            relay: NodePosition::new(0.2 * dx, 0.0, altitude),
        }
    }

    /// Same nodes with the relay moved to `relay`.
    pub fn with_relay(self, relay: NodePosition) -> Self {
        Self { relay, ..self }
    }

    pub fn relay_altitude(&self) -> f64 {
        self.relay.z
    }
}

impl Default for NetworkGeometry {
    fn default() -> Self {
        Self::reference(10.0, 1.5)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_4;

    const O: NodePosition = NodePosition::ground(0.0, 0.0);

    #[test]
    fn distance_examples() {
        assert_eq!(distance(O, NodePosition::new(2.0, 0.0, 1.5)), 2.5);
        assert_eq!(distance(O, O), 0.0);
        assert_relative_eq!(distance(O, NodePosition::ground(8.0, 1.0)), 65f64.sqrt());
    }

    #[test]
    fn elevation_examples() {
        let th = elevation_angle(O, NodePosition::new(2.0, 0.0, 1.5)).unwrap();
        assert_relative_eq!(th, 0.6f64.asin(), epsilon = 1e-15);
        assert_relative_eq!(th, 0.6435, epsilon = 1e-4);
        let overhead = elevation_angle(O, NodePosition::new(0.0, 0.0, 1.5)).unwrap();
        assert_relative_eq!(overhead, FRAC_PI_2, epsilon = 1e-15);
        assert_eq!(elevation_angle(O, NodePosition::ground(5.0, 0.0)).unwrap(), 0.0);
        assert_eq!(elevation_angle(O, O), Err(Error::UndefinedAngle));
        assert!(elevation_angle(NodePosition::new(0.0, 0.0, 2.0), NodePosition::ground(1.0, 0.0)).is_err());
    }

    #[test]
    fn k_factor_examples() {
        let env = Environment::default();
        assert_eq!(rice_k_factor(0.0, &env), 1.0);
        assert_relative_eq!(rice_k_factor(FRAC_PI_2, &env), 10.0, epsilon = 1e-14);
        assert_relative_eq!(rice_k_factor(FRAC_PI_4, &env), 5.5, epsilon = 1e-14);

        let db = Environment { k_factor_scale: KFactorScale::Decibel, ..env };
        assert_relative_eq!(rice_k_factor(FRAC_PI_2, &db), 10.0, epsilon = 1e-12);
        assert_relative_eq!(rice_k_factor(0.0, &db), 10f64.powf(0.1), epsilon = 1e-14);
    }

    #[test]
    fn exponent_examples() {
        let env = Environment::default();
        assert_eq!(path_loss_exponent(0.3, &env, true), 3.5);
        let overhead = path_loss_exponent(FRAC_PI_2, &env, false);
        assert!((overhead - 2.0).abs() < 1e-5 && overhead > 2.0);
        // 2 - 1.5 / (1 + 0.28 e^{9.61 * 0.28}) + ... evaluated by hand
        let grazing = path_loss_exponent(0.0, &env, false);
        let expected = 3.5 - 1.5 / (1.0 + 0.28 * (9.61f64 * 0.28).exp());
        assert_relative_eq!(grazing, expected, epsilon = 1e-15);
        assert!((grazing - 3.2073).abs() < 5e-4);
    }

    #[test]
    fn gain_examples() {
        assert_eq!(path_loss_gain(1.0, 3.5).unwrap(), 1.0);
        assert_relative_eq!(path_loss_gain(2.5, 2.0).unwrap(), 0.16, epsilon = 1e-15);
        assert_relative_eq!(path_loss_gain(65f64.sqrt(), 3.5).unwrap(), 65f64.powf(-1.75), epsilon = 1e-18);
        assert!(path_loss_gain(0.0, 2.0).is_err());
        assert!(path_loss_gain(-1.0, 2.0).is_err());
    }

    #[test]
    fn environment_validation() {
        assert!(Environment::default().validate().is_ok());
        let bad = Environment { alpha_nlos: 1.0, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = Environment { kappa_min: 11.0, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = Environment { omega2: 0.0, ..Default::default() };
        assert!(bad.validate().is_err());
    }

    fn arb_pos() -> impl Strategy<Value = NodePosition> {
        (-20.0..20.0f64, -20.0..20.0f64, 0.0..10.0f64).prop_map(|(x, y, z)| NodePosition::new(x, y, z))
    }

    proptest! {
        #[test]
        fn distance_is_a_metric(a in arb_pos(), b in arb_pos(), c in arb_pos()) {
            prop_assert_eq!(distance(a, b), distance(b, a));
            prop_assert!(distance(a, c) <= distance(a, b) + distance(b, c) + 1e-12);
        }

        #[test]
        fn k_factor_monotone(t1 in 0.0..FRAC_PI_2, t2 in 0.0..FRAC_PI_2) {
            let env = Environment::default();
            let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
            prop_assert!(rice_k_factor(lo, &env) <= rice_k_factor(hi, &env));
        }

        #[test]
        fn exponent_decreasing_and_bounded(t1 in 0.0..FRAC_PI_2, t2 in 0.0..FRAC_PI_2) {
            let env = Environment::default();
            prop_assume!((t1 - t2).abs() > 1e-9);
            let (lo, hi) = if t1 < t2 { (t1, t2) } else { (t2, t1) };
            let (a_lo, a_hi) = (path_loss_exponent(lo, &env, false), path_loss_exponent(hi, &env, false));
            prop_assert!(a_hi < a_lo);
            prop_assert!(a_hi > env.alpha_los && a_lo < env.alpha_nlos);
        }

        #[test]
        fn gain_decreasing(d in 1.001..50.0f64, alpha in 1.0..5.0f64, step in 0.01..2.0f64) {
            prop_assert!(path_loss_gain(d + step, alpha).unwrap() < path_loss_gain(d, alpha).unwrap());
            prop_assert!(path_loss_gain(d, alpha + step).unwrap() < path_loss_gain(d, alpha).unwrap());
        }
    }

    #[test]
    fn reference_layout() {
        let g = NetworkGeometry::default();
        assert_eq!(g.eve, NodePosition::ground(8.0, 1.0));
        assert_eq!(g.relay, NodePosition::new(2.0, 0.0, 1.5));
    }
}
