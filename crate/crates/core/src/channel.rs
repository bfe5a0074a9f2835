//! Small-scale fading: normalized squared-Rician power gains.
//!
//! A link with Rice factor `K` has power gain `S = |μ + σ(g₁ + i g₂)|²` with
//! `μ² = K/(K+1)` and `σ² = 1/(2(K+1))`, so `E[S] = 1`. `K = 0` reduces to
//! the unit-mean exponential law used for ground-to-ground links.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::geometry::{
    distance, elevation_angle, path_loss_exponent, path_loss_gain, rice_k_factor, Environment, NetworkGeometry,
    NodePosition,
};
use crate::specfun::{ln_bessel_i, marcum_q1, MarcumMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinkId {
    /// Alice to the relay.
    Au,
    /// Relay to Bob; by reciprocity also Bob to the relay.
    Ub,
    /// Relay to Eve.
    Ue,
    /// Alice to Eve.
    Ae,
    /// Bob to Eve (the jamming path).
    Be,
}

impl LinkId {
    pub const ALL: [LinkId; 5] = [LinkId::Au, LinkId::Ub, LinkId::Ue, LinkId::Ae, LinkId::Be];

    pub fn as_str(self) -> &'static str {
        match self {
            LinkId::Au => "au",
            LinkId::Ub => "ub",
            LinkId::Ue => "ue",
            LinkId::Ae => "ae",
            LinkId::Be => "be",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkModel {
    pub id: LinkId,
    pub k_factor: f64,
    pub large_scale_gain: f64,
    pub distance: f64,
    pub elevation: f64,
    pub exponent: f64,
}

/// The five links of one network layout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkSet {
    pub au: LinkModel,
    pub ub: LinkModel,
    pub ue: LinkModel,
    pub ae: LinkModel,
    pub be: LinkModel,
}

impl LinkSet {
    pub fn get(&self, id: LinkId) -> &LinkModel {
        match id {
            LinkId::Au => &self.au,
            LinkId::Ub => &self.ub,
            LinkId::Ue => &self.ue,
            LinkId::Ae => &self.ae,
            LinkId::Be => &self.be,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &LinkModel> {
        LinkId::ALL.into_iter().map(move |id| self.get(id))
    }
}

/// Whether the relay is airborne (elevation-dependent links) or a ground
/// node (every link ground-to-ground).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RelayKind {
    #[default]
    Aerial,
    Ground,
}

fn ground_link(id: LinkId, a: NodePosition, b: NodePosition, env: &Environment) -> Result<LinkModel> {
    let d = distance(a, b);
    Ok(LinkModel {
        id,
        k_factor: 0.0,
        large_scale_gain: path_loss_gain(d, env.alpha_nlos)?,
        distance: d,
        elevation: 0.0,
        exponent: env.alpha_nlos,
    })
}

fn aerial_link(id: LinkId, ground: NodePosition, relay: NodePosition, env: &Environment) -> Result<LinkModel> {
    let d = distance(ground, relay);
    let theta = elevation_angle(ground, relay)?;
    let alpha = path_loss_exponent(theta, env, false);
    Ok(LinkModel {
        id,
        k_factor: rice_k_factor(theta, env),
        large_scale_gain: path_loss_gain(d, alpha)?,
        distance: d,
        elevation: theta,
        exponent: alpha,
    })
}

pub fn build_links(geom: &NetworkGeometry, env: &Environment) -> Result<LinkSet> {
    build_links_for(geom, env, RelayKind::Aerial)
}

pub fn build_links_for(geom: &NetworkGeometry, env: &Environment, relay: RelayKind) -> Result<LinkSet> {
    env.validate()?;
    let relay_link = match relay {
        RelayKind::Aerial => aerial_link,
        RelayKind::Ground => ground_link,
    };
    Ok(LinkSet {
        au: relay_link(LinkId::Au, geom.alice, geom.relay, env)?,
        ub: relay_link(LinkId::Ub, geom.bob, geom.relay, env)?,
        ue: relay_link(LinkId::Ue, geom.eve, geom.relay, env)?,
        ae: ground_link(LinkId::Ae, geom.alice, geom.eve, env)?,
        be: ground_link(LinkId::Be, geom.bob, geom.eve, env)?,
    })
}

fn check(x: f64, k: f64) -> Result<()> {
    if !(x >= 0.0) || !(k >= 0.0) {
        return Err(Error::domain("squared_rician", format!("requires x >= 0 and K >= 0, got x={x}, K={k}")));
    }
    Ok(())
}

/// `(K+1) e^{-K} e^{-(K+1)x} I₀(2√(K(K+1)x))`.
pub fn squared_rician_pdf(x: f64, k: f64) -> Result<f64> {
    check(x, k)?;
    let ln_i0 = ln_bessel_i(0.0, 2.0 * (k * (k + 1.0) * x).sqrt())?;
    Ok(((k + 1.0).ln() - k - (k + 1.0) * x + ln_i0).exp())
}

/// `1 - Q₁(√(2K), √(2(K+1)x))`.
pub fn squared_rician_cdf(x: f64, k: f64) -> Result<f64> {
    check(x, k)?;
    if k == 0.0 {
        return Ok(-(-x).exp_m1());
    }
    Ok(1.0 - marcum_q1((2.0 * k).sqrt(), (2.0 * (k + 1.0) * x).sqrt(), MarcumMode::Exact)?)
}

/// One unit-mean squared-Rician draw; consumes exactly two standard normals.
pub fn sample_power_gain<R: Rng + ?Sized>(k: f64, rng: &mut R) -> f64 {
    let mu = (k / (k + 1.0)).sqrt();
    let sigma = (0.5 / (k + 1.0)).sqrt();
    let g1: f64 = rng.sample(StandardNormal);
    let g2: f64 = rng.sample(StandardNormal);
    let re = mu + sigma * g1;
    let im = sigma * g2;
    re * re + im * im
}
