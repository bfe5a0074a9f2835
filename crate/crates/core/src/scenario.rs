//! A complete operating point: layout, propagation environment, protocol
//! parameters, series depths, simulation plan and baseline variant.

use crate::channel::{build_links_for, LinkSet, RelayKind};
use crate::error::{Error, Result};
use crate::geometry::{distance, Environment, NetworkGeometry, NodePosition};
use crate::montecarlo::SimulationPlan;
use crate::protocol::ProtocolConfig;
use crate::specfun::TruncationOrders;

/// The system variant being evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Baseline {
    /// Aerial relay with destination jamming.
    #[default]
    UavCj,
    /// Aerial relay, all power to the source (`λ = 1`).
    UavNoCj,
    /// Jamming with a ground relay on the Alice–Bob line, as far from Alice
    /// as the aerial relay is; all its links are ground-to-ground.
    GroundRelay,
}

impl Baseline {
    pub const ALL: [Baseline; 3] = [Baseline::UavCj, Baseline::UavNoCj, Baseline::GroundRelay];

    pub fn as_str(self) -> &'static str {
        match self {
            Baseline::UavCj => "uav_cj",
            Baseline::UavNoCj => "uav_no_cj",
            Baseline::GroundRelay => "ground_relay",
        }
    }

    pub fn relay_kind(self) -> RelayKind {
        match self {
            Baseline::GroundRelay => RelayKind::Ground,
            _ => RelayKind::Aerial,
        }
    }

    pub fn jamming(self) -> bool {
        self != Baseline::UavNoCj
    }
}

impl std::str::FromStr for Baseline {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Baseline::ALL
            .into_iter()
            .find(|b| b.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown baseline `{s}` (expected uav_cj, uav_no_cj or ground_relay)")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Scenario {
    pub geometry: NetworkGeometry,
    pub environment: Environment,
    pub protocol: ProtocolConfig,
    pub orders: TruncationOrders,
    pub plan: SimulationPlan,
    pub baseline: Baseline,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        self.environment.validate()?;
        self.protocol.validate()?;
        self.orders.validate()?;
        self.plan.validate()
    }

    /// The layout actually simulated under the baseline.
    pub fn effective_geometry(&self) -> NetworkGeometry {
        match self.baseline {
            Baseline::GroundRelay => {
                let a = self.geometry.alice;
                let d = distance(a, self.geometry.relay);
                let dir = self.geometry.bob;
                let len = (dir.x - a.x).hypot(dir.y - a.y);
                let (ux, uy) = if len > 0.0 { ((dir.x - a.x) / len, (dir.y - a.y) / len) } else { (1.0, 0.0) };
                self.geometry.with_relay(NodePosition::ground(a.x + d * ux, a.y + d * uy))
            }
            _ => self.geometry,
        }
    }

    /// Protocol parameters under the baseline (`λ = 1` without jamming).
    pub fn effective_protocol(&self) -> ProtocolConfig {
        if self.baseline.jamming() {
            self.protocol
        } else {
            ProtocolConfig { lambda: 1.0, ..self.protocol }
        }
    }

    pub fn links(&self) -> Result<LinkSet> {
        build_links_for(&self.effective_geometry(), &self.environment, self.baseline.relay_kind())
    }
}
