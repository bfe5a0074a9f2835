//! Closed forms against direct simulation of the per-frame physics.
//!
//! The series are evaluated as plain Taylor partial sums deep enough to be
//! converged; the simulated side never touches a series.

use proptest::prelude::*;
use uavsec::analytic::{
    connection_probability, mean_gamma_eve_phase1, secrecy_outage_probability, sop_l1, SeriesProbability,
};
use uavsec::channel::{build_links, LinkSet};
use uavsec::geometry::{Environment, NetworkGeometry};
use uavsec::montecarlo::{estimate_cp, estimate_functional, estimate_sop, SimulationPlan};
use uavsec::protocol::{sinr_eve_phase1, ProtocolConfig};
use uavsec::scenario::{Baseline, Scenario};
use uavsec::specfun::{SeriesForm, TruncationOrders};

fn links() -> LinkSet {
    build_links(&NetworkGeometry::default(), &Environment::default()).unwrap()
}

fn converged() -> TruncationOrders {
    TruncationOrders::uniform(60).with_form(SeriesForm::Taylor)
}

fn within(series: SeriesProbability, mc_mean: f64, se: f64) -> bool {
    (series.raw - mc_mean).abs() <= 4.0 * se + 1e-4
}

#[test]
fn connection_probability_matches_simulation() {
    let links = links();
    let plan = SimulationPlan::new(200_000, 11);
    for (dbw, lambda, beta) in [(12.0, 0.5, 0.5), (20.0, 0.5, 0.5), (24.0, 0.8, 0.3), (28.0, 0.3, 0.7)] {
        let cfg = ProtocolConfig::default().with_power_dbw(dbw).with_split(lambda, beta);
        let series = connection_probability(&cfg, &links, &converged()).unwrap();
        let mc = estimate_cp(&cfg, &links, &plan).unwrap();
        assert!(within(series, mc.mean, mc.std_error), "{dbw} dBW λ={lambda} β={beta}: {} vs {mc:?}", series.raw);
    }
}

#[test]
fn secrecy_outage_matches_simulation() {
    let links = links();
    let plan = SimulationPlan::new(200_000, 12);
    for (dbw, lambda, beta) in [(10.0, 0.7, 0.5), (18.0, 0.7, 0.5), (22.0, 0.4, 0.6)] {
        let cfg = ProtocolConfig::default().with_power_dbw(dbw).with_split(lambda, beta);
        let sop = secrecy_outage_probability(&cfg, &links, &converged()).unwrap();
        let mc = estimate_sop(&cfg, &links, &plan).unwrap();
        assert!(within(sop.sop, mc.mean, mc.std_error), "{dbw} dBW: {} vs {mc:?}", sop.sop.raw);
    }
}

#[test]
fn phase_one_terms_match_simulation() {
    let links = links();
    let plan = SimulationPlan::new(400_000, 13);
    let cfg = ProtocolConfig::default().with_split(0.7, 0.5);
    let de = cfg.delta_e();
    let mc = estimate_functional(&links, &plan, |f| f64::from(u8::from(sinr_eve_phase1(&cfg, f, &links) <= de))).unwrap();
    assert!((sop_l1(&cfg, &links) - mc.mean).abs() <= 4.0 * mc.std_error);

    let mean = estimate_functional(&links, &plan, |f| sinr_eve_phase1(&cfg, f, &links)).unwrap();
    let closed = mean_gamma_eve_phase1(&cfg, &links).unwrap();
    assert!(((closed - mean.mean) / closed).abs() < 0.02, "{closed} vs {mean:?}");
}

#[test]
fn taylor_ladder_converges_monotonically() {
    let links = links();
    let cfg = ProtocolConfig::default().with_power_dbw(25.0);
    let reference = connection_probability(&cfg, &links, &TruncationOrders::uniform(90).with_form(SeriesForm::Taylor)).unwrap().raw;
    let errors: Vec<f64> = [10, 20, 40, 60]
        .iter()
        .map(|&n| {
            let o = TruncationOrders::uniform(n).with_form(SeriesForm::Taylor);
            (connection_probability(&cfg, &links, &o).unwrap().raw - reference).abs()
        })
        .collect();
    assert!(errors.windows(2).all(|w| w[1] <= w[0]), "{errors:?}");
    assert!(errors[3] < 1e-8, "{errors:?}");
}

#[test]
fn baselines_run_through_the_same_closed_forms() {
    let plan = SimulationPlan::new(100_000, 14);
    for baseline in Baseline::ALL {
        let s = Scenario { baseline, orders: converged(), plan, ..Default::default() };
        let links = s.links().unwrap();
        let cfg = s.effective_protocol().with_power_dbw(22.0);
        let series = connection_probability(&cfg, &links, &s.orders).unwrap();
        let mc = estimate_cp(&cfg, &links, &plan).unwrap();
        assert!(within(series, mc.mean, mc.std_error), "{}: {} vs {mc:?}", baseline.as_str(), series.raw);
    }
}

#[test]
fn zero_rate_connects_with_certainty() {
    let cfg = ProtocolConfig { rate_t: 0.0, rate_s: 0.0, ..Default::default() };
    let cp = connection_probability(&cfg, &links(), &converged()).unwrap();
    assert!((cp.raw - 1.0).abs() < 1e-9, "{}", cp.raw);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn converged_series_are_probabilities(dbw in 0.0f64..32.0, lambda in 0.05f64..0.95, beta in 0.05f64..0.95) {
        let links = links();
        let cfg = ProtocolConfig::default().with_power_dbw(dbw).with_split(lambda, beta);
        let cp = connection_probability(&cfg, &links, &TruncationOrders::uniform(40).with_form(SeriesForm::Taylor)).unwrap();
        prop_assert!(cp.raw > -1e-9 && cp.raw < 1.0 + 1e-9, "CP {}", cp.raw);
        let sop = secrecy_outage_probability(&cfg, &links, &TruncationOrders::uniform(40).with_form(SeriesForm::Taylor)).unwrap();
        prop_assert!((0.0..=1.0).contains(&sop.l1));
        prop_assert!(sop.l2.raw > -1e-9 && sop.l2.raw < 1.0 + 1e-9, "L2 {}", sop.l2.raw);
    }
}
