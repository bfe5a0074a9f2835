//! Frame-level Monte Carlo estimation.
//!
//! Frame `i` draws its five gains from a ChaCha8 generator keyed by the plan
//! seed with stream number `i`, so every frame depends on `(seed, i)` alone.
//! Frames are processed in fixed chunks of [`CHUNK`] consecutive indices,
//! each chunk is summed in index order, and the chunk sums are combined by a
//! pairwise tree in chunk order. The result is therefore bit-identical for
//! any worker count.
//!
//! The same frame sequence is reused by every estimator with the same seed
//! (common random numbers), which keeps sweeps and grid searches smooth.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::{sample_power_gain, LinkSet};
use crate::error::{Error, Result};
use crate::protocol::{secrecy_quantities, sinr_eve_phase1, sinr_eve_phase2, sinr_main, FrameRealization, ProtocolConfig};

/// Frames per work unit.
pub const CHUNK: u64 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimulationPlan {
    pub frames: u64,
    pub seed: u64,
    /// Worker threads; `None` uses the global rayon pool.
    pub workers: Option<usize>,
}

impl Default for SimulationPlan {
    fn default() -> Self {
        Self { frames: 100_000, seed: 1, workers: None }
    }
}

impl SimulationPlan {
    pub fn new(frames: u64, seed: u64) -> Self {
        Self { frames, seed, workers: None }
    }

    pub fn with_workers(self, workers: usize) -> Self {
        Self { workers: Some(workers), ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.frames == 0 {
            return Err(Error::Config("a simulation needs at least one frame".into()));
        }
        if self.workers == Some(0) {
            return Err(Error::Config("worker count must be positive".into()));
        }
        Ok(())
    }
}

/// A sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    /// `√(σ̂²/n)` with the plug-in variance `σ̂² = mean(x²) - mean(x)²`,
    /// which for indicators is the binomial `√(p(1-p)/n)`.
    pub std_error: f64,
    pub frames: u64,
    pub seed: u64,
}

impl Estimate {
    fn from_sums(sum: f64, sum_sq: f64, frames: u64, seed: u64) -> Self {
        let n = frames as f64;
        let mean = sum / n;
        let var = (sum_sq / n - mean * mean).max(0.0);
        Self { mean, std_error: (var / n).sqrt(), frames, seed }
    }
}

/// Generator for one frame.
pub fn frame_stream(seed: u64, frame: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(frame);
    rng
}

/// Draws `S_au, S_ub, S_ue, S_ae, S_be` in that order.
pub fn sample_frame<R: Rng + ?Sized>(links: &LinkSet, rng: &mut R) -> FrameRealization {
    FrameRealization {
        s_au: sample_power_gain(links.au.k_factor, rng),
        s_ub: sample_power_gain(links.ub.k_factor, rng),
        s_ue: sample_power_gain(links.ue.k_factor, rng),
        s_ae: sample_power_gain(links.ae.k_factor, rng),
        s_be: sample_power_gain(links.be.k_factor, rng),
    }
}

/// The frame with index `frame` of the sequence keyed by `seed`.
pub fn frame_at(links: &LinkSet, seed: u64, frame: u64) -> FrameRealization {
    sample_frame(links, &mut frame_stream(seed, frame))
}

#[derive(Debug, Clone)]
struct Partial {
    sum: Vec<f64>,
    sum_sq: Vec<f64>,
    bad: u64,
    first_bad: u64,
}

impl Partial {
    fn new(outputs: usize) -> Self {
        Self { sum: vec![0.0; outputs], sum_sq: vec![0.0; outputs], bad: 0, first_bad: u64::MAX }
    }

    fn merge(mut self, other: Partial) -> Partial {
        for (a, b) in self.sum.iter_mut().zip(&other.sum) {
            *a += b;
        }
        for (a, b) in self.sum_sq.iter_mut().zip(&other.sum_sq) {
            *a += b;
        }
        self.bad += other.bad;
        self.first_bad = self.first_bad.min(other.first_bad);
        self
    }
}

fn tree_reduce(mut parts: Vec<Partial>) -> Partial {
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len().div_ceil(2));
        let mut it = parts.into_iter();
        while let Some(a) = it.next() {
            next.push(match it.next() {
                Some(b) => a.merge(b),
                None => a,
            });
        }
        parts = next;
    }
    parts.pop().expect("at least one chunk")
}

/// Estimates `outputs` frame functionals at once over the same frames.
///
/// `f(frame_index, frame, out)` writes one value per output into `out`.
/// Any non-finite value fails the run with [`Error::NonFiniteSamples`].
pub fn estimate_vector<F>(links: &LinkSet, plan: &SimulationPlan, outputs: usize, f: F) -> Result<Vec<Estimate>>
where
    F: Fn(u64, &FrameRealization, &mut [f64]) + Sync,
{
    plan.validate()?;
    let chunks = plan.frames.div_ceil(CHUNK);
    let base = ChaCha8Rng::seed_from_u64(plan.seed);
    let run_chunk = |c: u64| {
        let mut part = Partial::new(outputs);
        let mut out = vec![0.0; outputs];
        let end = ((c + 1) * CHUNK).min(plan.frames);
        for i in c * CHUNK..end {
            let mut rng = base.clone();
            rng.set_stream(i);
            let frame = sample_frame(links, &mut rng);
            f(i, &frame, &mut out);
            for (k, &x) in out.iter().enumerate() {
                if x.is_finite() {
                    part.sum[k] += x;
                    part.sum_sq[k] += x * x;
                } else {
                    part.bad += 1;
                    part.first_bad = part.first_bad.min(i);
                }
            }
        }
        part
    };
    let collect = || (0..chunks).into_par_iter().map(run_chunk).collect::<Vec<_>>();
    let parts = match plan.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(collect),
        None => collect(),
    };
    let total = tree_reduce(parts);
    if total.bad > 0 {
        return Err(Error::NonFiniteSamples { count: total.bad, first_frame: total.first_bad });
    }
    Ok(total
        .sum
        .iter()
        .zip(&total.sum_sq)
        .map(|(&s, &q)| Estimate::from_sums(s, q, plan.frames, plan.seed))
        .collect())
}

/// Mean and standard error of one frame functional.
pub fn estimate_functional<F>(links: &LinkSet, plan: &SimulationPlan, f: F) -> Result<Estimate>
where
    F: Fn(&FrameRealization) -> f64 + Sync,
{
    Ok(estimate_vector(links, plan, 1, |_, frame, out| out[0] = f(frame))?[0])
}

fn indicator(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// Fraction of frames with `γ_AB > δ_t`.
pub fn estimate_cp(cfg: &ProtocolConfig, links: &LinkSet, plan: &SimulationPlan) -> Result<Estimate> {
    let dt = cfg.delta_t();
    estimate_functional(links, plan, |f| indicator(sinr_main(cfg, f, links) > dt))
}

/// Fraction of frames with `max(γ_E^(1), γ_E^(2)) > δ_e`.
pub fn estimate_sop(cfg: &ProtocolConfig, links: &LinkSet, plan: &SimulationPlan) -> Result<Estimate> {
    let de = cfg.delta_e();
    estimate_functional(links, plan, |f| {
        indicator(sinr_eve_phase1(cfg, f, links).max(sinr_eve_phase2(cfg, f, links)) > de)
    })
}

/// Mean of `[C_M - C_E]⁺`.
pub fn estimate_asr(cfg: &ProtocolConfig, links: &LinkSet, plan: &SimulationPlan) -> Result<Estimate> {
    estimate_functional(links, plan, |f| secrecy_quantities(cfg, f, links).c_secrecy)
}

/// CP, SOP and ASR from one pass over the frames.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricEstimates {
    pub cp: Estimate,
    pub sop: Estimate,
    pub asr: Estimate,
}

pub fn estimate_metrics(cfg: &ProtocolConfig, links: &LinkSet, plan: &SimulationPlan) -> Result<MetricEstimates> {
    let (dt, de) = (cfg.delta_t(), cfg.delta_e());
    let e = estimate_vector(links, plan, 3, |_, f, out| {
        let gm = sinr_main(cfg, f, links);
        let ge = sinr_eve_phase1(cfg, f, links).max(sinr_eve_phase2(cfg, f, links));
        out[0] = indicator(gm > dt);
        out[1] = indicator(ge > de);
        out[2] = crate::protocol::SecrecyQuantities::from_sinrs(gm, ge).c_secrecy;
    })?;
    Ok(MetricEstimates { cp: e[0], sop: e[1], asr: e[2] })
}
