//! Seeded Monte Carlo estimates over Haar-random inputs.
//!
//! Samples are split into fixed-size chunks; chunk `i` draws from a ChaCha8
//! stream `i` under the user seed and partial statistics are merged in chunk
//! order, so results depend only on `(seed, samples)` and not on the thread
//! count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{EfficiencyReport, Method};
use crate::channel::{build_channel, DisentanglementParams, CHANNEL_REGISTER};
use crate::error::{Error, Result};
use crate::protocol::{run_on_channel, CopySlot, InputState};
use crate::quantum::{PureState, C64};

const CHUNK: u64 = 4096;

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    /// Infinite for fewer than two samples.
    pub stderr: f64,
    pub samples: u64,
}

impl McEstimate {
    /// True if `value` lies within `sigmas` standard errors (plus `slack`).
    pub fn agrees_with(&self, value: f64, sigmas: f64, slack: f64) -> bool {
        (self.mean - value).abs() <= sigmas * self.stderr + slack
    }
}

/// Running mean / sum of squared deviations, merged pairwise.
#[derive(Debug, Clone, Copy, Default)]
struct Welford {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, other: Welford) -> Welford {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        Welford {
            n,
            mean: self.mean + d * other.n as f64 / n as f64,
            m2: self.m2 + other.m2 + d * d * (self.n as f64 * other.n as f64) / n as f64,
        }
    }

    fn estimate(&self) -> McEstimate {
        let stderr = if self.n < 2 {
            f64::INFINITY
        } else {
            (self.m2 / (self.n - 1) as f64 / self.n as f64).sqrt()
        };
        McEstimate {
            mean: self.mean,
            stderr,
            samples: self.n,
        }
    }
}

/// Draws a Haar-random pure qubit: `cos θ` uniform on `[−1, 1]`, `φ` uniform.
pub fn haar_input<R: Rng + ?Sized>(rng: &mut R) -> InputState {
    let cos_theta: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let alpha = ((1.0 + cos_theta) / 2.0).sqrt();
    let beta = ((1.0 - cos_theta) / 2.0).max(0.0).sqrt();
    InputState::new(C64::new(alpha, 0.0), C64::from_polar(beta, phi)).expect("unit norm by construction")
}

/// Runs `f` over `samples` Haar inputs and returns per-statistic estimates.
fn sample_stats<const K: usize>(
    samples: u64,
    seed: u64,
    f: impl Fn(&InputState) -> Result<[f64; K]> + Sync,
) -> Result<[McEstimate; K]> {
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be positive".into()));
    }
    let chunks = samples.div_ceil(CHUNK);
    let partials = (0..chunks)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let count = CHUNK.min(samples - i * CHUNK);
            let mut acc = [Welford::default(); K];
            for _ in 0..count {
                let values = f(&haar_input(&mut rng))?;
                for (w, v) in acc.iter_mut().zip(values) {
                    w.push(v);
                }
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;

    let merged = partials.into_iter().fold([Welford::default(); K], |total, part| {
        std::array::from_fn(|k| total[k].merge(part[k]))
    });
    Ok(merged.map(|w| w.estimate()))
}

/// Monte Carlo efficiency of both copies on an arbitrary channel.
pub fn monte_carlo_on_channel(channel: &PureState, m: C64, samples: u64, seed: u64) -> Result<[McEstimate; 2]> {
    let channel = channel.reorder(&CHANNEL_REGISTER)?;
    sample_stats(samples, seed, |input| {
        let run = run_on_channel(input, &channel, m)?;
        Ok(CopySlot::BOTH.map(|c| run.weighted_fidelity_sum(c)))
    })
}

/// Monte Carlo efficiency of one copy for real parameters.
pub fn monte_carlo_cpro(
    params: &DisentanglementParams,
    m: f64,
    copy: CopySlot,
    samples: u64,
    seed: u64,
) -> Result<McEstimate> {
    let both = monte_carlo_on_channel(&build_channel(params), C64::new(m, 0.0), samples, seed)?;
    Ok(both[copy.index()])
}

/// Full Monte Carlo report: probabilities and weighted fidelities per
/// outcome, with standard errors for the two efficiencies.
pub fn monte_carlo_report(params: &DisentanglementParams, m: f64, samples: u64, seed: u64) -> Result<EfficiencyReport> {
    let channel = build_channel(params);
    let mc = C64::new(m, 0.0);
    let stats = sample_stats::<14>(samples, seed, |input| {
        let run = run_on_channel(input, &channel, mc)?;
        let mut out = [0.0; 14];
        for r in &run.outcomes {
            let j = r.outcome.index();
            out[j] = r.probability;
            out[4 + j] = r.weighted_fidelity(CopySlot::First);
            out[8 + j] = r.weighted_fidelity(CopySlot::Second);
        }
        out[12] = run.weighted_fidelity_sum(CopySlot::First);
        out[13] = run.weighted_fidelity_sum(CopySlot::Second);
        Ok(out)
    })?;
    let mean = |k: usize| stats[k].mean;
    Ok(EfficiencyReport {
        params: Some(*params),
        m,
        avg_probabilities: std::array::from_fn(mean),
        avg_fp: [
            std::array::from_fn(|j| mean(4 + j)),
            std::array::from_fn(|j| mean(8 + j)),
        ],
        cpro: [mean(12), mean(13)],
        method: Method::MonteCarlo,
        mc_stderr: Some([stats[12].stderr, stats[13].stderr]),
    })
}

/// Sampled `⟨|α|²⟩`, `⟨|α|⁴⟩` and `⟨|α|²|β|²⟩`.
pub fn sample_moments(samples: u64, seed: u64) -> Result<[McEstimate; 3]> {
    sample_stats(samples, seed, |input| {
        let (a, b) = (input.alpha().norm_sqr(), input.beta().norm_sqr());
        Ok([a, a * a, a * b])
    })
}
