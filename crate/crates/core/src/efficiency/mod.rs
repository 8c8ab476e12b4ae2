//! Input-averaged protocol efficiency.
//!
//! The efficiency of copy `k` is `C_k = Σ_j ⟨P_j F_{k,j}⟩`, averaged over
//! Haar-uniform pure inputs. Three independent routes are provided:
//!
//! * closed forms in the channel parameters (this module),
//! * an exact moment average built from protocol runs at a handful of probe
//!   inputs ([`moment_average`]),
//! * seeded Monte Carlo over sampled inputs ([`monte_carlo_cpro`]).

mod closed_form;
mod moments;
mod sampling;

pub use closed_form::{avg_fp, avg_probabilities, cpro_ancilla, cpro_copy, cpro_general, cpro_port};
pub use moments::{moment_average, moment_average_report, InputMoments, HAAR_MOMENTS};
pub use sampling::{
    haar_input, monte_carlo_cpro, monte_carlo_on_channel, monte_carlo_report, sample_moments, McEstimate,
};

use crate::channel::DisentanglementParams;
use crate::protocol::CopySlot;

/// How an [`EfficiencyReport`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    MomentAverage,
    MonteCarlo,
}

/// Averaged probabilities, weighted fidelities and efficiencies for one
/// `(params, m)` point. Per-outcome arrays follow `Outcome::ALL`.
#[derive(Debug, Clone, PartialEq)]
pub struct EfficiencyReport {
    pub params: Option<DisentanglementParams>,
    pub m: f64,
    pub avg_probabilities: [f64; 4],
    /// `⟨P_j F_{k,j}⟩`, indexed `[copy][outcome]`.
    pub avg_fp: [[f64; 4]; 2],
    pub cpro: [f64; 2],
    pub method: Method,
    /// Standard error of each `cpro` entry for Monte Carlo reports.
    pub mc_stderr: Option<[f64; 2]>,
}

impl EfficiencyReport {
    pub fn cpro(&self, copy: CopySlot) -> f64 {
        self.cpro[copy.index()]
    }
}

/// Closed-form report for real parameters.
pub fn closed_form_report(params: &DisentanglementParams, m: f64) -> EfficiencyReport {
    let fp = [avg_fp(params, m, CopySlot::First), avg_fp(params, m, CopySlot::Second)];
    EfficiencyReport {
        params: Some(*params),
        m,
        avg_probabilities: avg_probabilities(params, m),
        avg_fp: fp,
        cpro: [
            cpro_general(params, m, CopySlot::First),
            cpro_general(params, m, CopySlot::Second),
        ],
        method: Method::ClosedForm,
        mc_stderr: None,
    }
}

/// Differences below this are treated as ties when maximizing over `m`.
const TIE_TOLERANCE: f64 = 1e-14;

/// Maximizes `f` over `m ∈ [0, 1]`: 0.01 grid scan, then golden-section
/// refinement in the neighbouring cells. Returns the arg-max.
pub fn maximize_over_unit_interval(f: impl Fn(f64) -> f64) -> f64 {
    let mut best = 0.0;
    let mut best_val = f(0.0);
    for k in 1..=100 {
        let m = k as f64 / 100.0;
        let v = f(m);
        if v > best_val + TIE_TOLERANCE {
            best = m;
            best_val = v;
        }
    }

    let (mut lo, mut hi) = ((best - 0.01f64).max(0.0), (best + 0.01f64).min(1.0));
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        }
    }
    let refined = 0.5 * (lo + hi);
    if f(refined) > best_val + TIE_TOLERANCE {
        refined
    } else {
        best
    }
}

/// Arg-max over `m ∈ [0, 1]` of the first copy's efficiency when only the
/// copies are disentangled.
pub fn optimal_m_for_copy_case(n_c1: f64, n_c2: f64) -> f64 {
    maximize_over_unit_interval(|m| cpro_copy(n_c1, n_c2, m, CopySlot::First))
}
