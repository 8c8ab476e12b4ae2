//! Exact input averages from a few protocol runs.
//!
//! For a phase-invariant input ensemble, `P_j` averages to a linear function
//! of `u = |α|²` and `P_j F_j` to a quadratic one, so three probe values of
//! `u` (with the phase averaged out at `u = 1/2`) determine every average
//! through the moments of `u`.

use std::f64::consts::FRAC_PI_2;

use super::{EfficiencyReport, Method};
use crate::channel::{build_channel, DisentanglementParams};
use crate::error::Result;
use crate::protocol::{run_on_channel, CopySlot, InputState, RunResult};
use crate::quantum::{PureState, C64};

/// Moments of `u = |α|²` for a phase-invariant input ensemble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputMoments {
    /// `⟨|α|²⟩`
    pub m2: f64,
    /// `⟨|α|⁴⟩`
    pub m4: f64,
    /// `⟨|α|²|β|²⟩`
    pub mab: f64,
}

/// Uniform (Haar) distribution on the Bloch sphere.
pub const HAAR_MOMENTS: InputMoments = InputMoments {
    m2: 0.5,
    m4: 1.0 / 3.0,
    mab: 1.0 / 6.0,
};

impl InputMoments {
    /// `⟨|β|⁴⟩ = 1 − 2⟨|α|²⟩ + ⟨|α|⁴⟩`.
    pub fn m4_beta(&self) -> f64 {
        1.0 - 2.0 * self.m2 + self.m4
    }
}

struct Probe {
    probabilities: [f64; 4],
    fp: [[f64; 4]; 2],
}

impl Probe {
    fn from_runs(runs: &[RunResult]) -> Self {
        let w = 1.0 / runs.len() as f64;
        let mut probe = Probe {
            probabilities: [0.0; 4],
            fp: [[0.0; 4]; 2],
        };
        for run in runs {
            for r in &run.outcomes {
                let j = r.outcome.index();
                probe.probabilities[j] += w * r.probability;
                for copy in CopySlot::BOTH {
                    probe.fp[copy.index()][j] += w * r.weighted_fidelity(copy);
                }
            }
        }
        probe
    }
}

/// Averages of `P_j` and `P_j F_{k,j}` on `channel` over an input ensemble
/// with the given moments.
pub fn moment_average(channel: &PureState, m: C64, moments: &InputMoments) -> Result<EfficiencyReport> {
    let run = |input: InputState| run_on_channel(&input, channel, m);
    let one = run(InputState::from_bloch(0.0, 0.0))?;
    let zero = run(InputState::from_bloch(std::f64::consts::PI, 0.0))?;
    let half = (0..4)
        .map(|k| run(InputState::from_bloch(FRAC_PI_2, k as f64 * FRAC_PI_2)))
        .collect::<Result<Vec<_>>>()?;

    let (a, c, h) = (
        Probe::from_runs(&[one]),
        Probe::from_runs(&[zero]),
        Probe::from_runs(&half),
    );

    let mut avg_probabilities = [0.0; 4];
    let mut avg_fp = [[0.0; 4]; 2];
    for j in 0..4 {
        avg_probabilities[j] = a.probabilities[j] * moments.m2 + c.probabilities[j] * (1.0 - moments.m2);
        for (k, row) in avg_fp.iter_mut().enumerate() {
            let (fa, fc) = (a.fp[k][j], c.fp[k][j]);
            let fb = 4.0 * h.fp[k][j] - fa - fc;
            row[j] = fa * moments.m4 + fb * moments.mab + fc * moments.m4_beta();
        }
    }
    let cpro = [avg_fp[0].iter().sum(), avg_fp[1].iter().sum()];
    Ok(EfficiencyReport {
        params: None,
        m: m.re,
        avg_probabilities,
        avg_fp,
        cpro,
        method: Method::MomentAverage,
        mc_stderr: None,
    })
}

/// Haar moment average for real parameters and real `m`.
pub fn moment_average_report(params: &DisentanglementParams, m: f64) -> Result<EfficiencyReport> {
    let mut report = moment_average(&build_channel(params), C64::new(m, 0.0), &HAAR_MOMENTS)?;
    report.params = Some(*params);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::efficiency::closed_form_report;

    #[test]
    fn haar_moments_are_consistent() {
        assert!((HAAR_MOMENTS.m2 - HAAR_MOMENTS.m4 - HAAR_MOMENTS.mab).abs() < 1e-15);
        assert!((HAAR_MOMENTS.m4_beta() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn matches_closed_forms() {
        for (p, m) in [
            (DisentanglementParams::IDEAL, 1.0),
            (DisentanglementParams::new(0.3, 0.8, 0.6, 0.9), 0.7),
            (DisentanglementParams::new(0.0, 0.4, 1.0, 0.2), 0.15),
        ] {
            let exact = moment_average_report(&p, m).unwrap();
            let closed = closed_form_report(&p, m);
            for j in 0..4 {
                assert!((exact.avg_probabilities[j] - closed.avg_probabilities[j]).abs() < 1e-12);
                for k in 0..2 {
                    assert!(
                        (exact.avg_fp[k][j] - closed.avg_fp[k][j]).abs() < 1e-12,
                        "{p} m={m} k={k} j={j}"
                    );
                }
            }
        }
    }
}
