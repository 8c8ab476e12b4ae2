//! Self-checks comparing closed forms against the simulator.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::{build_channel, DisentanglementParams};
use crate::conversion::{
    apply_local_rotation, convert_borrowed, convert_global, convert_local, converted_efficiencies,
    post_global_efficiencies, post_local_efficiencies, threshold_by_bisection, transition_threshold, ConversionMode,
    OUTPUT_REGISTER,
};
use crate::efficiency::{
    closed_form_report, cpro_ancilla, cpro_copy, cpro_general, cpro_port, moment_average_report, monte_carlo_cpro,
    monte_carlo_on_channel, sample_moments, HAAR_MOMENTS,
};
use crate::entanglement::{eg1_pair, eg1_single, global_entanglement, PairKind};
use crate::error::Result;
use crate::protocol::CopySlot;
use crate::quantum::{PureState, C64, TOL};
use crate::sweep::grid;

/// One named check with its worst observed error.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub max_error: f64,
    pub tolerance: f64,
}

impl CheckResult {
    fn new(name: impl Into<String>, max_error: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            max_error,
            tolerance,
        }
    }

    pub fn passed(&self) -> bool {
        self.max_error <= self.tolerance
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "ok" } else { "FAIL" };
        write!(
            f,
            "{status:4} {:<48} max error {:.3e} (tol {:.1e})",
            self.name, self.max_error, self.tolerance
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Formulas,
    MonteCarlo,
    Conversion,
}

impl std::str::FromStr for Suite {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "formulas" => Ok(Self::Formulas),
            "montecarlo" => Ok(Self::MonteCarlo),
            "conversion" => Ok(Self::Conversion),
            _ => Err(crate::Error::InvalidParameter(format!("unknown suite {s:?}"))),
        }
    }
}

/// Random parameters and `m`, each uniform on `[0, 1]`.
pub fn random_point<R: Rng + ?Sized>(rng: &mut R) -> (DisentanglementParams, f64) {
    let p = DisentanglementParams::from_array(std::array::from_fn(|_| rng.random::<f64>()));
    (p, rng.random())
}

fn worst(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

pub fn run_suite(suite: Suite, seed: u64, samples: u64) -> Result<Vec<CheckResult>> {
    match suite {
        Suite::Formulas => formulas(seed),
        Suite::MonteCarlo => montecarlo(seed, samples),
        Suite::Conversion => conversion(),
    }
}

fn formulas(seed: u64) -> Result<Vec<CheckResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<_> = (0..200).map(|_| random_point(&mut rng)).collect();

    let (mut e_cpro, mut e_terms, mut e_norm) = (0.0f64, 0.0f64, 0.0f64);
    for (p, m) in &points {
        let exact = moment_average_report(p, *m)?;
        let closed = closed_form_report(p, *m);
        for k in 0..2 {
            e_cpro = e_cpro.max((exact.cpro[k] - closed.cpro[k]).abs());
            for j in 0..4 {
                e_terms = e_terms.max((exact.avg_fp[k][j] - closed.avg_fp[k][j]).abs());
            }
        }
        for j in 0..4 {
            e_terms = e_terms.max((exact.avg_probabilities[j] - closed.avg_probabilities[j]).abs());
        }
        e_norm = e_norm.max((exact.avg_probabilities.iter().sum::<f64>() - 1.0).abs());
    }

    let ns = grid(0.0, 1.0, 0.05)?;
    let mut e_special = 0.0f64;
    for &x in &ns {
        for &m in &ns {
            for copy in CopySlot::BOTH {
                let g = |p: DisentanglementParams| cpro_general(&p, m, copy);
                e_special = e_special
                    .max((g(DisentanglementParams::new(x, 1.0, 1.0, 1.0)) - cpro_port(x, m)).abs())
                    .max((g(DisentanglementParams::new(1.0, x, 1.0, 1.0)) - cpro_ancilla(x, m)).abs());
                for &y in &ns {
                    let c = g(DisentanglementParams::new(1.0, 1.0, x, y)) - cpro_copy(x, y, m, copy);
                    e_special = e_special.max(c.abs());
                }
            }
        }
    }

    let eg = |p: DisentanglementParams| global_entanglement(&build_channel(&p)).value();
    let mut e_eg = 0.0f64;
    for &x in &ns {
        for label in 0..4 {
            let mut n = [1.0; 4];
            n[label] = x;
            e_eg = e_eg.max((eg(DisentanglementParams::from_array(n)) - eg1_single(x).value()).abs());
        }
        for &y in &ns {
            let same = eg1_pair(x, y, PairKind::SameRole).value();
            let mixed = eg1_pair(x, y, PairKind::Mixed).value();
            e_eg = e_eg
                .max((eg(DisentanglementParams::new(y, x, 1.0, 1.0)) - same).abs())
                .max((eg(DisentanglementParams::new(1.0, 1.0, x, y)) - same).abs())
                .max((eg(DisentanglementParams::new(x, 1.0, y, 1.0)) - mixed).abs())
                .max((eg(DisentanglementParams::new(1.0, x, 1.0, y)) - mixed).abs());
        }
    }

    let ideal = moment_average_report(&DisentanglementParams::IDEAL, 1.0)?;
    let e_ideal = worst(
        ideal
            .avg_probabilities
            .iter()
            .map(|p| (p - 0.25).abs())
            .chain(ideal.avg_fp.iter().flatten().map(|f| (f - 5.0 / 24.0).abs()))
            .chain(ideal.cpro.iter().map(|c| (c - 5.0 / 6.0).abs())),
    );

    Ok(vec![
        CheckResult::new("ideal point (exact averages)", e_ideal, TOL),
        CheckResult::new("efficiency: closed form vs moment average", e_cpro, TOL),
        CheckResult::new("per-outcome averages vs moment average", e_terms, TOL),
        CheckResult::new("probability normalization", e_norm, TOL),
        CheckResult::new("port/ancilla/copy forms vs general form", e_special, TOL),
        CheckResult::new("global entanglement forms vs channel", e_eg, TOL),
    ])
}

fn montecarlo(seed: u64, samples: u64) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let ideal = monte_carlo_on_channel(
        &build_channel(&DisentanglementParams::IDEAL),
        C64::new(1.0, 0.0),
        samples,
        seed,
    )?;
    for (k, est) in ideal.iter().enumerate() {
        out.push(CheckResult::new(
            format!("ideal point, copy {}", k + 1),
            (est.mean - 5.0 / 6.0).abs(),
            4.0 * est.stderr + 1e-12,
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    for k in 0..3 {
        let (p, m) = random_point(&mut rng);
        let est = monte_carlo_cpro(&p, m, CopySlot::First, samples / 10 + 2, seed.wrapping_add(k + 1))?;
        out.push(CheckResult::new(
            format!(
                "random point {k}: n=({:.3},{:.3},{:.3},{:.3}) m={m:.3}",
                p.port, p.ancilla, p.copy1, p.copy2
            ),
            (est.mean - cpro_general(&p, m, CopySlot::First)).abs(),
            4.0 * est.stderr + 1e-12,
        ));
    }
    let [m2, m4, mab] = sample_moments(samples, seed)?;
    for (name, est, want) in [
        ("<|a|^2>", m2, HAAR_MOMENTS.m2),
        ("<|a|^4>", m4, HAAR_MOMENTS.m4),
        ("<|ab|^2>", mab, HAAR_MOMENTS.mab),
    ] {
        out.push(CheckResult::new(
            format!("Haar moment {name}"),
            (est.mean - want).abs(),
            4.0 * est.stderr,
        ));
    }
    Ok(out)
}

fn pair_state(g: f64) -> PureState {
    let z = C64::new(0.0, 0.0);
    let norm = (1.0 + g * g).sqrt();
    let mut amps = vec![z; 16];
    amps[0] = C64::new(1.0 / norm, 0.0);
    amps[0b1100] = C64::new(g / norm, 0.0);
    PureState::new(OUTPUT_REGISTER.to_vec(), amps).expect("16 amplitudes")
}

fn conversion() -> Result<Vec<CheckResult>> {
    let ns = grid(0.0, 1.0, 0.01)?;
    let (mut e_global, mut e_local, mut e_pair_eff) = (0.0f64, 0.0f64, 0.0f64);
    for &n in &ns {
        let g = convert_global(n)?;
        e_global = e_global.max(1.0 - g.final_state.overlap(&pair_state(n))?);
        let l = convert_local(n)?;
        e_local = e_local
            .max(1.0 - l.final_state.overlap(&pair_state(n / 2f64.sqrt()))?)
            .max((l.gtp_parameter - n / 2f64.sqrt()).abs());
        e_pair_eff = e_pair_eff.max(g.closed_form_gap()).max(l.closed_form_gap());
    }

    let (mut e_borrow, mut order_violation) = (0.0f64, 0.0f64);
    for &x in &ns {
        for mode in [ConversionMode::Local, ConversionMode::Global] {
            let r = convert_borrowed(mode, x)?;
            e_borrow = e_borrow.max(r.closed_form_gap());
            order_violation = order_violation.max(r.cpro_2 - r.cpro_1);
        }
    }

    let mut e_threshold = 0.0f64;
    let mut consistency = 0.0f64;
    for mode in [ConversionMode::Local, ConversionMode::Global] {
        let t = transition_threshold(mode);
        e_threshold = e_threshold.max((threshold_by_bisection(mode) - t).abs());
        for x in grid(0.0, 1.0, 0.001)? {
            let c1 = match mode {
                ConversionMode::Local => post_local_efficiencies(x).0,
                ConversionMode::Global => post_global_efficiencies(x).0,
            };
            if (c1 >= 5.0 / 6.0) != (x <= t) {
                consistency = 1.0;
            }
        }
    }

    let channel = build_channel(&DisentanglementParams::new(1.0, 1.0, 1.0, 0.0));
    let mut best = (f64::NEG_INFINITY, 0.0);
    for q in grid(0.0, 2.0, 0.01)? {
        let c1 = converted_efficiencies(&apply_local_rotation(&channel, C64::new(q, 0.0))?)?[0];
        if c1 > best.0 + 1e-14 {
            best = (c1, q);
        }
    }

    Ok(vec![
        CheckResult::new("global conversion: 1 - fidelity with pair", e_global, TOL),
        CheckResult::new("local conversion: state and pair parameter", e_local, TOL),
        CheckResult::new("converted pair efficiencies vs closed form", e_pair_eff, TOL),
        CheckResult::new("borrowed conversions vs closed forms", e_borrow, TOL),
        CheckResult::new("copy 1 at least copy 2 after conversion", order_violation.max(0.0), TOL),
        CheckResult::new("thresholds: bisection vs closed form", e_threshold, 1e-10),
        CheckResult::new("threshold consistency on 0.001 grid", consistency, 0.0),
        CheckResult::new("local rotation optimal at q = 1", (best.1 - 1.0f64).abs(), 1e-12),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formulas_and_conversion_pass() {
        for suite in [Suite::Formulas, Suite::Conversion] {
            for check in run_suite(suite, 1, 0).unwrap() {
                assert!(check.passed(), "{check}");
            }
        }
    }

    #[test]
    fn small_montecarlo_passes() {
        for check in run_suite(Suite::MonteCarlo, 5, 20_000).unwrap() {
            assert!(check.passed(), "{check}");
        }
    }
}
