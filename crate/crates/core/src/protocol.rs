//! One run of the generalized telecloning protocol.
//!
//! Alice projects the input qubit `X` and the port `P` onto the modified Bell
//! basis, both copy holders apply the outcome's Pauli correction, and each copy
//! is scored by its fidelity with the input. The ancilla is never corrected.

use std::fmt;
use std::str::FromStr;

use crate::channel::{build_channel, DisentanglementParams, CHANNEL_REGISTER};
use crate::error::{Error, Result};
use crate::quantum::{
    fidelity, measure_in_basis, pauli_x, pauli_z, DensityMatrix, PureState, QubitLabel, UnitaryMatrix, C64,
    POSITIVITY_TOL,
};

/// Alice's four possible results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Outcome {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl Outcome {
    pub const ALL: [Outcome; 4] = [Self::PhiPlus, Self::PhiMinus, Self::PsiPlus, Self::PsiMinus];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::PhiPlus => "phi+",
            Self::PhiMinus => "phi-",
            Self::PsiPlus => "psi+",
            Self::PsiMinus => "psi-",
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Outcome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|o| o.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown outcome {s:?} (expected phi+, phi-, psi+, psi-)")))
    }
}

/// Which telecloned copy is being scored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CopySlot {
    /// Bob's copy, qubit `C1`.
    First,
    /// Charlie's copy, qubit `C2`.
    Second,
}

impl CopySlot {
    pub const BOTH: [CopySlot; 2] = [Self::First, Self::Second];

    pub fn label(self) -> QubitLabel {
        match self {
            Self::First => QubitLabel::C1,
            Self::Second => QubitLabel::C2,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_number(n: u8) -> Result<Self> {
        match n {
            1 => Ok(Self::First),
            2 => Ok(Self::Second),
            _ => Err(Error::InvalidParameter(format!("copy must be 1 or 2, got {n}"))),
        }
    }
}

/// The `m`-deformed Bell basis on `(X, P)`:
///
/// ```text
/// Φ⁺ = M(|00⟩ + m|11⟩)    Φ⁻ = M(m*|00⟩ − |11⟩)
/// Ψ⁺ = M(|01⟩ + m|10⟩)    Ψ⁻ = M(m*|01⟩ − |10⟩)     M = 1/√(1+|m|²)
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct ModifiedBellBasis {
    m: C64,
    states: [PureState; 4],
}

impl ModifiedBellBasis {
    pub fn new(m: C64) -> Self {
        let norm = 1.0 / (1.0 + m.norm_sqr()).sqrt();
        let (o, l) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
        let ket = |v: [C64; 4]| {
            PureState::new(vec![QubitLabel::X, QubitLabel::P], v.iter().map(|a| a * norm).collect())
                .expect("two-qubit ket")
        };
        Self {
            m,
            states: [
                ket([l, o, o, m]),
                ket([m.conj(), o, o, -l]),
                ket([o, l, m, o]),
                ket([o, m.conj(), -l, o]),
            ],
        }
    }

    pub fn m(&self) -> C64 {
        self.m
    }

    pub fn state(&self, outcome: Outcome) -> &PureState {
        &self.states[outcome.index()]
    }

    pub fn states(&self) -> &[PureState; 4] {
        &self.states
    }
}

/// Modified Bell basis for real `m`.
pub fn modified_bell_basis(m: f64) -> ModifiedBellBasis {
    ModifiedBellBasis::new(C64::new(m, 0.0))
}

/// Pauli correction applied by both copy holders:
/// `Φ⁺ → I, Φ⁻ → σz, Ψ⁺ → σx, Ψ⁻ → σz·σx`.
pub fn correction_for(outcome: Outcome) -> UnitaryMatrix {
    match outcome {
        Outcome::PhiPlus => UnitaryMatrix::identity(1),
        Outcome::PhiMinus => pauli_z(),
        Outcome::PsiPlus => pauli_x(),
        Outcome::PsiMinus => &pauli_z() * &pauli_x(),
    }
}

/// Normalized input `α|0⟩ + β|1⟩` on qubit `X`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputState {
    alpha: C64,
    beta: C64,
}

impl InputState {
    /// Rejects inputs with `| |α|²+|β|² − 1 | > 1e-10`.
    pub fn new(alpha: C64, beta: C64) -> Result<Self> {
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > POSITIVITY_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { alpha, beta })
    }

    /// `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
    pub fn from_bloch(theta: f64, phi: f64) -> Self {
        Self {
            alpha: C64::new((theta / 2.0).cos(), 0.0),
            beta: C64::from_polar((theta / 2.0).sin(), phi),
        }
    }

    pub fn alpha(&self) -> C64 {
        self.alpha
    }

    pub fn beta(&self) -> C64 {
        self.beta
    }

    pub fn to_state(&self, label: QubitLabel) -> PureState {
        PureState::qubit(label, self.alpha, self.beta)
    }
}

/// Everything recorded for one measurement outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeRecord {
    pub outcome: Outcome,
    pub probability: f64,
    /// Uncorrected post-measurement state of `(A, C1, C2)`.
    pub residual: Option<PureState>,
    /// Corrected single-qubit states of the copies, indexed by [`CopySlot`].
    pub copies: Option<[DensityMatrix; 2]>,
    pub fidelities: Option<[f64; 2]>,
}

impl OutcomeRecord {
    pub fn fidelity(&self, copy: CopySlot) -> Option<f64> {
        self.fidelities.map(|f| f[copy.index()])
    }

    /// `P_j · F_j`, zero for impossible outcomes.
    pub fn weighted_fidelity(&self, copy: CopySlot) -> f64 {
        self.fidelity(copy).map_or(0.0, |f| f * self.probability)
    }
}

/// Result of one protocol run over all four outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub input: InputState,
    pub m: C64,
    pub outcomes: Vec<OutcomeRecord>,
}

impl RunResult {
    pub fn record(&self, outcome: Outcome) -> Option<&OutcomeRecord> {
        self.outcomes.iter().find(|r| r.outcome == outcome)
    }

    pub fn total_probability(&self) -> f64 {
        self.outcomes.iter().map(|r| r.probability).sum()
    }

    /// `Σ_j P_j F_j` for one copy; its input average is the channel efficiency.
    pub fn weighted_fidelity_sum(&self, copy: CopySlot) -> f64 {
        self.outcomes.iter().map(|r| r.weighted_fidelity(copy)).sum()
    }
}

/// Runs the protocol on the disentangled channel with real `m`.
pub fn run_protocol(input: &InputState, params: &DisentanglementParams, m: f64) -> Result<RunResult> {
    run_on_channel(input, &build_channel(params), C64::new(m, 0.0))
}

/// Runs the protocol on an arbitrary channel state over `{P, A, C1, C2}`
/// (any register order).
pub fn run_on_channel(input: &InputState, channel: &PureState, m: C64) -> Result<RunResult> {
    let channel = channel.reorder(&CHANNEL_REGISTER)?;
    let joint = input.to_state(QubitLabel::X).tensor(&channel)?;
    let basis = ModifiedBellBasis::new(m);
    let branches = measure_in_basis(&joint, basis.states(), &[QubitLabel::X, QubitLabel::P])?;
    let target = input.to_state(QubitLabel::X);

    let outcomes = Outcome::ALL
        .into_iter()
        .zip(branches)
        .map(|(outcome, branch)| {
            let Some(residual) = branch.post_state else {
                return Ok(OutcomeRecord {
                    outcome,
                    probability: branch.probability,
                    residual: None,
                    copies: None,
                    fidelities: None,
                });
            };
            let u = correction_for(outcome);
            let corrected = residual
                .apply_unitary(&u, &[QubitLabel::C1])?
                .apply_unitary(&u, &[QubitLabel::C2])?;
            let rho1 = corrected.reduced(&[QubitLabel::C1])?;
            let rho2 = corrected.reduced(&[QubitLabel::C2])?;
            let f1 = fidelity(&rho1, &target.clone().relabel(&[QubitLabel::C1])?)?;
            let f2 = fidelity(&rho2, &target.clone().relabel(&[QubitLabel::C2])?)?;
            Ok(OutcomeRecord {
                outcome,
                probability: branch.probability,
                residual: Some(residual),
                copies: Some([rho1, rho2]),
                fidelities: Some([f1, f2]),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(RunResult {
        input: *input,
        m,
        outcomes,
    })
}

/// Post-selected run keeping only `accepted` outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilisticResult {
    pub success_probability: f64,
    /// Accepted records with probabilities renormalized to the accepted set.
    pub accepted: Vec<OutcomeRecord>,
}

impl ProbabilisticResult {
    /// Fidelity of one copy averaged over the accepted outcomes.
    pub fn conditional_fidelity(&self, copy: CopySlot) -> f64 {
        self.accepted.iter().map(|r| r.weighted_fidelity(copy)).sum()
    }
}

pub fn run_probabilistic(
    input: &InputState,
    params: &DisentanglementParams,
    m: f64,
    accepted: &[Outcome],
) -> Result<ProbabilisticResult> {
    if accepted.is_empty() {
        return Err(Error::EmptyAcceptedSet);
    }
    let run = run_protocol(input, params, m)?;
    let kept: Vec<OutcomeRecord> = run
        .outcomes
        .into_iter()
        .filter(|r| accepted.contains(&r.outcome))
        .collect();
    let success_probability: f64 = kept.iter().map(|r| r.probability).sum();
    let accepted = kept
        .into_iter()
        .map(|mut r| {
            r.probability = if success_probability > 0.0 {
                r.probability / success_probability
            } else {
                0.0
            };
            r
        })
        .collect();
    Ok(ProbabilisticResult {
        success_probability,
        accepted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::TOL;

    fn real(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn standard_bell_basis_at_m_one() {
        let b = modified_bell_basis(1.0);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let phi_minus = b.state(Outcome::PhiMinus).amplitudes();
        assert!((phi_minus[0] - real(h)).norm() < TOL);
        assert!((phi_minus[3] - real(-h)).norm() < TOL);
    }

    #[test]
    fn degenerate_basis_at_m_zero() {
        let b = modified_bell_basis(0.0);
        let want = [("00", 1.0), ("11", -1.0), ("01", 1.0), ("10", -1.0)];
        for (outcome, (bits, amp)) in Outcome::ALL.into_iter().zip(want) {
            let s = b.state(outcome);
            assert!((s.amplitude_of(bits).unwrap() - real(amp)).norm() < TOL);
            assert!((s.norm_sqr() - 1.0).abs() < TOL);
        }
    }

    #[test]
    fn half_m_is_orthonormal() {
        let b = modified_bell_basis(0.5);
        let phi_plus = b.state(Outcome::PhiPlus);
        assert!((phi_plus.amplitude_of("00").unwrap() - real(1.0 / 1.25f64.sqrt())).norm() < TOL);
        assert!((phi_plus.amplitude_of("11").unwrap() - real(0.5 / 1.25f64.sqrt())).norm() < TOL);
        assert!(phi_plus.inner(b.state(Outcome::PhiMinus)).unwrap().norm() < TOL);
    }

    #[test]
    fn correction_map() {
        assert!(correction_for(Outcome::PhiPlus).approx_eq(&UnitaryMatrix::identity(1), 0.0));
        assert!(correction_for(Outcome::PhiMinus).approx_eq(&pauli_z(), 0.0));
        assert!(correction_for(Outcome::PsiPlus).approx_eq(&pauli_x(), 0.0));
        assert!(correction_for(Outcome::PsiMinus).approx_eq(&(&pauli_z() * &pauli_x()), 0.0));
    }

    #[test]
    fn outcome_names_parse() {
        for o in Outcome::ALL {
            assert_eq!(o.name().parse::<Outcome>().unwrap(), o);
        }
        assert_eq!("PSI+".parse::<Outcome>().unwrap(), Outcome::PsiPlus);
        assert!("bell".parse::<Outcome>().is_err());
    }

    #[test]
    fn ideal_point_teleclones_at_five_sixths() {
        let input = InputState::new(real(0.6), C64::new(0.0, 0.8)).unwrap();
        let run = run_protocol(&input, &DisentanglementParams::IDEAL, 1.0).unwrap();
        for r in &run.outcomes {
            assert!((r.probability - 0.25).abs() < TOL);
            let [f1, f2] = r.fidelities.unwrap();
            assert!((f1 - 5.0 / 6.0).abs() < TOL);
            assert!((f2 - 5.0 / 6.0).abs() < TOL);
        }
    }

    #[test]
    fn product_channel_outcomes() {
        // n_C1 = n_C2 = 0 collapses the channel to |0000⟩
        let input = InputState::new(real(1.0), real(0.0)).unwrap();
        let params = DisentanglementParams::new(1.0, 1.0, 0.0, 0.0);
        let run = run_protocol(&input, &params, 1.0).unwrap();
        assert!((run.total_probability() - 1.0).abs() < TOL);
        // only Φ± fire for |0⟩ ⊗ |0⟩_P, and they leave the copies in |0⟩
        for r in &run.outcomes {
            match r.outcome {
                Outcome::PhiPlus | Outcome::PhiMinus => {
                    assert!((r.probability - 0.5).abs() < TOL);
                    assert!((r.fidelity(CopySlot::First).unwrap() - 1.0).abs() < TOL);
                }
                _ => assert!(r.fidelities.is_none()),
            }
        }
    }

    #[test]
    fn port_compensation_single_run() {
        let input = InputState::new(real(0.6), real(0.8)).unwrap();
        let params = DisentanglementParams::new(0.5, 1.0, 1.0, 1.0);
        let run = run_protocol(&input, &params, 0.5).unwrap();
        for o in [Outcome::PhiMinus, Outcome::PsiPlus] {
            let [f1, f2] = run.record(o).unwrap().fidelities.unwrap();
            assert!((f1 - 5.0 / 6.0).abs() < TOL);
            assert!((f2 - 5.0 / 6.0).abs() < TOL);
        }
    }

    #[test]
    fn probabilistic_mode() {
        let input = InputState::from_bloch(1.1, 0.4);
        let all = run_probabilistic(&input, &DisentanglementParams::IDEAL, 1.0, &Outcome::ALL).unwrap();
        assert!((all.success_probability - 1.0).abs() < TOL);

        let half = run_probabilistic(
            &input,
            &DisentanglementParams::IDEAL,
            1.0,
            &[Outcome::PhiMinus, Outcome::PsiPlus],
        )
        .unwrap();
        assert!((half.success_probability - 0.5).abs() < TOL);
        assert!((half.conditional_fidelity(CopySlot::First) - 5.0 / 6.0).abs() < TOL);

        assert_eq!(
            run_probabilistic(&input, &DisentanglementParams::IDEAL, 1.0, &[]),
            Err(Error::EmptyAcceptedSet)
        );
    }

    #[test]
    fn rejects_unnormalized_input() {
        assert!(matches!(
            InputState::new(real(1.0), real(0.1)),
            Err(Error::NotNormalized(_))
        ));
    }
}
