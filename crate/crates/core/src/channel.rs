//! The four-qubit telecloning channel and its disentangled family.
//!
//! The ideal channel is `(|0⟩_P|φ₀⟩ + |1⟩_P|φ₁⟩)/√2` with `φ₀, φ₁` built from
//! symmetric Dicke-type states of the ancilla and the two copies. Applying the
//! single-qubit filter `|0⟩ → |0⟩, |1⟩ → n|1⟩` (then renormalizing) to each
//! channel qubit yields the four-parameter family used throughout the crate.

use std::fmt;

use crate::error::{Error, Result};
use crate::quantum::{anon_register, PureState, QubitLabel, C64};

/// Register order of every channel state produced here.
pub const CHANNEL_REGISTER: [QubitLabel; 4] = [QubitLabel::P, QubitLabel::A, QubitLabel::C1, QubitLabel::C2];

/// Disentanglement parameters of the port, ancilla and copy qubits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisentanglementParams {
    pub port: f64,
    pub ancilla: f64,
    pub copy1: f64,
    pub copy2: f64,
}

impl DisentanglementParams {
    pub const IDEAL: Self = Self::new(1.0, 1.0, 1.0, 1.0);

    pub const fn new(port: f64, ancilla: f64, copy1: f64, copy2: f64) -> Self {
        Self {
            port,
            ancilla,
            copy1,
            copy2,
        }
    }

    pub fn from_array(n: [f64; 4]) -> Self {
        Self::new(n[0], n[1], n[2], n[3])
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.port, self.ancilla, self.copy1, self.copy2]
    }

    /// Parameter attached to a channel qubit.
    pub fn get(&self, label: QubitLabel) -> Option<f64> {
        match label {
            QubitLabel::P => Some(self.port),
            QubitLabel::A => Some(self.ancilla),
            QubitLabel::C1 => Some(self.copy1),
            QubitLabel::C2 => Some(self.copy2),
            _ => None,
        }
    }

    /// Copy of `self` with one channel qubit's parameter replaced.
    pub fn with(mut self, label: QubitLabel, value: f64) -> Result<Self> {
        match label {
            QubitLabel::P => self.port = value,
            QubitLabel::A => self.ancilla = value,
            QubitLabel::C1 => self.copy1 = value,
            QubitLabel::C2 => self.copy2 = value,
            other => return Err(Error::UnknownLabel(other)),
        }
        Ok(self)
    }

    /// `n_C1 ↔ n_C2`.
    pub fn swap_copies(self) -> Self {
        Self::new(self.port, self.ancilla, self.copy2, self.copy1)
    }

    /// Sweep-range check used by the analytics: finite and `|n| ≤ 1`.
    pub fn check_physical(&self) -> Result<()> {
        for (name, v) in ["n_P", "n_A", "n_C1", "n_C2"].iter().zip(self.as_array()) {
            if !v.is_finite() || v.abs() > 1.0 {
                return Err(Error::InvalidParameter(format!("{name} = {v} outside [-1, 1]")));
            }
        }
        Ok(())
    }
}

impl Default for DisentanglementParams {
    fn default() -> Self {
        Self::IDEAL
    }
}

impl fmt::Display for DisentanglementParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.port, self.ancilla, self.copy1, self.copy2)
    }
}

/// Symmetric normalized state of `qubits` anonymous qubits with `ones`
/// excitations: the uniform superposition of all bit strings of weight `ones`.
pub fn symmetric_state(qubits: usize, ones: usize) -> Result<PureState> {
    symmetric_state_on(&anon_register(qubits), ones)
}

/// [`symmetric_state`] over the given labels.
pub fn symmetric_state_on(labels: &[QubitLabel], ones: usize) -> Result<PureState> {
    let qubits = labels.len();
    if ones > qubits || qubits > 4 {
        return Err(Error::SymmetricIndexOutOfRange { qubits, ones });
    }
    let dim = 1usize << qubits;
    let count = (0..dim).filter(|i| i.count_ones() as usize == ones).count();
    let amp = C64::new(1.0 / (count as f64).sqrt(), 0.0);
    let amplitudes = (0..dim)
        .map(|i| {
            if i.count_ones() as usize == ones {
                amp
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .collect();
    PureState::new(labels.to_vec(), amplitudes)
}

/// Optimal 1→2 telecloning channel over `[P, A, C1, C2]`, assembled from its
/// symmetric-state definition.
pub fn build_ideal_channel() -> PureState {
    use QubitLabel::{A, C1, C2, P};
    let sym = |labels: &[QubitLabel], ones| symmetric_state_on(labels, ones).expect("valid symmetric index");
    let weight = |j: usize| C64::new(((2 - j) as f64 / 3.0).sqrt(), 0.0);

    // φ₀ = Σ_j α_j |{0,1-j},{1,j}⟩_A ⊗ |{0,2-j},{1,j}⟩_C
    // φ₁ = Σ_j α_j |{0,j},{1,1-j}⟩_A ⊗ |{0,j},{1,2-j}⟩_C
    let branch = |flip: bool| {
        let terms: Vec<(C64, PureState)> = (0..2)
            .map(|j| {
                let (a_ones, c_ones) = if flip { (1 - j, 2 - j) } else { (j, j) };
                let ket = sym(&[A], a_ones).tensor(&sym(&[C1, C2], c_ones)).expect("disjoint");
                (weight(j), ket)
            })
            .collect();
        let refs: Vec<(C64, &PureState)> = terms.iter().map(|(c, s)| (*c, s)).collect();
        PureState::linear_combination(&refs).expect("shared register")
    };
    let phi0 = branch(false);
    let phi1 = branch(true);

    let zero = PureState::qubit(P, C64::new(1.0, 0.0), C64::new(0.0, 0.0));
    let one = PureState::qubit(P, C64::new(0.0, 0.0), C64::new(1.0, 0.0));
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let left = zero.tensor(&phi0).expect("disjoint");
    let right = one.tensor(&phi1).expect("disjoint");
    PureState::linear_combination(&[(h, &left), (h, &right)])
        .and_then(|s| s.reorder(&CHANNEL_REGISTER))
        .expect("channel assembly")
}

/// Filters `target` by `|1⟩ → n|1⟩` and renormalizes.
pub fn apply_disentanglement(s: &PureState, target: QubitLabel, n: C64) -> Result<PureState> {
    s.scale_excited(target, n)?.normalize()
}

/// Disentangled channel in closed form for real parameters.
pub fn build_channel(params: &DisentanglementParams) -> PureState {
    let n = params.as_array().map(|v| C64::new(v, 0.0));
    build_channel_complex(n)
}

/// Disentangled channel in closed form for complex parameters
/// `[n_P, n_A, n_C1, n_C2]`.
pub fn build_channel_complex(n: [C64; 4]) -> PureState {
    let [np, na, n1, n2] = n;
    let half = C64::new(0.5, 0.0);
    let mut amplitudes = vec![C64::new(0.0, 0.0); 16];
    let mut set = |bits: &str, v: C64| amplitudes[usize::from_str_radix(bits, 2).unwrap()] = v;
    set("0000", C64::new(1.0, 0.0));
    set("1010", np * n1 * half);
    set("0110", na * n1 * half);
    set("1001", np * n2 * half);
    set("0101", na * n2 * half);
    set("1111", np * na * n1 * n2);

    let norm = channel_normalization(n);
    amplitudes.iter_mut().for_each(|a| *a *= norm);
    PureState::new(CHANNEL_REGISTER.to_vec(), amplitudes).expect("16 amplitudes on 4 qubits")
}

/// Normalization constant of the disentangled channel.
pub fn channel_normalization(n: [C64; 4]) -> f64 {
    let [np, na, n1, n2] = n.map(|z| z.norm_sqr());
    (1.0 + np * n1 / 4.0 + na * n1 / 4.0 + np * n2 / 4.0 + na * n2 / 4.0 + np * na * n1 * n2).powf(-0.5)
}

/// Applies the single-qubit filters to the ideal channel one qubit at a time,
/// in the order given.
pub fn disentangle_sequentially(params: &DisentanglementParams, order: &[QubitLabel]) -> Result<PureState> {
    order.iter().try_fold(build_ideal_channel(), |s, &label| {
        let n = params.get(label).ok_or(Error::UnknownLabel(label))?;
        apply_disentanglement(&s, label, C64::new(n, 0.0))
    })
}
