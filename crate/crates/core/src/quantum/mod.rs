//! Dense state-vector quantum mechanics on small labelled registers.
//!
//! A register is an ordered list of [`QubitLabel`]s. Amplitude index `i` of a
//! [`PureState`] encodes the basis ket whose bit string is the big-endian
//! binary expansion of `i` over the register order, so the first label is the
//! most significant bit. Every operation that touches a subset of qubits takes
//! labels, never raw positions; reordering is handled internally.

use std::fmt;

mod density;
mod measurement;
mod operator;
mod state;

pub use density::DensityMatrix;
pub use measurement::{measure_in_basis, MeasurementBranch};
pub use operator::{pauli_x, pauli_z, UnitaryMatrix};
pub use state::PureState;

pub use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Largest register handled by the dense kernels.
pub const MAX_QUBITS: usize = 6;

/// Tolerance for deterministic algebra (norms, unitarity, Hermiticity).
pub const TOL: f64 = 1e-12;

/// Tolerance for eigenvalue positivity and fidelity clamping.
pub const POSITIVITY_TOL: f64 = 1e-10;

/// Branches with Born probability below this carry no post-measurement state.
pub const ZERO_PROBABILITY: f64 = 1e-14;

/// Identity of a qubit inside a register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QubitLabel {
    /// Alice's qubit to be telecloned.
    X,
    /// Port qubit of the channel.
    P,
    /// Ancillary qubit of the channel.
    A,
    /// Bob's copy.
    C1,
    /// Charlie's copy.
    C2,
    /// Generic qubit for states not tied to the protocol.
    Anon(usize),
}

impl fmt::Display for QubitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::X => write!(f, "X"),
            Self::P => write!(f, "P"),
            Self::A => write!(f, "A"),
            Self::C1 => write!(f, "C1"),
            Self::C2 => write!(f, "C2"),
            Self::Anon(k) => write!(f, "q{k}"),
        }
    }
}

/// `n` anonymous labels `q0, q1, ...`.
pub fn anon_register(n: usize) -> Vec<QubitLabel> {
    (0..n).map(QubitLabel::Anon).collect()
}

/// Checks uniqueness and size of a register.
pub(crate) fn check_register(register: &[QubitLabel]) -> Result<()> {
    if register.len() > MAX_QUBITS {
        return Err(Error::TooManyQubits(register.len()));
    }
    for (k, label) in register.iter().enumerate() {
        if register[..k].contains(label) {
            return Err(Error::DuplicateLabel(*label));
        }
    }
    Ok(())
}

/// Position of every label in `labels` within `register`.
pub(crate) fn positions(register: &[QubitLabel], labels: &[QubitLabel]) -> Result<Vec<usize>> {
    let mut out = Vec::with_capacity(labels.len());
    for label in labels {
        if out.iter().any(|&p| register[p] == *label) {
            return Err(Error::DuplicateLabel(*label));
        }
        let p = register
            .iter()
            .position(|l| l == label)
            .ok_or(Error::UnknownLabel(*label))?;
        out.push(p);
    }
    Ok(out)
}

/// Bit mask of register position `pos` in an `n`-qubit index.
#[inline]
pub(crate) fn bit_mask(n: usize, pos: usize) -> usize {
    1 << (n - 1 - pos)
}

/// Scatters the bits of `sub` (a `masks.len()`-bit big-endian index) into
/// the positions given by `masks`.
#[inline]
pub(crate) fn scatter(sub: usize, masks: &[usize]) -> usize {
    let k = masks.len();
    masks
        .iter()
        .enumerate()
        .filter(|(j, _)| sub & (1 << (k - 1 - j)) != 0)
        .fold(0, |acc, (_, m)| acc | m)
}

/// Tensor product of two states on disjoint registers.
pub fn tensor_product(a: &PureState, b: &PureState) -> Result<PureState> {
    a.tensor(b)
}

/// Applies `u` to the sub-register `targets` (first target = most significant
/// bit of `u`'s index), identity elsewhere.
pub fn apply_unitary(s: &PureState, u: &UnitaryMatrix, targets: &[QubitLabel]) -> Result<PureState> {
    s.apply_unitary(u, targets)
}

/// Reduced density matrix of `s` on `keep`, in the order given.
pub fn partial_trace(s: &PureState, keep: &[QubitLabel]) -> Result<DensityMatrix> {
    s.reduced(keep)
}

/// `⟨φ|ρ|φ⟩` for a target pure state on the same register as `rho`.
///
/// Values within [`POSITIVITY_TOL`] outside `[0, 1]` are clamped onto the
/// interval; anything further out is returned unchanged.
pub fn fidelity(rho: &DensityMatrix, phi: &PureState) -> Result<f64> {
    let phi = phi.reorder(rho.register()).map_err(|_| {
        Error::RegisterMismatch(format!(
            "density matrix on {:?}, target on {:?}",
            rho.register(),
            phi.register()
        ))
    })?;
    let amps = phi.amplitudes();
    let m = rho.matrix();
    let mut acc = C64::new(0.0, 0.0);
    for (i, ai) in amps.iter().enumerate() {
        for (j, aj) in amps.iter().enumerate() {
            acc += ai.conj() * m[(i, j)] * aj;
        }
    }
    let f = acc.re;
    Ok(if (-POSITIVITY_TOL..0.0).contains(&f) {
        0.0
    } else if f > 1.0 && f <= 1.0 + POSITIVITY_TOL {
        1.0
    } else {
        f
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scatter_places_bits_big_endian() {
        // 3-qubit register, targets at positions 2 and 0
        let masks = [bit_mask(3, 2), bit_mask(3, 0)];
        assert_eq!(scatter(0b00, &masks), 0b000);
        assert_eq!(scatter(0b10, &masks), 0b001);
        assert_eq!(scatter(0b01, &masks), 0b100);
        assert_eq!(scatter(0b11, &masks), 0b101);
    }

    #[test]
    fn duplicate_labels_rejected() {
        let reg = [QubitLabel::P, QubitLabel::A, QubitLabel::P];
        assert_eq!(check_register(&reg), Err(Error::DuplicateLabel(QubitLabel::P)));
        assert_eq!(check_register(&anon_register(7)), Err(Error::TooManyQubits(7)));
    }

    #[test]
    fn fidelity_basics() {
        let zero = PureState::qubit(QubitLabel::X, C64::new(1.0, 0.0), C64::new(0.0, 0.0));
        assert!((fidelity(&zero.density(), &zero).unwrap() - 1.0).abs() < TOL);

        let mixed = DensityMatrix::maximally_mixed(&[QubitLabel::X]).unwrap();
        let phi = PureState::qubit(QubitLabel::X, C64::new(0.6, 0.0), C64::new(0.0, 0.8));
        assert!((fidelity(&mixed, &phi).unwrap() - 0.5).abs() < TOL);

        let other = PureState::qubit(QubitLabel::P, C64::new(1.0, 0.0), C64::new(0.0, 0.0));
        assert!(matches!(fidelity(&mixed, &other), Err(Error::RegisterMismatch(_))));
    }
}
