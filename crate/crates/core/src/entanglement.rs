//! Meyer–Wallach global entanglement and two-qubit concurrence.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::quantum::{DensityMatrix, PureState, C64, TOL};

/// An entanglement measure in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EntanglementValue(f64);

impl EntanglementValue {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<EntanglementValue> for f64 {
    fn from(v: EntanglementValue) -> f64 {
        v.0
    }
}

/// `E_G = 2(1 − (1/N) Σ_j Tr ρ_j²)`, the mean single-qubit linear entropy.
pub fn global_entanglement(s: &PureState) -> EntanglementValue {
    let n = s.num_qubits();
    if n == 0 {
        return EntanglementValue(0.0);
    }
    let purity_sum: f64 = s
        .register()
        .iter()
        .map(|&q| s.reduced(&[q]).expect("label from own register").purity())
        .sum();
    EntanglementValue(2.0 * (1.0 - purity_sum / n as f64))
}

/// Global entanglement of the channel when exactly one qubit carries a
/// parameter `n` and the rest are 1. Independent of which qubit it is.
pub fn eg1_single(n: f64) -> EntanglementValue {
    let n2 = n * n;
    EntanglementValue((1.0 + 6.0 * n2 + n2 * n2) / (2.0 * (1.0 + n2).powi(2)))
}

/// Which two channel qubits carry the free parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    /// `(n_A, n_P)` or `(n_C1, n_C2)`.
    SameRole,
    /// One of `{n_A, n_P}` with one of `{n_C1, n_C2}`.
    Mixed,
}

/// Global entanglement with two free parameters, the rest equal to 1.
/// Both forms are symmetric in their arguments.
pub fn eg1_pair(n_i: f64, n_j: f64, kind: PairKind) -> EntanglementValue {
    let (i2, j2) = (n_i * n_i, n_j * n_j);
    let value = match kind {
        PairKind::SameRole => {
            let num = 8.0 * j2 + j2 * j2 + i2 * i2 * (1.0 + 8.0 * j2) + i2 * (8.0 + 38.0 * j2 + 8.0 * j2 * j2);
            let den = 2.0 * (2.0 + j2 + i2 + 2.0 * i2 * j2).powi(2);
            num / den
        }
        PairKind::Mixed => {
            let num = 2.0 * (4.0 + 5.0 * i2 + j2 * (5.0 + (44.0 + 5.0 * j2) * i2 + (5.0 + 4.0 * j2) * i2 * i2));
            let den = (5.0 + j2 + i2 + 5.0 * i2 * j2).powi(2);
            num / den
        }
    };
    EntanglementValue(value)
}

/// `c(n) = 2n/(1+n²)`, the concurrence of `(|00⟩ + n|11⟩)/√(1+n²)`.
pub fn concurrence_param(n: f64) -> f64 {
    2.0 * n / (1.0 + n * n)
}

/// Wootters concurrence of a two-qubit density matrix.
///
/// Uses the Hermitian form: the `λ_i` are square roots of the eigenvalues of
/// `√ρ ρ̃ √ρ` with `ρ̃ = (σy⊗σy) ρ* (σy⊗σy)`.
pub fn concurrence_two_qubit(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho.dim(),
        });
    }
    let dev = rho.hermiticity_deviation();
    if dev > TOL {
        return Err(Error::NotHermitian(dev));
    }
    let m = rho.matrix();

    // σy⊗σy is real: anti-diagonal (-1, 1, 1, -1)
    let z = C64::new(0.0, 0.0);
    let (p, n) = (C64::new(1.0, 0.0), C64::new(-1.0, 0.0));
    let yy = DMatrix::from_row_slice(4, 4, &[z, z, z, n, z, z, p, z, z, p, z, z, n, z, z, z]);
    let flipped = &yy * m.map(|c| c.conj()) * &yy;

    let eig = m.clone().symmetric_eigen();
    let roots = DVector::from_iterator(4, eig.eigenvalues.iter().map(|&l| C64::new(l.max(0.0).sqrt(), 0.0)));
    let sqrt_rho = &eig.eigenvectors * DMatrix::from_diagonal(&roots) * eig.eigenvectors.adjoint();
    let inner = &sqrt_rho * flipped * &sqrt_rho;
    // symmetrize against roundoff before the Hermitian solver
    let inner = (&inner + inner.adjoint()) * C64::new(0.5, 0.0);

    let mut lambdas: Vec<f64> = inner
        .symmetric_eigenvalues()
        .iter()
        .map(|&mu| mu.max(0.0).sqrt())
        .collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{build_channel, DisentanglementParams};
    use crate::quantum::anon_register;

    fn pair(n: f64) -> PureState {
        let norm = (1.0 + n * n).sqrt();
        let z = C64::new(0.0, 0.0);
        PureState::new(
            anon_register(2),
            vec![C64::new(1.0 / norm, 0.0), z, z, C64::new(n / norm, 0.0)],
        )
        .unwrap()
    }

    #[test]
    fn global_entanglement_reference_points() {
        let ideal = build_channel(&DisentanglementParams::IDEAL);
        assert!((global_entanglement(&ideal).value() - 1.0).abs() < TOL);

        let product = PureState::basis(anon_register(4), 0).unwrap();
        assert!(global_entanglement(&product).value().abs() < TOL);

        let no_port = build_channel(&DisentanglementParams::new(0.0, 1.0, 1.0, 1.0));
        assert!((global_entanglement(&no_port).value() - 0.5).abs() < TOL);
    }

    #[test]
    fn eg1_single_values() {
        assert!((eg1_single(1.0).value() - 1.0).abs() < TOL);
        assert!((eg1_single(0.0).value() - 0.5).abs() < TOL);
        assert!((eg1_single(0.5).value() - 0.82).abs() < TOL);
    }

    #[test]
    fn eg1_pair_reference_points() {
        for kind in [PairKind::SameRole, PairKind::Mixed] {
            assert!((eg1_pair(1.0, 1.0, kind).value() - 1.0).abs() < TOL);
        }
        assert!(eg1_pair(0.0, 0.0, PairKind::SameRole).value().abs() < TOL);
        let ch = build_channel(&DisentanglementParams::new(1.0, 0.7, 0.5, 1.0));
        assert!((eg1_pair(0.7, 0.5, PairKind::Mixed).value() - global_entanglement(&ch).value()).abs() < TOL);
    }

    #[test]
    fn printed_same_role_form_is_off_by_an_exponent() {
        // The printed numerator carries n_i^4 (1 + 8 n_j^4); the pipeline
        // needs n_i^4 (1 + 8 n_j^2).
        let (ni, nj) = (0.6f64, 0.3f64);
        let (i2, j2) = (ni * ni, nj * nj);
        let printed = (8.0 * j2 + j2 * j2 + i2 * i2 * (1.0 + 8.0 * j2 * j2) + i2 * (8.0 + 38.0 * j2 + 8.0 * j2 * j2))
            / (2.0 * (2.0 + j2 + i2 + 2.0 * i2 * j2).powi(2));
        let ch = build_channel(&DisentanglementParams::new(nj, ni, 1.0, 1.0));
        let pipeline = global_entanglement(&ch).value();
        assert!((printed - pipeline).abs() > 1e-3);
        assert!((eg1_pair(ni, nj, PairKind::SameRole).value() - pipeline).abs() < TOL);
    }

    #[test]
    fn concurrence_closed_form_and_oracle() {
        assert_eq!(concurrence_param(1.0), 1.0);
        assert_eq!(concurrence_param(0.0), 0.0);
        assert!((concurrence_param(0.5) - 0.8).abs() < TOL);

        assert!((concurrence_two_qubit(&pair(1.0).density()).unwrap() - 1.0).abs() < 1e-10);
        assert!(concurrence_two_qubit(&pair(0.0).density()).unwrap().abs() < 1e-10);
        assert!((concurrence_two_qubit(&pair(0.5).density()).unwrap() - 0.8).abs() < 1e-10);
    }

    #[test]
    fn concurrence_rejects_bad_input() {
        let one = PureState::basis(anon_register(1), 0).unwrap().density();
        assert!(matches!(
            concurrence_two_qubit(&one),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
