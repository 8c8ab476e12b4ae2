use super::{bit_mask, positions, scatter, PureState, QubitLabel, C64, TOL, ZERO_PROBABILITY};
use crate::error::{Error, Result};

/// One outcome of a projective measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBranch {
    pub probability: f64,
    /// Normalized state of the unmeasured qubits, phase-canonicalised.
    /// `None` when the outcome has probability below `ZERO_PROBABILITY`.
    pub post_state: Option<PureState>,
}

impl MeasurementBranch {
    pub fn is_possible(&self) -> bool {
        self.post_state.is_some()
    }
}

/// Projects `targets` of `s` onto each element of `basis` in turn.
///
/// The basis must be a complete orthonormal set over `targets`; each element
/// may list the target labels in any order.
pub fn measure_in_basis(s: &PureState, basis: &[PureState], targets: &[QubitLabel]) -> Result<Vec<MeasurementBranch>> {
    let k = targets.len();
    if basis.len() != 1 << k {
        return Err(Error::DimensionMismatch {
            expected: 1 << k,
            found: basis.len(),
        });
    }
    let aligned = basis.iter().map(|b| b.reorder(targets)).collect::<Result<Vec<_>>>()?;
    check_orthonormal(&aligned)?;

    let n = s.num_qubits();
    let pos = positions(s.register(), targets)?;
    let target_masks: Vec<usize> = pos.iter().map(|&p| bit_mask(n, p)).collect();
    let rest_positions: Vec<usize> = (0..n).filter(|p| !pos.contains(p)).collect();
    let rest_masks: Vec<usize> = rest_positions.iter().map(|&p| bit_mask(n, p)).collect();
    let rest_register: Vec<QubitLabel> = rest_positions.iter().map(|&p| s.register()[p]).collect();
    let target_offsets: Vec<usize> = (0..1 << k).map(|t| scatter(t, &target_masks)).collect();
    let rest_offsets: Vec<usize> = (0..1 << rest_masks.len()).map(|r| scatter(r, &rest_masks)).collect();

    let amps = s.amplitudes();
    aligned
        .iter()
        .map(|b| {
            let projected: Vec<C64> = rest_offsets
                .iter()
                .map(|r| {
                    b.amplitudes()
                        .iter()
                        .zip(&target_offsets)
                        .map(|(bt, t)| bt.conj() * amps[t | r])
                        .sum()
                })
                .collect();
            let probability: f64 = projected.iter().map(|a| a.norm_sqr()).sum();
            let post_state = if probability < ZERO_PROBABILITY {
                None
            } else {
                let state = PureState::new(rest_register.clone(), projected)?;
                Some(state.normalize()?.with_canonical_phase())
            };
            Ok(MeasurementBranch {
                probability,
                post_state,
            })
        })
        .collect()
}

fn check_orthonormal(basis: &[PureState]) -> Result<()> {
    let mut worst: f64 = 0.0;
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate().skip(i) {
            let ip: C64 = a
                .amplitudes()
                .iter()
                .zip(b.amplitudes())
                .map(|(x, y)| x.conj() * y)
                .sum();
            let want = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((ip - want).norm());
        }
    }
    if worst > TOL {
        return Err(Error::BasisNotOrthonormal(worst));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::QubitLabel::*;

    fn bell_basis() -> Vec<PureState> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let r = |v: [f64; 4]| PureState::new(vec![X, P], v.iter().map(|&x| C64::new(x, 0.0)).collect()).unwrap();
        vec![
            r([h, 0.0, 0.0, h]),
            r([h, 0.0, 0.0, -h]),
            r([0.0, h, h, 0.0]),
            r([0.0, h, -h, 0.0]),
        ]
    }

    #[test]
    fn product_state_in_bell_basis() {
        let s = PureState::basis(vec![X, P], 0).unwrap();
        let branches = measure_in_basis(&s, &bell_basis(), &[X, P]).unwrap();
        let probs: Vec<f64> = branches.iter().map(|b| b.probability).collect();
        for (p, want) in probs.iter().zip([0.5, 0.5, 0.0, 0.0]) {
            assert!((p - want).abs() < TOL);
        }
        assert!(branches[2].post_state.is_none());
        assert!(branches[0].is_possible());
    }

    #[test]
    fn post_state_of_remaining_register() {
        // |0⟩_X ⊗ |1⟩_A ⊗ |0⟩_P measured on (X, P): remainder is |1⟩_A
        let s = PureState::basis(vec![X, A, P], 0b010).unwrap();
        let branches = measure_in_basis(&s, &bell_basis(), &[X, P]).unwrap();
        let post = branches[0].post_state.as_ref().unwrap();
        assert_eq!(post.register(), &[A]);
        assert!((post.amplitudes()[1] - C64::new(1.0, 0.0)).norm() < TOL);
    }

    #[test]
    fn non_orthonormal_basis_rejected() {
        let mut basis = bell_basis();
        basis[3] = basis[0].clone();
        let s = PureState::basis(vec![X, P], 0).unwrap();
        let err = measure_in_basis(&s, &basis, &[X, P]).unwrap_err();
        assert!(matches!(err, Error::BasisNotOrthonormal(_)));
        assert_eq!(err.to_string().split(" (").next().unwrap(), "basis not orthonormal");
    }
}
