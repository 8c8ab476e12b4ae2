use nalgebra::DMatrix;

use super::{bit_mask, check_register, positions, scatter, PureState, QubitLabel, C64, POSITIVITY_TOL, TOL};
use crate::error::{Error, Result};

/// Density operator over an ordered register, same bit convention as
/// [`PureState`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    register: Vec<QubitLabel>,
    matrix: DMatrix<C64>,
}

impl DensityMatrix {
    /// Validated constructor: square, matching dimension, Hermitian, unit
    /// trace and positive semidefinite.
    pub fn new(register: Vec<QubitLabel>, matrix: DMatrix<C64>) -> Result<Self> {
        check_register(&register)?;
        let dim = 1usize << register.len();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: matrix.nrows().max(matrix.ncols()),
            });
        }
        let rho = Self { register, matrix };
        let dev = rho.hermiticity_deviation();
        if dev > TOL {
            return Err(Error::NotHermitian(dev));
        }
        let tr = rho.trace();
        if (tr - 1.0).abs() > TOL {
            return Err(Error::InvalidParameter(format!("trace {tr} != 1")));
        }
        let low = rho.min_eigenvalue();
        if low < -POSITIVITY_TOL {
            return Err(Error::InvalidParameter(format!("negative eigenvalue {low}")));
        }
        Ok(rho)
    }

    pub(crate) fn from_parts(register: Vec<QubitLabel>, matrix: DMatrix<C64>) -> Self {
        Self { register, matrix }
    }

    pub fn from_pure(s: &PureState) -> Self {
        let v = nalgebra::DVector::from_column_slice(s.amplitudes());
        Self {
            register: s.register().to_vec(),
            matrix: &v * v.adjoint(),
        }
    }

    pub fn maximally_mixed(register: &[QubitLabel]) -> Result<Self> {
        check_register(register)?;
        let dim = 1usize << register.len();
        Ok(Self {
            register: register.to_vec(),
            matrix: DMatrix::identity(dim, dim) * C64::new(1.0 / dim as f64, 0.0),
        })
    }

    pub fn register(&self) -> &[QubitLabel] {
        &self.register
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        // Tr(ρ²) = Σ |ρ_ij|² for Hermitian ρ
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Largest entrywise deviation from `ρ = ρ†`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let adj = self.matrix.adjoint();
        (&self.matrix - adj).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.matrix.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().last().copied().unwrap_or(0.0)
    }

    /// Traces out everything but `keep`, in the order given.
    pub fn partial_trace(&self, keep: &[QubitLabel]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::EmptyKeepSet);
        }
        let n = self.register.len();
        let pos = positions(&self.register, keep)?;
        let keep_masks: Vec<usize> = pos.iter().map(|&p| bit_mask(n, p)).collect();
        let rest_masks: Vec<usize> = (0..n).filter(|p| !pos.contains(p)).map(|p| bit_mask(n, p)).collect();
        let keep_offsets: Vec<usize> = (0..1 << keep.len()).map(|s| scatter(s, &keep_masks)).collect();
        let rest_offsets: Vec<usize> = (0..1 << rest_masks.len()).map(|s| scatter(s, &rest_masks)).collect();

        let d = keep_offsets.len();
        let matrix = DMatrix::from_fn(d, d, |a, b| {
            rest_offsets
                .iter()
                .map(|r| self.matrix[(keep_offsets[a] | r, keep_offsets[b] | r)])
                .sum()
        });
        Ok(Self {
            register: keep.to_vec(),
            matrix,
        })
    }

    /// Entrywise comparison; registers must agree exactly.
    pub fn approx_eq(&self, other: &DensityMatrix, tol: f64) -> bool {
        self.register == other.register
            && self
                .matrix
                .iter()
                .zip(other.matrix.iter())
                .all(|(a, b)| (a - b).norm() <= tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::QubitLabel::*;

    #[test]
    fn validated_constructor() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(0.5, 0.0),
                C64::new(0.0, 0.1),
                C64::new(0.0, 0.1),
                C64::new(0.5, 0.0),
            ],
        );
        assert!(matches!(DensityMatrix::new(vec![X], m), Err(Error::NotHermitian(_))));

        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(1.5, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(-0.5, 0.0),
            ],
        );
        assert!(matches!(
            DensityMatrix::new(vec![X], m),
            Err(Error::InvalidParameter(_))
        ));

        let rho = DensityMatrix::maximally_mixed(&[X, P]).unwrap();
        assert!(DensityMatrix::new(vec![X, P], rho.matrix().clone()).is_ok());
        assert!((rho.purity() - 0.25).abs() < TOL);
    }

    #[test]
    fn two_step_trace_matches_one_step() {
        let amps: Vec<C64> = (0..16)
            .map(|k| C64::new((k as f64).sin(), (k as f64 * 0.7).cos()))
            .collect();
        let s = PureState::new(vec![P, A, C1, C2], amps).unwrap().normalize().unwrap();
        let full = s.density();
        let one = s.reduced(&[P, C1]).unwrap();
        let two = full
            .partial_trace(&[P, A, C1])
            .unwrap()
            .partial_trace(&[P, C1])
            .unwrap();
        assert!(one.approx_eq(&two, TOL));
        assert!((one.trace() - 1.0).abs() < TOL);
    }
}
