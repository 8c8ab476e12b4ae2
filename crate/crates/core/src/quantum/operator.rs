use std::ops::Mul;

use nalgebra::DMatrix;

use super::{C64, MAX_QUBITS, TOL};
use crate::error::{Error, Result};

/// Square unitary on `2^k` dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix(DMatrix<C64>);

impl UnitaryMatrix {
    /// Checks power-of-two shape and `U·U† = I` entrywise within `TOL`.
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        let d = matrix.nrows();
        if matrix.ncols() != d || !d.is_power_of_two() || d > 1 << MAX_QUBITS {
            return Err(Error::DimensionMismatch {
                expected: d.next_power_of_two(),
                found: matrix.ncols(),
            });
        }
        let u = Self(matrix);
        let dev = u.unitarity_deviation();
        if dev > TOL {
            return Err(Error::NotUnitary(dev));
        }
        Ok(u)
    }

    pub fn from_rows(dim: usize, entries: &[C64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn identity(num_qubits: usize) -> Self {
        let d = 1 << num_qubits;
        Self(DMatrix::identity(d, d))
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn num_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    /// Largest entrywise deviation of `U·U†` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        let d = self.dim();
        let prod = &self.0 * self.0.adjoint();
        (prod - DMatrix::<C64>::identity(d, d))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &UnitaryMatrix, tol: f64) -> bool {
        self.dim() == other.dim() && self.0.iter().zip(other.0.iter()).all(|(a, b)| (a - b).norm() <= tol)
    }
}

impl Mul for &UnitaryMatrix {
    type Output = UnitaryMatrix;

    fn mul(self, rhs: &UnitaryMatrix) -> UnitaryMatrix {
        UnitaryMatrix(&self.0 * &rhs.0)
    }
}

pub fn pauli_x() -> UnitaryMatrix {
    let (o, l) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
    UnitaryMatrix(DMatrix::from_row_slice(2, 2, &[o, l, l, o]))
}

pub fn pauli_z() -> UnitaryMatrix {
    let (o, l) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
    UnitaryMatrix(DMatrix::from_row_slice(2, 2, &[l, o, o, -l]))
}
