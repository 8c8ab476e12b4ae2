use super::{
    bit_mask, check_register, positions, scatter, DensityMatrix, QubitLabel, UnitaryMatrix, C64, ZERO_PROBABILITY,
};
use crate::error::{Error, Result};

/// Complex amplitude vector over an ordered register of labelled qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    register: Vec<QubitLabel>,
    amplitudes: Vec<C64>,
}

impl PureState {
    /// Wraps raw amplitudes. The vector is taken as-is and not normalized.
    pub fn new(register: Vec<QubitLabel>, amplitudes: Vec<C64>) -> Result<Self> {
        check_register(&register)?;
        let dim = 1usize << register.len();
        if amplitudes.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: amplitudes.len(),
            });
        }
        Ok(Self { register, amplitudes })
    }

    /// Computational basis ket `|index⟩`.
    pub fn basis(register: Vec<QubitLabel>, index: usize) -> Result<Self> {
        check_register(&register)?;
        let dim = 1usize << register.len();
        if index >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: index,
            });
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(Self { register, amplitudes })
    }

    /// Single-qubit state `α|0⟩ + β|1⟩` (not normalized).
    pub fn qubit(label: QubitLabel, alpha: C64, beta: C64) -> Self {
        Self {
            register: vec![label],
            amplitudes: vec![alpha, beta],
        }
    }

    pub fn register(&self) -> &[QubitLabel] {
        &self.register
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn num_qubits(&self) -> usize {
        self.register.len()
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// Amplitude of the ket written as a bit string in register order,
    /// e.g. `"0101"`.
    pub fn amplitude_of(&self, bits: &str) -> Result<C64> {
        if bits.len() != self.num_qubits() {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits(),
                found: bits.len(),
            });
        }
        let index =
            usize::from_str_radix(bits, 2).map_err(|_| Error::InvalidParameter(format!("bad bit string {bits:?}")))?;
        Ok(self.amplitudes[index])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Rescales to unit norm. A vector with no support is an error.
    pub fn normalize(mut self) -> Result<Self> {
        let norm = self.norm_sqr().sqrt();
        if norm < ZERO_PROBABILITY {
            return Err(Error::AnnihilatedState);
        }
        self.amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(self)
    }

    /// Global phase fixed so the first amplitude of non-negligible magnitude
    /// is real and positive.
    pub fn with_canonical_phase(mut self) -> Self {
        if let Some(lead) = self.amplitudes.iter().find(|a| a.norm() > ZERO_PROBABILITY).copied() {
            let phase = lead.conj() / lead.norm();
            self.amplitudes.iter_mut().for_each(|a| *a *= phase);
        }
        self
    }

    /// Same state written over a permuted register.
    pub fn reorder(&self, order: &[QubitLabel]) -> Result<Self> {
        if order.len() != self.num_qubits() {
            return Err(Error::RegisterMismatch(format!(
                "cannot reorder {:?} into {:?}",
                self.register, order
            )));
        }
        if order == self.register.as_slice() {
            return Ok(self.clone());
        }
        let pos = positions(&self.register, order)?;
        let n = self.num_qubits();
        let masks: Vec<usize> = pos.iter().map(|&p| bit_mask(n, p)).collect();
        let mut amplitudes = vec![C64::new(0.0, 0.0); self.dim()];
        for (new_index, amp) in amplitudes.iter_mut().enumerate() {
            *amp = self.amplitudes[scatter(new_index, &masks)];
        }
        Ok(Self {
            register: order.to_vec(),
            amplitudes,
        })
    }

    /// Replaces the labels one-for-one, keeping amplitudes.
    pub fn relabel(mut self, labels: &[QubitLabel]) -> Result<Self> {
        if labels.len() != self.num_qubits() {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits(),
                found: labels.len(),
            });
        }
        check_register(labels)?;
        self.register = labels.to_vec();
        Ok(self)
    }

    /// `⟨self|other⟩`, with `other` brought into this register's order.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        let other = other.reorder(&self.register)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|⟨self|other⟩|²` for normalized states.
    pub fn overlap(&self, other: &PureState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Entrywise comparison after aligning register order.
    pub fn approx_eq(&self, other: &PureState, tol: f64) -> bool {
        match other.reorder(&self.register) {
            Ok(o) => self
                .amplitudes
                .iter()
                .zip(&o.amplitudes)
                .all(|(a, b)| (a - b).norm() <= tol),
            Err(_) => false,
        }
    }

    /// Entrywise comparison after aligning register order and fixing the
    /// global phase of both sides.
    pub fn approx_eq_up_to_phase(&self, other: &PureState, tol: f64) -> bool {
        self.clone()
            .with_canonical_phase()
            .approx_eq(&other.clone().with_canonical_phase(), tol)
    }

    pub fn tensor(&self, other: &PureState) -> Result<Self> {
        let mut register = self.register.clone();
        register.extend_from_slice(&other.register);
        check_register(&register)?;
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        Ok(Self { register, amplitudes })
    }

    /// `Σ cₖ |ψₖ⟩` over states sharing a register (up to order). Not normalized.
    pub fn linear_combination(terms: &[(C64, &PureState)]) -> Result<Self> {
        let (_, first) = terms
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty linear combination".into()))?;
        let register = first.register.clone();
        let mut amplitudes = vec![C64::new(0.0, 0.0); first.dim()];
        for (c, s) in terms {
            let s = s.reorder(&register)?;
            for (acc, a) in amplitudes.iter_mut().zip(&s.amplitudes) {
                *acc += c * a;
            }
        }
        Ok(Self { register, amplitudes })
    }

    pub fn apply_unitary(&self, u: &UnitaryMatrix, targets: &[QubitLabel]) -> Result<Self> {
        let k = targets.len();
        if u.dim() != 1 << k {
            return Err(Error::DimensionMismatch {
                expected: 1 << k,
                found: u.dim(),
            });
        }
        let n = self.num_qubits();
        let pos = positions(&self.register, targets)?;
        let masks: Vec<usize> = pos.iter().map(|&p| bit_mask(n, p)).collect();
        let target_bits = masks.iter().fold(0, |acc, m| acc | m);
        let offsets: Vec<usize> = (0..1 << k).map(|s| scatter(s, &masks)).collect();
        let m = u.matrix();

        let mut out = self.amplitudes.clone();
        let mut local = vec![C64::new(0.0, 0.0); 1 << k];
        for base in (0..self.dim()).filter(|i| i & target_bits == 0) {
            for (slot, off) in local.iter_mut().zip(&offsets) {
                *slot = self.amplitudes[base | off];
            }
            for (row, off) in offsets.iter().enumerate() {
                out[base | off] = local.iter().enumerate().map(|(col, v)| m[(row, col)] * v).sum();
            }
        }
        Ok(Self {
            register: self.register.clone(),
            amplitudes: out,
        })
    }

    /// Multiplies every amplitude whose `target` bit is 1 by `factor`.
    /// The result is not renormalized.
    pub fn scale_excited(&self, target: QubitLabel, factor: C64) -> Result<Self> {
        let pos = positions(&self.register, &[target])?[0];
        let mask = bit_mask(self.num_qubits(), pos);
        let amplitudes = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| if i & mask != 0 { a * factor } else { *a })
            .collect();
        Ok(Self {
            register: self.register.clone(),
            amplitudes,
        })
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }

    /// Reduced density matrix on `keep` (in that order), computed directly
    /// from the amplitudes.
    pub fn reduced(&self, keep: &[QubitLabel]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(Error::EmptyKeepSet);
        }
        let n = self.num_qubits();
        let pos = positions(&self.register, keep)?;
        let keep_masks: Vec<usize> = pos.iter().map(|&p| bit_mask(n, p)).collect();
        let rest_masks: Vec<usize> = (0..n).filter(|p| !pos.contains(p)).map(|p| bit_mask(n, p)).collect();
        let keep_offsets: Vec<usize> = (0..1 << keep.len()).map(|s| scatter(s, &keep_masks)).collect();
        let rest_offsets: Vec<usize> = (0..1 << rest_masks.len()).map(|s| scatter(s, &rest_masks)).collect();

        let d = keep_offsets.len();
        let mut rho = nalgebra::DMatrix::<C64>::zeros(d, d);
        for r in &rest_offsets {
            for (a, ka) in keep_offsets.iter().enumerate() {
                let va = self.amplitudes[ka | r];
                if va.norm_sqr() == 0.0 {
                    continue;
                }
                for (b, kb) in keep_offsets.iter().enumerate() {
                    rho[(a, b)] += va * self.amplitudes[kb | r].conj();
                }
            }
        }
        Ok(DensityMatrix::from_parts(keep.to_vec(), rho))
    }
}
