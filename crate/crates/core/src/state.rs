//! State vectors and exact time evolution.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::dense::{realize, DenseOperator, Sign, SpectralDecomposition};
use crate::error::{Error, Result};
use crate::pauli::OperatorSum;
use crate::register::QubitRegister;

/// Norm drift tolerated after an evolution step.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Complex amplitude vector over the computational basis (qubit 0 = MSB).
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: DVector<Complex64>,
    n_qubits: usize,
}

impl StateVector {
    pub fn from_amplitudes(n_qubits: usize, amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.len() != 1 << n_qubits {
            return Err(Error::Config(format!(
                "amplitude vector of length {} does not match {n_qubits} qubits",
                amplitudes.len()
            )));
        }
        Ok(Self {
            amplitudes,
            n_qubits,
        })
    }

    /// Computational basis state `|index>`.
    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let dim = 1 << n_qubits;
        assert!(index < dim, "basis index out of range");
        let mut amplitudes = DVector::zeros(dim);
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self {
            amplitudes,
            n_qubits,
        }
    }

    /// `|+>^{n}`: uniform superposition with amplitude `2^{-n/2}`.
    pub fn plus_all(n_qubits: usize) -> Self {
        let dim = 1 << n_qubits;
        let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Self {
            amplitudes: DVector::from_element(dim, amp),
            n_qubits,
        }
    }

    /// `|->^{n}`: amplitude `(-1)^{popcount} 2^{-n/2}`.
    pub fn minus_all(n_qubits: usize) -> Self {
        let dim = 1 << n_qubits;
        let norm = 1.0 / (dim as f64).sqrt();
        let amplitudes = DVector::from_iterator(
            dim,
            (0..dim).map(|b: usize| {
                let sign = if b.count_ones().is_multiple_of(2) {
                    1.0
                } else {
                    -1.0
                };
                Complex64::new(sign * norm, 0.0)
            }),
        );
        Self {
            amplitudes,
            n_qubits,
        }
    }

    /// `|+>^{n_data} (x) |0>^{n_ancilla}` on a split register.
    pub fn data_plus_ancilla_zero(reg: &QubitRegister) -> Self {
        let dim = reg.dim();
        let amp = Complex64::new(1.0 / (reg.data_dim() as f64).sqrt(), 0.0);
        let mut amplitudes = DVector::zeros(dim);
        for z in 0..reg.data_dim() {
            amplitudes[reg.basis_index(z, 0)] = amp;
        }
        Self {
            amplitudes,
            n_qubits: reg.total(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// `|<self|other>|^2`.
    pub fn overlap_sq(&self, other: &Self) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Population of a basis state.
    pub fn population(&self, index: usize) -> f64 {
        self.amplitudes[index].norm_sqr()
    }

    /// Apply an operator sum term-by-term (no dense realization).
    pub fn apply_sum(&self, op: &OperatorSum, reg: &QubitRegister) -> Result<Self> {
        op.check_register(reg)?;
        if reg.total() != self.n_qubits {
            return Err(Error::Config(
                "state and register qubit counts differ".into(),
            ));
        }
        let mut out = DVector::zeros(self.dim());
        for term in op.terms() {
            for col in 0..self.dim() {
                let a = self.amplitudes[col];
                if a != Complex64::new(0.0, 0.0) {
                    let (row, phase) = term.apply_to_basis(reg, col);
                    out[row] += phase * a;
                }
            }
        }
        Ok(Self {
            amplitudes: out,
            n_qubits: self.n_qubits,
        })
    }

    /// Apply a dense operator.
    pub fn apply_dense(&self, op: &DenseOperator) -> Self {
        assert_eq!(op.dim(), self.dim(), "operator and state dimensions differ");
        Self {
            amplitudes: op.matrix() * &self.amplitudes,
            n_qubits: self.n_qubits,
        }
    }

    /// `<psi|O|psi>` for Hermitian `O`; errors if the imaginary residue
    /// exceeds tolerance.
    pub fn expectation(&self, op: &OperatorSum, reg: &QubitRegister) -> Result<f64> {
        if !op.is_hermitian() {
            return Err(Error::Contract(
                "expectation of a non-Hermitian operator".into(),
            ));
        }
        let applied = self.apply_sum(op, reg)?;
        let value = self.inner(&applied);
        if value.im.abs() >= 1e-10 {
            return Err(Error::Numerical(format!(
                "expectation has imaginary residue {:.3e}",
                value.im
            )));
        }
        Ok(value.re)
    }
}

/// `exp(sign * i * t * H) |psi>` by exact eigendecomposition.
pub fn evolve(
    state: &StateVector,
    h: &OperatorSum,
    reg: &QubitRegister,
    t: f64,
    sign: Sign,
) -> Result<StateVector> {
    if !t.is_finite() {
        return Err(Error::Contract("evolution time must be finite".into()));
    }
    let decomp = SpectralDecomposition::new(&realize(h, reg)?)?;
    evolve_with(state, &decomp, t, sign)
}

/// Evolution reusing a precomputed decomposition (for time grids).
pub fn evolve_with(
    state: &StateVector,
    decomp: &SpectralDecomposition,
    t: f64,
    sign: Sign,
) -> Result<StateVector> {
    if decomp.dim() != state.dim() {
        return Err(Error::Config(
            "decomposition and state dimensions differ".into(),
        ));
    }
    let amplitudes = decomp.apply_to_vector(state.amplitudes(), t, sign);
    let out = StateVector {
        amplitudes,
        n_qubits: state.n_qubits,
    };
    let drift = (out.norm() - state.norm()).abs();
    if drift > NORM_TOLERANCE {
        return Err(Error::Numerical(format!(
            "norm drifted by {drift:.3e} during evolution"
        )));
    }
    Ok(out)
}

/// Full propagator `exp(sign * i * t * H)`; unitary within 1e-10.
pub fn propagator(
    h: &OperatorSum,
    reg: &QubitRegister,
    t: f64,
    sign: Sign,
) -> Result<DenseOperator> {
    if !t.is_finite() {
        return Err(Error::Contract("evolution time must be finite".into()));
    }
    let decomp = SpectralDecomposition::new(&realize(h, reg)?)?;
    decomp.propagator(t, sign)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{Pauli, PauliString};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn expectation_z_on_zero() {
        let reg = QubitRegister::new(1, 0).unwrap();
        let psi = StateVector::basis(1, 0);
        let z = OperatorSum::from_term(PauliString::single(1.0, 0, Pauli::Z));
        assert_abs_diff_eq!(psi.expectation(&z, &reg).unwrap(), 1.0);
    }

    #[test]
    fn expectation_x_on_plus() {
        let reg = QubitRegister::new(1, 0).unwrap();
        let psi = StateVector::plus_all(1);
        let x = OperatorSum::from_term(PauliString::single(1.0, 0, Pauli::X));
        assert_abs_diff_eq!(psi.expectation(&x, &reg).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn expectation_zz_on_plus_plus() {
        // Direct four-amplitude computation gives 0.
        let reg = QubitRegister::new(2, 0).unwrap();
        let psi = StateVector::plus_all(2);
        let zz =
            OperatorSum::from_term(PauliString::new(1.0, [(0, Pauli::Z), (1, Pauli::Z)]).unwrap());
        assert_abs_diff_eq!(psi.expectation(&zz, &reg).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn expectation_rejects_non_hermitian() {
        let reg = QubitRegister::new(1, 0).unwrap();
        let psi = StateVector::basis(1, 0);
        let op = OperatorSum::from_term(PauliString::single(Complex64::new(0.0, 1.0), 0, Pauli::Z));
        assert!(psi.expectation(&op, &reg).is_err());
    }

    #[test]
    fn evolve_x_half_pi_flips_bit() {
        // exp(-i pi/2 X)|0> = -i|1>.
        let reg = QubitRegister::new(1, 0).unwrap();
        let psi = StateVector::basis(1, 0);
        let h = OperatorSum::from_term(PauliString::single(1.0, 0, Pauli::X));
        let out = evolve(&psi, &h, &reg, FRAC_PI_2, Sign::Neg).unwrap();
        assert_abs_diff_eq!(out.population(1), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(out.amplitude(1).im, -1.0, epsilon = 1e-12);
    }

    #[test]
    fn evolve_zero_time_is_identity() {
        let reg = QubitRegister::new(2, 0).unwrap();
        let psi = StateVector::plus_all(2);
        let h = OperatorSum::from_term(PauliString::single(3.0, 1, Pauli::Z));
        let out = evolve(&psi, &h, &reg, 0.0, Sign::Neg).unwrap();
        assert!(psi.inner(&out).re > 1.0 - 1e-12);
    }

    #[test]
    fn parity_flip_mechanism() {
        // exp(-i pi H) with H = (1 - Z0 Z1)/2 sends |++> to |--> up to a
        // global phase: the two odd-parity amplitudes pick up phase -1.
        let reg = QubitRegister::new(2, 0).unwrap();
        let psi = StateVector::plus_all(2);
        let h = OperatorSum::new(vec![
            PauliString::identity(0.5),
            PauliString::new(-0.5, [(0, Pauli::Z), (1, Pauli::Z)]).unwrap(),
        ]);
        let out = evolve(&psi, &h, &reg, PI, Sign::Neg).unwrap();
        let minus = StateVector::minus_all(2);
        assert_abs_diff_eq!(out.overlap_sq(&minus), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn evolution_sign_convention() {
        // Sign::Pos is the inverse of Sign::Neg at equal times.
        let reg = QubitRegister::new(1, 0).unwrap();
        let psi = StateVector::plus_all(1);
        let h = OperatorSum::from_term(PauliString::single(0.9, 0, Pauli::Z));
        let fwd = evolve(&psi, &h, &reg, 0.37, Sign::Neg).unwrap();
        let back = evolve(&fwd, &h, &reg, 0.37, Sign::Pos).unwrap();
        assert_abs_diff_eq!(back.overlap_sq(&psi), 1.0, epsilon = 1e-12);
    }
}
