//! Pauli strings and weighted operator sums.
//!
//! A [`PauliString`] is a complex coefficient times a tensor product of
//! single-qubit Pauli factors at distinct qubit indices (identity elsewhere).
//! An [`OperatorSum`] is a list of strings kept in canonical form: terms with
//! identical factor maps are merged and terms with negligible coefficients
//! dropped. All Hamiltonians and logical operators in this crate are
//! operator sums.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::register::QubitRegister;

/// Coefficient magnitude below which a term is dropped during canonicalization.
pub const CANONICAL_DROP_TOLERANCE: f64 = 1e-14;

/// Imaginary-part tolerance for treating a canonical sum as Hermitian.
pub const HERMITICITY_TOLERANCE: f64 = 1e-12;

/// Single-qubit Pauli factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    /// Action on a computational basis bit: returns `(flips_bit, phase)` such
    /// that `P|b> = phase * |b XOR flips>`.
    pub fn basis_action(self, bit: usize) -> (bool, Complex64) {
        match self {
            Pauli::X => (true, Complex64::new(1.0, 0.0)),
            // Y|0> = i|1>, Y|1> = -i|0>
            Pauli::Y => (true, Complex64::new(0.0, if bit == 0 { 1.0 } else { -1.0 })),
            Pauli::Z => (
                false,
                Complex64::new(if bit == 0 { 1.0 } else { -1.0 }, 0.0),
            ),
        }
    }

    pub fn label(self) -> char {
        match self {
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// A weighted tensor product of Pauli factors over a fixed register.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliString {
    coefficient: Complex64,
    factors: BTreeMap<usize, Pauli>,
}

impl PauliString {
    /// Scaled identity (empty factor map).
    pub fn identity(coefficient: impl Into<Complex64>) -> Self {
        Self {
            coefficient: coefficient.into(),
            factors: BTreeMap::new(),
        }
    }

    /// Build from `(qubit, factor)` pairs. Errors if an index repeats.
    pub fn new(
        coefficient: impl Into<Complex64>,
        factors: impl IntoIterator<Item = (usize, Pauli)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (q, p) in factors {
            if map.insert(q, p).is_some() {
                return Err(Error::Config(format!(
                    "qubit index {q} appears twice in Pauli string"
                )));
            }
        }
        Ok(Self {
            coefficient: coefficient.into(),
            factors: map,
        })
    }

    /// Single-factor string.
    pub fn single(coefficient: impl Into<Complex64>, qubit: usize, factor: Pauli) -> Self {
        let mut factors = BTreeMap::new();
        factors.insert(qubit, factor);
        Self {
            coefficient: coefficient.into(),
            factors,
        }
    }

    pub fn coefficient(&self) -> Complex64 {
        self.coefficient
    }

    pub fn factors(&self) -> &BTreeMap<usize, Pauli> {
        &self.factors
    }

    /// Number of non-identity factors.
    pub fn weight(&self) -> usize {
        self.factors.len()
    }

    pub fn scaled(&self, scale: impl Into<Complex64>) -> Self {
        Self {
            coefficient: self.coefficient * scale.into(),
            factors: self.factors.clone(),
        }
    }

    /// Largest qubit index touched, if any.
    pub fn max_index(&self) -> Option<usize> {
        self.factors.keys().next_back().copied()
    }

    /// Action on a basis state: `string |index> = phase * |mapped index>`.
    pub fn apply_to_basis(&self, reg: &QubitRegister, index: usize) -> (usize, Complex64) {
        let mut out = index;
        let mut phase = self.coefficient;
        for (&q, &p) in &self.factors {
            let (flips, ph) = p.basis_action(reg.qubit_bit(index, q));
            phase *= ph;
            if flips {
                out ^= reg.flip_mask(q);
            }
        }
        (out, phase)
    }

    fn sort_key(&self) -> Vec<(usize, Pauli)> {
        self.factors.iter().map(|(&q, &p)| (q, p)).collect()
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({:+.6}{:+.6}i)",
            self.coefficient.re, self.coefficient.im
        )?;
        if self.factors.is_empty() {
            write!(f, " I")?;
        }
        for (q, p) in &self.factors {
            write!(f, " {}{}", p.label(), q)?;
        }
        Ok(())
    }
}

/// A sum of Pauli strings, kept canonical (merged, sorted, small terms dropped).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OperatorSum {
    terms: Vec<PauliString>,
}

impl OperatorSum {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    /// Canonicalize a list of strings into a sum.
    pub fn new(terms: Vec<PauliString>) -> Self {
        let mut merged: BTreeMap<BTreeMap<usize, Pauli>, Complex64> = BTreeMap::new();
        for term in terms {
            *merged
                .entry(term.factors)
                .or_insert_with(|| Complex64::new(0.0, 0.0)) += term.coefficient;
        }
        let terms = merged
            .into_iter()
            .filter(|(_, c)| c.norm() >= CANONICAL_DROP_TOLERANCE)
            .map(|(factors, coefficient)| PauliString {
                coefficient,
                factors,
            })
            .collect();
        Self { terms }
    }

    pub fn from_term(term: PauliString) -> Self {
        Self::new(vec![term])
    }

    pub fn identity(coefficient: impl Into<Complex64>) -> Self {
        Self::from_term(PauliString::identity(coefficient))
    }

    pub fn terms(&self) -> &[PauliString] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(&self, scale: impl Into<Complex64>) -> Self {
        let scale = scale.into();
        Self::new(self.terms.iter().map(|t| t.scaled(scale)).collect())
    }

    pub fn plus(&self, other: &Self) -> Self {
        Self::new(
            self.terms
                .iter()
                .chain(other.terms.iter())
                .cloned()
                .collect(),
        )
    }

    /// Hermitian iff every canonical coefficient is real (Pauli strings with
    /// real coefficients are Hermitian on their own).
    pub fn is_hermitian(&self) -> bool {
        self.terms
            .iter()
            .all(|t| t.coefficient.im.abs() < HERMITICITY_TOLERANCE)
    }

    pub fn max_index(&self) -> Option<usize> {
        self.terms.iter().filter_map(|t| t.max_index()).max()
    }

    /// Check that all indices fit in `reg`.
    pub fn check_register(&self, reg: &QubitRegister) -> Result<()> {
        if let Some(max) = self.max_index() {
            if max >= reg.total() {
                return Err(Error::Config(format!(
                    "operator touches qubit {max} but the register holds {} qubits",
                    reg.total()
                )));
            }
        }
        Ok(())
    }

    /// Terms in the canonical order (sorted by factor map). The internal
    /// representation is already sorted; exposed for stable serialization.
    pub fn sorted_terms(&self) -> Vec<&PauliString> {
        let mut v: Vec<&PauliString> = self.terms.iter().collect();
        v.sort_by_key(|a| a.sort_key());
        v
    }
}

impl std::ops::Add for &OperatorSum {
    type Output = OperatorSum;
    fn add(self, rhs: &OperatorSum) -> OperatorSum {
        self.plus(rhs)
    }
}
