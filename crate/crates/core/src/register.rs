//! Qubit register layout and bit conventions.
//!
//! The register is split into `n_data` data qubits followed by `n_ancilla`
//! ancilla qubits. Global qubit indices run `0..total` with data qubits at
//! `0..n_data` and ancilla `i` at `n_data + i`.
//!
//! Basis convention (fixed for the whole crate): computational basis states
//! are indexed so that **qubit 0 is the most significant bit** of the basis
//! index. Equivalently, a basis index factors as
//! `index = data_word * 2^n_ancilla + ancilla_word`, and within each word the
//! lowest-numbered qubit sits in the highest bit. Bit strings printed by
//! [`format_word`] therefore read left-to-right in qubit order.

use crate::error::{Error, Result};

/// Default cap on the total qubit count so dense realization stays tractable.
pub const DEFAULT_QUBIT_CAP: usize = 14;

/// Environment variable that overrides [`DEFAULT_QUBIT_CAP`].
pub const QUBIT_CAP_ENV: &str = "GADGETSIM_MAX_QUBITS";

/// Effective cap on total qubits: `GADGETSIM_MAX_QUBITS` if set and parseable,
/// otherwise [`DEFAULT_QUBIT_CAP`].
pub fn qubit_cap() -> usize {
    std::env::var(QUBIT_CAP_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .unwrap_or(DEFAULT_QUBIT_CAP)
}

/// A fixed-size register of data and ancilla qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QubitRegister {
    n_data: usize,
    n_ancilla: usize,
}

impl QubitRegister {
    /// Register with an arbitrary data/ancilla split. Total must be at
    /// least 1 and within the configured cap.
    pub fn new(n_data: usize, n_ancilla: usize) -> Result<Self> {
        let total = n_data + n_ancilla;
        if total == 0 {
            return Err(Error::Config(
                "register must hold at least one qubit".into(),
            ));
        }
        let cap = qubit_cap();
        if total > cap {
            return Err(Error::Config(format!(
                "register of {total} qubits exceeds the dense simulation cap of {cap}"
            )));
        }
        Ok(Self { n_data, n_ancilla })
    }

    /// Chain-gadget register: `n_data` data qubits and `n_data - 1` ancillae.
    pub fn chain(n_data: usize) -> Result<Self> {
        if n_data < 2 {
            return Err(Error::Config(format!(
                "chain gadgets need at least 2 data qubits, got {n_data}"
            )));
        }
        Self::new(n_data, n_data - 1)
    }

    pub fn n_data(&self) -> usize {
        self.n_data
    }

    pub fn n_ancilla(&self) -> usize {
        self.n_ancilla
    }

    pub fn total(&self) -> usize {
        self.n_data + self.n_ancilla
    }

    /// Hilbert-space dimension `2^total`.
    pub fn dim(&self) -> usize {
        1 << self.total()
    }

    /// Dimension of the data subspace, `2^n_data`.
    pub fn data_dim(&self) -> usize {
        1 << self.n_data
    }

    /// Dimension of the ancilla subspace, `2^n_ancilla`.
    pub fn ancilla_dim(&self) -> usize {
        1 << self.n_ancilla
    }

    /// Global index of ancilla qubit `i`.
    pub fn ancilla_qubit(&self, i: usize) -> usize {
        self.n_data + i
    }

    /// Bit of `qubit` in basis state `index` (qubit 0 = most significant).
    pub fn qubit_bit(&self, index: usize, qubit: usize) -> usize {
        (index >> (self.total() - 1 - qubit)) & 1
    }

    /// Mask that flips `qubit` in a basis index.
    pub fn flip_mask(&self, qubit: usize) -> usize {
        1 << (self.total() - 1 - qubit)
    }

    /// Data word (upper `n_data` bits) of a basis index.
    pub fn data_word(&self, index: usize) -> usize {
        index >> self.n_ancilla
    }

    /// Ancilla word (lower `n_ancilla` bits) of a basis index.
    pub fn ancilla_word(&self, index: usize) -> usize {
        index & (self.ancilla_dim() - 1)
    }

    /// Basis index of `|data_word, ancilla_word>`.
    pub fn basis_index(&self, data_word: usize, ancilla_word: usize) -> usize {
        (data_word << self.n_ancilla) | ancilla_word
    }
}

/// Bit `pos` of a `width`-bit word under the qubit-0-is-MSB convention.
pub fn word_bit(word: usize, pos: usize, width: usize) -> usize {
    (word >> (width - 1 - pos)) & 1
}

/// Set bit `pos` of a `width`-bit word to `bit`.
pub fn with_word_bit(word: usize, pos: usize, width: usize, bit: usize) -> usize {
    let mask = 1 << (width - 1 - pos);
    if bit == 0 {
        word & !mask
    } else {
        word | mask
    }
}

/// Parity (0 or 1) of the number of set bits in `word`.
pub fn word_parity(word: usize) -> usize {
    (word.count_ones() & 1) as usize
}

/// Render a word as a bit string in qubit order (qubit 0 leftmost).
pub fn format_word(word: usize, width: usize) -> String {
    (0..width)
        .map(|p| {
            if word_bit(word, p, width) == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}
