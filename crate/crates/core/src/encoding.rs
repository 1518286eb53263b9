//! Encoded-subspace machinery.
//!
//! The gadget Hamiltonian commutes with every data-qubit Z, so it splits into
//! one ancilla-space block per data configuration `z`. This module analyzes
//! the defect combinatorics of each block, diagonalizes the blocks exactly,
//! and assembles the encoding unitary whose column `(z, a)` is the `a`-th
//! eigenstate of block `z`. Analytic cross-checks pin the ground states:
//! a satisfiable `z` has the unique cumulative-parity ancilla state, an
//! unsatisfiable `z` carries the sine-transform ground row over its one-defect
//! configurations.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::dense::{symmetric_eigen_sorted, DenseOperator};
use crate::error::{Error, Result};
use crate::gadget::{build_gadget, GadgetConfig};
use crate::pauli::OperatorSum;
use crate::register::{format_word, with_word_bit, word_bit, word_parity, QubitRegister};
use crate::state::StateVector;

/// Tolerance for the analytic ground-state cross-checks during encoding
/// construction.
const CROSS_CHECK_TOLERANCE: f64 = 1e-9;

/// Eigenvalues closer than this are treated as degenerate for tie-breaking.
const DEGENERACY_TOLERANCE: f64 = 1e-9;

/// Data parity (0 = even, 1 = odd) for which every chain clause is
/// satisfiable: even for the unkinked chain, odd for the kinked one.
pub fn satisfiable_parity(config: &GadgetConfig) -> usize {
    usize::from(config.kinked)
}

/// Cumulative-parity ancilla word for a satisfiable data word.
pub fn ground_ancilla_word(z: usize, config: &GadgetConfig) -> usize {
    let n = config.n_data;
    let mut a = 0;
    let mut parity = 0;
    for i in 0..n - 1 {
        parity ^= word_bit(z, i, n);
        a = with_word_bit(a, i, n - 1, parity);
    }
    a
}

/// Ancilla word with a single defect at clause `j`: cumulative parity with a
/// kink applied from index `j` onwards.
pub fn one_defect_ancilla_word(z: usize, j: usize, config: &GadgetConfig) -> usize {
    let n = config.n_data;
    let mut a = ground_ancilla_word(z, config);
    for i in j..n - 1 {
        a ^= 1 << (n - 2 - i);
    }
    a
}

/// Ground-space ancilla assignment(s) for a data word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroundAncillae {
    /// Satisfiable sector: the unique zero-defect assignment.
    Unique(usize),
    /// Frustrated sector: one assignment per defect position `j = 0..n_d`.
    Degenerate(Vec<usize>),
}

/// Defect analysis of one data configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefectProfile {
    pub z: usize,
    pub satisfiable: bool,
    /// Broken-clause count mod 2 in the minimal-energy sector.
    pub defect_parity: usize,
    pub ground_ancillae: GroundAncillae,
}

/// Classify a data word and produce its minimal-energy ancilla assignments.
pub fn analyze_defects(z: usize, config: &GadgetConfig) -> DefectProfile {
    let satisfiable = word_parity(z) == satisfiable_parity(config);
    if satisfiable {
        DefectProfile {
            z,
            satisfiable,
            defect_parity: 0,
            ground_ancillae: GroundAncillae::Unique(ground_ancilla_word(z, config)),
        }
    } else {
        let assignments = (0..config.n_data)
            .map(|j| one_defect_ancilla_word(z, j, config))
            .collect();
        DefectProfile {
            z,
            satisfiable,
            defect_parity: 1,
            ground_ancillae: GroundAncillae::Degenerate(assignments),
        }
    }
}

/// Indices of broken clauses for a bare configuration `(z, a)`.
pub fn defect_positions(z: usize, a: usize, config: &GadgetConfig) -> Vec<usize> {
    let n = config.n_data;
    let mut positions = Vec::new();
    for i in 0..n {
        let left = if i == 0 { 0 } else { word_bit(a, i - 1, n - 1) };
        let right = if i == n - 1 {
            usize::from(config.kinked)
        } else {
            word_bit(a, i, n - 1)
        };
        if word_bit(z, i, n) ^ left ^ right == 1 {
            positions.push(i);
        }
    }
    positions
}

/// Orthogonal sine transform diagonalizing the defect-hopping block.
///
/// `S_kj = sqrt(2/(n+1)) sin(pi (k+1)(j+1) / (n+1))`; row `k` is the
/// eigenvector of the tridiagonal hopping matrix with eigenvalue
/// `lambda_k = -2 cos(pi (k+1) / (n+1))`.
#[derive(Debug, Clone)]
pub struct SineTransform {
    n: usize,
    matrix: DMatrix<f64>,
}

impl SineTransform {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "sine transform needs a positive dimension");
        let norm = (2.0 / (n as f64 + 1.0)).sqrt();
        let matrix = DMatrix::from_fn(n, n, |k, j| {
            norm * (std::f64::consts::PI * ((k + 1) * (j + 1)) as f64 / (n as f64 + 1.0)).sin()
        });
        Self { n, matrix }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn element(&self, k: usize, j: usize) -> f64 {
        self.matrix[(k, j)]
    }

    pub fn eigenvalue(&self, k: usize) -> f64 {
        -2.0 * (std::f64::consts::PI * (k + 1) as f64 / (self.n as f64 + 1.0)).cos()
    }

    /// Ground row `S_{0j}`: the one-defect ground wavefunction over defect
    /// positions.
    pub fn ground_row(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.element(0, j)).collect()
    }

    /// Max entrywise magnitude of `S S^T - I`.
    pub fn orthogonality_residual(&self) -> f64 {
        let prod = &self.matrix * self.matrix.transpose();
        let eye = DMatrix::<f64>::identity(self.n, self.n);
        (prod - eye).iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    /// The tridiagonal hopping matrix (unit negative off-diagonals) that this
    /// transform diagonalizes to `diag(lambda_k)`.
    pub fn hopping_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(
            self.n,
            self.n,
            |r, c| {
                if r.abs_diff(c) == 1 {
                    -1.0
                } else {
                    0.0
                }
            },
        )
    }
}

/// Per-sector eigenbases and energies of a gadget Hamiltonian, plus the
/// machinery to move between bare and dressed frames.
#[derive(Debug, Clone)]
pub struct EncodingBundle {
    config: GadgetConfig,
    register: QubitRegister,
    /// Per data word: eigenvector columns of the ancilla block, energy order.
    sector_vectors: Vec<DMatrix<f64>>,
    /// Per data word: ascending block eigenvalues.
    sector_energies: Vec<Vec<f64>>,
}

impl EncodingBundle {
    pub fn config(&self) -> &GadgetConfig {
        &self.config
    }

    pub fn register(&self) -> &QubitRegister {
        &self.register
    }

    pub fn sector_energies(&self, z: usize) -> &[f64] {
        &self.sector_energies[z]
    }

    pub fn ground_energy(&self, z: usize) -> f64 {
        self.sector_energies[z][0]
    }

    /// Minimal energy over frustrated sectors minus minimal energy over
    /// satisfiable sectors; the calibrated gadget pins this to alpha.
    pub fn parity_splitting(&self) -> f64 {
        let sat = satisfiable_parity(&self.config);
        let mut min_sat = f64::INFINITY;
        let mut min_unsat = f64::INFINITY;
        for z in 0..self.register.data_dim() {
            let e = self.ground_energy(z);
            if word_parity(z) == sat {
                min_sat = min_sat.min(e);
            } else {
                min_unsat = min_unsat.min(e);
            }
        }
        min_unsat - min_sat
    }

    /// Ancilla-space eigenvector of sector `z` at energy rank `a`.
    pub fn sector_state(&self, z: usize, a: usize) -> DVector<f64> {
        self.sector_vectors[z].column(a).into_owned()
    }

    /// Full encoding unitary as a dense matrix. Column `(z, a)` holds
    /// `|z> (x) |psi_{z,a}>`.
    pub fn u_enc(&self) -> DenseOperator {
        let dim = self.register.dim();
        let adim = self.register.ancilla_dim();
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for z in 0..self.register.data_dim() {
            let block = &self.sector_vectors[z];
            for a in 0..adim {
                for r in 0..adim {
                    m[(
                        self.register.basis_index(z, r),
                        self.register.basis_index(z, a),
                    )] = Complex64::new(block[(r, a)], 0.0);
                }
            }
        }
        DenseOperator::new(m)
    }

    /// Apply the encoder `U_enc` block-wise.
    pub fn apply_encoder(&self, state: &StateVector) -> StateVector {
        self.apply_blocks(state, false)
    }

    /// Apply the decoder `U_enc^dagger` block-wise.
    pub fn apply_decoder(&self, state: &StateVector) -> StateVector {
        self.apply_blocks(state, true)
    }

    fn apply_blocks(&self, state: &StateVector, adjoint: bool) -> StateVector {
        assert_eq!(
            state.dim(),
            self.register.dim(),
            "state does not fit the register"
        );
        let adim = self.register.ancilla_dim();
        let mut out = DVector::<Complex64>::zeros(state.dim());
        for z in 0..self.register.data_dim() {
            let block = &self.sector_vectors[z];
            for row in 0..adim {
                let mut acc = Complex64::new(0.0, 0.0);
                for col in 0..adim {
                    let entry = if adjoint {
                        block[(col, row)]
                    } else {
                        block[(row, col)]
                    };
                    acc += entry * state.amplitude(self.register.basis_index(z, col));
                }
                out[self.register.basis_index(z, row)] = acc;
            }
        }
        StateVector::from_amplitudes(self.register.total(), out).expect("dimension preserved")
    }

    /// Bare projector onto the ancillae-all-zero subspace.
    pub fn projector(&self) -> DenseOperator {
        let dim = self.register.dim();
        let mut diag = vec![Complex64::new(0.0, 0.0); dim];
        for z in 0..self.register.data_dim() {
            diag[self.register.basis_index(z, 0)] = Complex64::new(1.0, 0.0);
        }
        DenseOperator::from_diagonal(&diag)
    }

    /// Dressed projector `U_enc P U_enc^dagger` onto the encoded subspace.
    pub fn dressed_projector(&self) -> DenseOperator {
        let w = self.logical_columns();
        DenseOperator::new(&w * w.adjoint())
    }

    /// The `2^total x 2^n_data` matrix whose column `z` is the dressed ground
    /// state of sector `z` (the columns `U_enc` maps out of the projector).
    pub fn logical_columns(&self) -> DMatrix<Complex64> {
        let dim = self.register.dim();
        let ddim = self.register.data_dim();
        let adim = self.register.ancilla_dim();
        let mut w = DMatrix::<Complex64>::zeros(dim, ddim);
        for z in 0..ddim {
            let block = &self.sector_vectors[z];
            for r in 0..adim {
                w[(self.register.basis_index(z, r), z)] = Complex64::new(block[(r, 0)], 0.0);
            }
        }
        w
    }

    /// Dressed ground state of data sector `z`.
    pub fn dressed_ground(&self, z: usize) -> StateVector {
        let bare = StateVector::basis(self.register.total(), self.register.basis_index(z, 0));
        self.apply_encoder(&bare)
    }

    /// Dress a logical state: `U_enc (|logical> (x) |0...0>)`.
    pub fn dressed_logical_state(&self, logical: &StateVector) -> Result<StateVector> {
        if logical.dim() != self.register.data_dim() {
            return Err(Error::Config(format!(
                "logical state has dimension {} but the data space has {}",
                logical.dim(),
                self.register.data_dim()
            )));
        }
        let w = self.logical_columns();
        let amplitudes = &w * logical.amplitudes();
        StateVector::from_amplitudes(self.register.total(), amplitudes)
    }

    /// Max off-diagonal magnitude of `U^dagger H U` over all sector blocks.
    pub fn diagonalization_residual(&self, h: &OperatorSum) -> Result<f64> {
        let blocks = sector_blocks(h, &self.register)?;
        let mut max = 0.0_f64;
        for (z, block) in blocks.iter().enumerate() {
            let v = &self.sector_vectors[z];
            let rotated = v.transpose() * block * v;
            for r in 0..rotated.nrows() {
                for c in 0..rotated.ncols() {
                    if r != c {
                        max = max.max(rotated[(r, c)].abs());
                    }
                }
            }
        }
        Ok(max)
    }

    /// Max entrywise residual of per-sector orthogonality `V^T V = I`.
    pub fn unitarity_residual(&self) -> f64 {
        let adim = self.register.ancilla_dim();
        let eye = DMatrix::<f64>::identity(adim, adim);
        self.sector_vectors
            .iter()
            .map(|v| {
                (v.transpose() * v - &eye)
                    .iter()
                    .map(|x| x.abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }
}

/// Extract the real ancilla-space block of `op` for every data word. Errors
/// if `op` mixes data sectors or has complex entries.
pub fn sector_blocks(op: &OperatorSum, reg: &QubitRegister) -> Result<Vec<DMatrix<f64>>> {
    op.check_register(reg)?;
    let adim = reg.ancilla_dim();
    let mut blocks = vec![DMatrix::<f64>::zeros(adim, adim); reg.data_dim()];
    for (z, block) in blocks.iter_mut().enumerate() {
        for a in 0..adim {
            let basis = reg.basis_index(z, a);
            for term in op.terms() {
                let (target, phase) = term.apply_to_basis(reg, basis);
                if reg.data_word(target) != z {
                    return Err(Error::Contract(
                        "operator mixes data sectors; per-sector spectra are undefined".into(),
                    ));
                }
                if phase.im.abs() > 1e-14 {
                    return Err(Error::Contract("operator has complex sector blocks".into()));
                }
                block[(reg.ancilla_word(target), a)] += phase.re;
            }
        }
    }
    Ok(blocks)
}

/// Ascending eigenvalues of every data-sector block of a block-diagonal
/// operator (chain, drivers, or full gadget).
pub fn sector_spectra(op: &OperatorSum, reg: &QubitRegister) -> Result<Vec<Vec<f64>>> {
    Ok(sector_blocks(op, reg)?
        .into_iter()
        .map(|b| {
            let (values, _) = symmetric_eigen_sorted(&b);
            values.iter().copied().collect()
        })
        .collect())
}

/// Deterministic eigenbasis post-processing: within near-degenerate groups,
/// order columns by the index of their largest-magnitude amplitude; fix each
/// column sign so that entry is positive.
fn fix_eigenbasis(values: &mut DVector<f64>, vectors: &mut DMatrix<f64>) {
    let n = values.len();
    let anchor = |col: nalgebra::DVectorView<f64>| -> usize {
        let mut best = 0;
        let mut best_mag = -1.0;
        for (i, &x) in col.iter().enumerate() {
            if x.abs() > best_mag + 1e-12 {
                best_mag = x.abs();
                best = i;
            }
        }
        best
    };
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (values[end] - values[start]).abs() < DEGENERACY_TOLERANCE {
            end += 1;
        }
        if end - start > 1 {
            let mut cols: Vec<(usize, DVector<f64>)> = (start..end)
                .map(|k| (anchor(vectors.column(k)), vectors.column(k).into_owned()))
                .collect();
            cols.sort_by_key(|(a, _)| *a);
            for (offset, (_, col)) in cols.into_iter().enumerate() {
                vectors.set_column(start + offset, &col);
            }
        }
        start = end;
    }
    for mut col in vectors.column_iter_mut() {
        let mut best = 0;
        let mut best_mag = -1.0;
        for (i, &x) in col.iter().enumerate() {
            if x.abs() > best_mag + 1e-12 {
                best_mag = x.abs();
                best = i;
            }
        }
        if col[best] < 0.0 {
            col.neg_mut();
        }
    }
}

/// Diagonalize every data sector of the calibrated gadget and assemble the
/// encoding bundle. Fails if the analytic ground-state cross-checks miss.
pub fn build_encoding(config: &GadgetConfig) -> Result<EncodingBundle> {
    if !config.driver.is_subspace() {
        return Err(Error::Config(
            "encoding construction requires a subspace driver (five-body or three-body)".into(),
        ));
    }
    let register = config.register()?;
    let h = build_gadget(config)?;
    let blocks = sector_blocks(&h, &register)?;
    let sine = SineTransform::new(config.n_data);

    let mut sector_vectors = Vec::with_capacity(register.data_dim());
    let mut sector_energies = Vec::with_capacity(register.data_dim());
    for (z, block) in blocks.into_iter().enumerate() {
        let (mut values, mut vectors) = symmetric_eigen_sorted(&block);
        fix_eigenbasis(&mut values, &mut vectors);
        cross_check_ground(config, z, &vectors.column(0).into_owned(), &sine)?;
        sector_energies.push(values.iter().copied().collect());
        sector_vectors.push(vectors);
    }
    Ok(EncodingBundle {
        config: *config,
        register,
        sector_vectors,
        sector_energies,
    })
}

/// Verify the numerically obtained sector ground state against the analytic
/// form: the cumulative-parity basis state for satisfiable sectors, the sine
/// ground row over one-defect configurations otherwise (up to gauge for the
/// three-body driver).
fn cross_check_ground(
    config: &GadgetConfig,
    z: usize,
    ground: &DVector<f64>,
    sine: &SineTransform,
) -> Result<()> {
    let profile = analyze_defects(z, config);
    let signed = matches!(config.driver, crate::gadget::Driver::FiveBody);
    match &profile.ground_ancillae {
        GroundAncillae::Unique(a) => {
            let err = (ground[*a].abs() - 1.0).abs();
            if err > CROSS_CHECK_TOLERANCE {
                return Err(Error::Numerical(format!(
                    "sector {} ground state deviates from the parity basis state by {err:.3e}",
                    format_word(z, config.n_data)
                )));
            }
        }
        GroundAncillae::Degenerate(assignments) => {
            for (j, &a) in assignments.iter().enumerate() {
                let expected = sine.element(0, j);
                let err = if signed {
                    (ground[a] - expected).abs()
                } else {
                    (ground[a].abs() - expected).abs()
                };
                if err > CROSS_CHECK_TOLERANCE {
                    return Err(Error::Numerical(format!(
                        "sector {} ground amplitude at defect {j} deviates from the sine row by {err:.3e}",
                        format_word(z, config.n_data)
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Logical block of a physical operator: `P U^dagger O U P` restricted to the
/// `2^n_data`-dimensional encoded subspace.
pub fn effective_operator(op: &OperatorSum, bundle: &EncodingBundle) -> Result<DenseOperator> {
    let reg = bundle.register();
    op.check_register(reg)?;
    let w = bundle.logical_columns();
    let ddim = reg.data_dim();
    let mut applied = DMatrix::<Complex64>::zeros(reg.dim(), ddim);
    for col in 0..ddim {
        for basis in 0..reg.dim() {
            let amp = w[(basis, col)];
            if amp != Complex64::new(0.0, 0.0) {
                for term in op.terms() {
                    let (target, phase) = term.apply_to_basis(reg, basis);
                    applied[(target, col)] += phase * amp;
                }
            }
        }
    }
    Ok(DenseOperator::new(w.adjoint() * applied))
}

/// Closed-form logical driving overlap `<psi_{z1,0}|psi_{z2,0}> = S_{0,i}` for
/// data words differing in exactly bit `i`.
pub fn logical_overlap(z1: usize, z2: usize, i: usize, config: &GadgetConfig) -> Result<f64> {
    config.validate()?;
    let n = config.n_data;
    if z1 >= 1 << n || z2 >= 1 << n {
        return Err(Error::Contract("data word out of range".into()));
    }
    let diff = z1 ^ z2;
    if diff.count_ones() != 1 {
        return Err(Error::Contract(
            "logical overlap is defined for data words differing in exactly one bit".into(),
        ));
    }
    let flipped = n - 1 - diff.trailing_zeros() as usize;
    if flipped != i {
        return Err(Error::Contract(format!(
            "data words differ at bit {flipped}, not at the requested bit {i}"
        )));
    }
    Ok(SineTransform::new(n).element(0, i))
}

/// Diagonal gauge unitary: phase `(-1)^{z_j}` on basis states carrying exactly
/// one defect at position `j`, `+1` elsewhere (zero- and multi-defect states).
pub fn gauge_transform(config: &GadgetConfig) -> Result<DenseOperator> {
    config.validate()?;
    let reg = config.register()?;
    let mut diag = vec![Complex64::new(1.0, 0.0); reg.dim()];
    for (basis, entry) in diag.iter_mut().enumerate() {
        let z = reg.data_word(basis);
        let a = reg.ancilla_word(basis);
        let positions = defect_positions(z, a, config);
        if positions.len() == 1 && word_bit(z, positions[0], config.n_data) == 1 {
            *entry = Complex64::new(-1.0, 0.0);
        }
    }
    Ok(DenseOperator::from_diagonal(&diag))
}
