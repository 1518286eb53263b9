//! Chain-gadget Hamiltonian constructors.
//!
//! The chain couples each data qubit to its two neighbouring ancillae through
//! three-body parity clauses; the boundary ancillae are virtual and replaced
//! by fixed values at construction time, so the first and last clauses come
//! out two-body. Subspace drivers hop single topological defects along the
//! chain; calibrating their strength against the chain strength produces an
//! effective many-body parity term of tunable strength on the encoded
//! subspace.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{OperatorSum, Pauli, PauliString};
use crate::register::QubitRegister;

/// Ancilla driving choice for a gadget instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Driver {
    /// No driver: the bare chain.
    None,
    /// Unconditional single-X ancilla driving of strength `beta`.
    SingleX { beta: f64 },
    /// Five-body subspace driver (defect hopping, X-type on ancillae).
    FiveBody,
    /// Three-body gauge-equivalent subspace driver.
    ThreeBody,
}

impl Driver {
    pub fn is_subspace(&self) -> bool {
        matches!(self, Driver::FiveBody | Driver::ThreeBody)
    }
}

/// Virtual boundary values of the chain. The left boundary is always +1;
/// the right boundary is -1 for the kinked chain, +1 otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VirtualBoundary {
    pub left: i8,
    pub right: i8,
}

impl VirtualBoundary {
    pub fn from_kinked(kinked: bool) -> Self {
        Self {
            left: 1,
            right: if kinked { -1 } else { 1 },
        }
    }
}

/// Single source of truth for a gadget instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GadgetConfig {
    pub n_data: usize,
    pub kinked: bool,
    pub gamma: f64,
    pub alpha: f64,
    pub driver: Driver,
}

impl GadgetConfig {
    pub fn new(n_data: usize, kinked: bool, gamma: f64, alpha: f64, driver: Driver) -> Self {
        Self {
            n_data,
            kinked,
            gamma,
            alpha,
            driver,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_data < 2 {
            return Err(Error::Config(format!(
                "nd must be at least 2, got {}",
                self.n_data
            )));
        }
        if !self.gamma.is_finite() || self.gamma <= 0.0 {
            return Err(Error::Config(format!(
                "gamma must be positive, got {}",
                self.gamma
            )));
        }
        if !self.alpha.is_finite() || self.alpha < 0.0 {
            return Err(Error::Config(format!(
                "alpha must be non-negative, got {}",
                self.alpha
            )));
        }
        if let Driver::SingleX { beta } = self.driver {
            if !beta.is_finite() {
                return Err(Error::Config(
                    "single-x driver strength must be finite".into(),
                ));
            }
        }
        self.register().map(|_| ())
    }

    pub fn register(&self) -> Result<QubitRegister> {
        QubitRegister::chain(self.n_data)
    }

    pub fn boundary(&self) -> VirtualBoundary {
        VirtualBoundary::from_kinked(self.kinked)
    }

    pub fn n_ancilla(&self) -> usize {
        self.n_data - 1
    }
}

/// Z factor of ancilla `i` for clause construction: `Some((qubit, +1))` for a
/// physical ancilla, `None` with the boundary value folded into `sign` for a
/// virtual one.
fn ancilla_z(config: &GadgetConfig, reg: &QubitRegister, i: isize) -> (Option<usize>, f64) {
    let boundary = config.boundary();
    if i < 0 {
        (None, boundary.left as f64)
    } else if i as usize >= config.n_ancilla() {
        (None, boundary.right as f64)
    } else {
        (Some(reg.ancilla_qubit(i as usize)), 1.0)
    }
}

/// Chain Hamiltonian: one parity clause per data qubit, each contributing
/// energy 0 when satisfied and 1 when broken. Virtual boundary ancillae are
/// substituted at construction, so the boundary clauses are two-body.
pub fn build_chain(config: &GadgetConfig) -> Result<OperatorSum> {
    config.validate()?;
    let reg = config.register()?;
    let mut terms = Vec::new();
    for i in 0..config.n_data {
        let mut factors = vec![(i, Pauli::Z)];
        let mut sign = 1.0;
        for a in [i as isize - 1, i as isize] {
            let (qubit, s) = ancilla_z(config, &reg, a);
            sign *= s;
            if let Some(q) = qubit {
                factors.push((q, Pauli::Z));
            }
        }
        terms.push(PauliString::identity(0.5));
        terms.push(PauliString::new(-0.5 * sign, factors)?);
    }
    Ok(OperatorSum::new(terms))
}

/// Unconditional ancilla driver `-beta * sum_i X^a_i`.
pub fn build_single_x_driver(config: &GadgetConfig, beta: f64) -> Result<OperatorSum> {
    config.validate()?;
    if !beta.is_finite() {
        return Err(Error::Config("beta must be finite".into()));
    }
    let reg = config.register()?;
    let terms = (0..config.n_ancilla())
        .map(|i| PauliString::single(-beta, reg.ancilla_qubit(i), Pauli::X))
        .collect();
    Ok(OperatorSum::new(terms))
}

/// Five-body subspace driver `-(1/2) sum_i X^a_i (1 - Z_i Z_{i+1} Z^a_{i-1} Z^a_{i+1})`.
///
/// The overall -1/2 normalization fixes the one-defect hopping block to a
/// tridiagonal matrix with -1 off-diagonals, so per unit strength the
/// single-defect sector gains exactly `-2 cos(pi / (n_d + 1))` and the beta
/// calibration below is exact. Terms at the ends reduce to weight 4 (weight 3
/// for the two-data-qubit chain) through virtual-boundary substitution.
pub fn build_five_body_driver(config: &GadgetConfig) -> Result<OperatorSum> {
    config.validate()?;
    let reg = config.register()?;
    let mut terms = Vec::new();
    for i in 0..config.n_data - 1 {
        let xa = reg.ancilla_qubit(i);
        terms.push(PauliString::single(-0.5, xa, Pauli::X));
        let mut factors = vec![(xa, Pauli::X), (i, Pauli::Z), (i + 1, Pauli::Z)];
        let mut sign = 1.0;
        for a in [i as isize - 1, i as isize + 1] {
            let (qubit, s) = ancilla_z(config, &reg, a);
            sign *= s;
            if let Some(q) = qubit {
                factors.push((q, Pauli::Z));
            }
        }
        terms.push(PauliString::new(0.5 * sign, factors)?);
    }
    Ok(OperatorSum::new(terms))
}

/// Three-body subspace driver `-(1/2) sum_i X^a_i (Z_i Z_{i+1} - Z^a_{i-1} Z^a_{i+1})`.
///
/// Restricted to a one-defect sector this matches the five-body driver up to
/// the diagonal gauge transform; it trades operator weight for a data-qubit
/// dependent hopping sign.
pub fn build_three_body_driver(config: &GadgetConfig) -> Result<OperatorSum> {
    config.validate()?;
    let reg = config.register()?;
    let mut terms = Vec::new();
    for i in 0..config.n_data - 1 {
        let xa = reg.ancilla_qubit(i);
        terms.push(PauliString::new(
            -0.5,
            [(xa, Pauli::X), (i, Pauli::Z), (i + 1, Pauli::Z)],
        )?);
        let mut factors = vec![(xa, Pauli::X)];
        let mut sign = 1.0;
        for a in [i as isize - 1, i as isize + 1] {
            let (qubit, s) = ancilla_z(config, &reg, a);
            sign *= s;
            if let Some(q) = qubit {
                factors.push((q, Pauli::Z));
            }
        }
        terms.push(PauliString::new(0.5 * sign, factors)?);
    }
    Ok(OperatorSum::new(terms))
}

/// Driver strength that makes the one-defect ground sit exactly `alpha` above
/// the zero-defect sector: `beta = (gamma - alpha) / (2 cos(pi / (n_d + 1)))`.
pub fn calibrate_beta(gamma: f64, alpha: f64, n_data: usize) -> Result<f64> {
    if gamma <= alpha {
        return Err(Error::Calibration { gamma, alpha });
    }
    let denom = 2.0 * (std::f64::consts::PI / (n_data as f64 + 1.0)).cos();
    Ok((gamma - alpha) / denom)
}

/// Calibrated gadget `gamma * chain + beta * driver` for a subspace driver.
pub fn build_gadget(config: &GadgetConfig) -> Result<OperatorSum> {
    config.validate()?;
    let driver = match config.driver {
        Driver::FiveBody => build_five_body_driver(config)?,
        Driver::ThreeBody => build_three_body_driver(config)?,
        _ => {
            return Err(Error::Config(
                "calibrated gadget requires a subspace driver (five-body or three-body)".into(),
            ))
        }
    };
    if config.alpha <= 0.0 {
        return Err(Error::Config(format!(
            "calibrated gadget requires alpha > 0, got {}",
            config.alpha
        )));
    }
    let beta = calibrate_beta(config.gamma, config.alpha, config.n_data)?;
    Ok(build_chain(config)?
        .scaled(config.gamma)
        .plus(&driver.scaled(beta)))
}

/// Physical string `X_i X_{i+1} X^a_i` implementing the logical `X_i X_{i+1}`
/// on the encoded subspace.
pub fn build_logical_xx(config: &GadgetConfig, i: usize) -> Result<OperatorSum> {
    config.validate()?;
    if i + 1 >= config.n_data {
        return Err(Error::Config(format!(
            "logical XX index {i} out of range for nd = {}",
            config.n_data
        )));
    }
    let reg = config.register()?;
    Ok(OperatorSum::from_term(PauliString::new(
        1.0,
        [
            (i, Pauli::X),
            (i + 1, Pauli::X),
            (reg.ancilla_qubit(i), Pauli::X),
        ],
    )?))
}

/// One realization of the random single-qubit terms used in the
/// minor-embedding experiment: `g_i ~ Normal(0, eta)`, reproducible from the
/// seed (standard-normal draws scaled by `eta`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseDraw {
    pub g: Vec<f64>,
    pub eta: f64,
    pub seed: u64,
}

impl NoiseDraw {
    pub fn draw(seed: u64, eta: f64, n: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = (0..n)
            .map(|_| {
                let u: f64 = StandardNormal.sample(&mut rng);
                eta * u
            })
            .collect();
        Self { g, eta, seed }
    }

    pub fn zero(n: usize) -> Self {
        Self {
            g: vec![0.0; n],
            eta: 0.0,
            seed: 0,
        }
    }
}

/// Minor-embedding system Hamiltonian: calibrated gadget, random single-qubit
/// Z terms on the data qubits, and whole-chain penalty strings
/// `gamma * X_i X_{i+1} X^a_i`.
pub fn build_minor_embedding_system(
    config: &GadgetConfig,
    noise: &NoiseDraw,
) -> Result<OperatorSum> {
    if noise.g.len() != config.n_data {
        return Err(Error::Config(format!(
            "noise draw has {} entries but nd = {}",
            noise.g.len(),
            config.n_data
        )));
    }
    let mut system = build_gadget(config)?;
    let noise_terms = OperatorSum::new(
        noise
            .g
            .iter()
            .enumerate()
            .map(|(i, &gi)| PauliString::single(Complex64::new(gi, 0.0), i, Pauli::Z))
            .collect(),
    );
    system = system.plus(&noise_terms);
    for i in 0..config.n_data - 1 {
        system = system.plus(&build_logical_xx(config, i)?.scaled(config.gamma));
    }
    Ok(system)
}
