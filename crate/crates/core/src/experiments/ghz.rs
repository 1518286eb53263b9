//! GHZ preparation experiment: evolve the dressed all-plus state under the
//! calibrated gadget and track the GHZ fidelity and every dressed X
//! observable.

use nalgebra::DVector;
use num_complex::Complex64;

use super::gamma_key;
use super::result::{ExperimentResult, Table};
use super::spec::{ExperimentKind, ExperimentSpec, PropagatorMode};
use crate::dense::{realize, Sign, SpectralDecomposition};
use crate::encoding::{build_encoding, effective_operator};
use crate::error::{Error, Result};
use crate::gadget::{build_gadget, GadgetConfig};
use crate::parallel;
use crate::pauli::{OperatorSum, Pauli, PauliString};
use crate::register::{word_parity, QubitRegister};
use crate::state::{evolve_with, StateVector};

/// The entangled target reached at `t = pi/2`: `(|+>^n + i |->^n) / sqrt(2)`
/// over the data space.
pub fn ghz_logical_state(n_data: usize) -> StateVector {
    let dim = 1 << n_data;
    let norm = 1.0 / ((2 * dim) as f64).sqrt();
    let amplitudes = DVector::from_iterator(
        dim,
        (0..dim).map(|z| {
            let sign = if word_parity(z) == 0 { 1.0 } else { -1.0 };
            Complex64::new(norm, sign * norm)
        }),
    );
    StateVector::from_amplitudes(n_data, amplitudes).expect("dimension matches")
}

fn x_observables(n_data: usize) -> Vec<OperatorSum> {
    (0..n_data)
        .map(|i| OperatorSum::from_term(PauliString::single(1.0, i, Pauli::X)))
        .collect()
}

struct GhzTrace {
    rows: Vec<Vec<f64>>,
    fidelity_half_pi: f64,
    fidelity_pi: f64,
    x_mean_pi: f64,
}

/// Physical run: full-register evolution of the dressed state.
fn ghz_physical(config: &GadgetConfig, times: &[f64]) -> Result<GhzTrace> {
    let reg = config.register()?;
    let bundle = build_encoding(config)?;
    let h = build_gadget(config)?;
    let decomp = SpectralDecomposition::new(&realize(&h, &reg)?)?;
    let psi0 = bundle.dressed_logical_state(&StateVector::plus_all(config.n_data))?;
    let target = bundle.dressed_logical_state(&ghz_logical_state(config.n_data))?;
    let observables = x_observables(config.n_data);

    let eval = |t: f64| -> Result<Vec<f64>> {
        let psi = evolve_with(&psi0, &decomp, t, Sign::Neg)?;
        let mut row = vec![t, target.overlap_sq(&psi)];
        let decoded = bundle.apply_decoder(&psi);
        for obs in &observables {
            row.push(decoded.expectation(obs, &reg)?);
        }
        Ok(row)
    };
    let rows = parallel::par_try_map(times, |&t| eval(t))?;
    let half = eval(std::f64::consts::FRAC_PI_2)?;
    let full = eval(std::f64::consts::PI)?;
    let x_mean_pi = full[2..].iter().sum::<f64>() / config.n_data as f64;
    Ok(GhzTrace {
        rows,
        fidelity_half_pi: half[1],
        fidelity_pi: full[1],
        x_mean_pi,
    })
}

/// Ideal run: evolve in the logical space under the effective generator.
fn ghz_ideal(config: &GadgetConfig, times: &[f64]) -> Result<GhzTrace> {
    let bundle = build_encoding(config)?;
    let eff = effective_operator(&build_gadget(config)?, &bundle)?;
    let decomp = SpectralDecomposition::new(&eff)?;
    let data_reg = QubitRegister::new(config.n_data, 0)?;
    let psi0 = StateVector::plus_all(config.n_data);
    let target = ghz_logical_state(config.n_data);
    let observables = x_observables(config.n_data);

    let eval = |t: f64| -> Result<Vec<f64>> {
        let psi = evolve_with(&psi0, &decomp, t, Sign::Neg)?;
        let mut row = vec![t, target.overlap_sq(&psi)];
        for obs in &observables {
            row.push(psi.expectation(obs, &data_reg)?);
        }
        Ok(row)
    };
    let rows = parallel::par_try_map(times, |&t| eval(t))?;
    let half = eval(std::f64::consts::FRAC_PI_2)?;
    let full = eval(std::f64::consts::PI)?;
    let x_mean_pi = full[2..].iter().sum::<f64>() / config.n_data as f64;
    Ok(GhzTrace {
        rows,
        fidelity_half_pi: half[1],
        fidelity_pi: full[1],
        x_mean_pi,
    })
}

pub fn run_ghz(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    if spec.kind != ExperimentKind::Ghz {
        return Err(Error::Spec("kind: expected 'ghz'".into()));
    }
    let base = spec.config.to_gadget_config()?;
    let times = spec.times();
    let gammas = spec.gammas();
    let mode = spec.propagator.unwrap_or(PropagatorMode::Physical);
    let multi = gammas.len() > 1;

    let mut result = ExperimentResult::new(spec);
    let mut columns = vec!["t".to_string(), "f_ghz".to_string()];
    columns.extend((0..base.n_data).map(|i| format!("x{i}")));

    for &gamma in &gammas {
        let config = GadgetConfig { gamma, ..base };
        let trace = match mode {
            PropagatorMode::Physical => ghz_physical(&config, &times)?,
            PropagatorMode::Ideal => ghz_ideal(&config, &times)?,
        };
        let key = gamma_key(gamma);
        let name = if multi {
            format!("ghz_gamma_{key}")
        } else {
            "ghz".to_string()
        };
        let mut table = Table::new(name, columns.clone());
        for row in trace.rows {
            table.push_row(row);
        }
        result.tables.push(table);
        result.insert_summary(
            format!("f_ghz_t_half_pi_gamma_{key}"),
            trace.fidelity_half_pi,
        );
        result.insert_summary(format!("f_ghz_t_pi_gamma_{key}"), trace.fidelity_pi);
        result.insert_summary(format!("x_mean_t_pi_gamma_{key}"), trace.x_mean_pi);
    }
    Ok(result)
}
