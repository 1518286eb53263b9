//! Logical bit-flip experiment: drive one data qubit with a physical X term
//! and watch the ancillae track the domain-wall superposition. The confined
//! flip period stretches by the inverse logical overlap.

use super::gamma_key;
use super::result::{ExperimentResult, Table};
use super::spec::{DriveSpec, ExperimentKind, ExperimentSpec};
use crate::dense::{realize, Sign, SpectralDecomposition};
use crate::encoding::{build_encoding, one_defect_ancilla_word, SineTransform};
use crate::error::{Error, Result};
use crate::gadget::{build_gadget, GadgetConfig};
use crate::parallel;
use crate::pauli::{OperatorSum, Pauli, PauliString};
use crate::register::{format_word, with_word_bit};
use crate::state::{evolve_with, StateVector};

const DEFAULT_DRIVE: DriveSpec = DriveSpec {
    qubit: 2,
    corrected: false,
};

struct FlipRun {
    rows: Vec<Vec<f64>>,
    /// Refined time of the first population maximum of the flipped state.
    first_max_time: f64,
    /// Population of the flipped state at that time.
    flip_population: f64,
    /// Normalized conditional ancilla amplitudes at the extremum, indexed by
    /// defect position.
    extremum_amps: Vec<f64>,
}

/// Locate the first local maximum of `f` on the grid and refine it by golden
/// section search (fixed iteration count, deterministic).
fn refine_first_max(times: &[f64], values: &[f64], f: impl Fn(f64) -> f64) -> f64 {
    let global_max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut peak = values.len() - 1;
    for k in 1..values.len() - 1 {
        if values[k] >= values[k - 1] && values[k] >= values[k + 1] && values[k] > 0.5 * global_max
        {
            peak = k;
            break;
        }
    }
    let mut lo = times[peak.saturating_sub(1)];
    let mut hi = times[(peak + 1).min(times.len() - 1)];
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..120 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = f(x1);
        }
    }
    0.5 * (lo + hi)
}

fn flip_run(
    config: &GadgetConfig,
    gamma: f64,
    drive: &DriveSpec,
    times: &[f64],
) -> Result<FlipRun> {
    let reg = config.register()?;
    let n = config.n_data;
    let z1 = 0usize;
    let z2 = with_word_bit(0, drive.qubit, n, 1);
    // The overlap correction compensates the dressed matrix element, which
    // only exists for confined runs; the unconfined reference stays bare.
    let strength = if drive.corrected && gamma > 0.0 {
        1.0 / SineTransform::new(n).element(0, drive.qubit)
    } else {
        1.0
    };
    let drive_op = OperatorSum::from_term(PauliString::single(strength, drive.qubit, Pauli::X));

    // Unconfined reference at gamma = 0: the drive alone, bare targets.
    let (h, target1, target2) = if gamma == 0.0 {
        let t1 = StateVector::basis(reg.total(), reg.basis_index(z1, 0));
        let t2 = StateVector::basis(reg.total(), reg.basis_index(z2, 0));
        (drive_op, t1, t2)
    } else {
        let confined = GadgetConfig { gamma, ..*config };
        let bundle = build_encoding(&confined)?;
        let h = build_gadget(&confined)?.plus(&drive_op);
        (h, bundle.dressed_ground(z1), bundle.dressed_ground(z2))
    };
    let decomp = SpectralDecomposition::new(&realize(&h, &reg)?)?;
    let psi0 = target1.clone();

    // Ancilla words carrying one defect at each position of the flipped word.
    let defect_words: Vec<usize> = (0..n)
        .map(|j| one_defect_ancilla_word(z2, j, config))
        .collect();

    let rows = parallel::par_try_map(times, |&t| -> Result<Vec<f64>> {
        let psi = evolve_with(&psi0, &decomp, t, Sign::Neg)?;
        let mut row = vec![t, target1.overlap_sq(&psi), target2.overlap_sq(&psi)];
        for &a in &defect_words {
            row.push(psi.amplitude(reg.basis_index(z2, a)).norm());
        }
        Ok(row)
    })?;

    let pops: Vec<f64> = rows.iter().map(|r| r[2]).collect();
    let pop_at = |t: f64| {
        let psi = evolve_with(&psi0, &decomp, t, Sign::Neg).expect("evolution stays unitary");
        target2.overlap_sq(&psi)
    };
    let first_max_time = refine_first_max(times, &pops, pop_at);
    let psi_star = evolve_with(&psi0, &decomp, first_max_time, Sign::Neg)?;
    let flip_population = target2.overlap_sq(&psi_star);
    // Conditional ancilla state given the flipped data word.
    let slice_norm: f64 = (0..reg.ancilla_dim())
        .map(|a| psi_star.population(reg.basis_index(z2, a)))
        .sum::<f64>()
        .sqrt();
    let extremum_amps = defect_words
        .iter()
        .map(|&a| psi_star.amplitude(reg.basis_index(z2, a)).norm() / slice_norm.max(1e-300))
        .collect();
    Ok(FlipRun {
        rows,
        first_max_time,
        flip_population,
        extremum_amps,
    })
}

pub fn run_bit_flip(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    if spec.kind != ExperimentKind::BitFlip {
        return Err(Error::Spec("kind: expected 'bit-flip'".into()));
    }
    let base = spec.config.to_gadget_config()?;
    let drive = spec.drive.unwrap_or(DEFAULT_DRIVE);
    if drive.qubit >= base.n_data {
        return Err(Error::Spec(format!(
            "drive.qubit: {} out of range for nd = {}",
            drive.qubit, base.n_data
        )));
    }
    let times = spec.times();
    let gammas = spec
        .gamma_grid
        .clone()
        .unwrap_or_else(|| vec![0.0, 8.0, 32.0]);
    let n = base.n_data;
    let z2 = with_word_bit(0, drive.qubit, n, 1);

    let mut columns = vec![
        "t".to_string(),
        "pop_initial".to_string(),
        "pop_flipped".to_string(),
    ];
    for j in 0..n {
        columns.push(format!(
            "amp_{}",
            format_word(one_defect_ancilla_word(z2, j, &base), n - 1)
        ));
    }

    let mut result = ExperimentResult::new(spec);
    let mut unconfined_first_max: Option<f64> = None;
    for &gamma in &gammas {
        let run = flip_run(&base, gamma, &drive, &times)?;
        let key = gamma_key(gamma);
        let mut table = Table::new(format!("bit_flip_gamma_{key}"), columns.clone());
        for row in run.rows {
            table.push_row(row);
        }
        result.tables.push(table);
        result.insert_summary(format!("first_max_time_gamma_{key}"), run.first_max_time);
        result.insert_summary(format!("period_gamma_{key}"), 2.0 * run.first_max_time);
        result.insert_summary(format!("flip_population_gamma_{key}"), run.flip_population);
        if gamma == 0.0 {
            unconfined_first_max = Some(run.first_max_time);
        } else {
            for (j, &amp) in run.extremum_amps.iter().enumerate() {
                let bits = format_word(one_defect_ancilla_word(z2, j, &base), n - 1);
                result.insert_summary(format!("extremum_amp_{bits}_gamma_{key}"), amp);
            }
            if let Some(t0) = unconfined_first_max {
                result.insert_summary(format!("period_ratio_gamma_{key}"), run.first_max_time / t0);
            }
        }
    }
    Ok(result)
}
