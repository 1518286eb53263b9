//! Infidelity sweep: unit X driving on every data qubit, process metrics
//! swept over confinement strengths.

use super::gamma_key;
use super::result::{ExperimentResult, Table};
use super::spec::{ExperimentKind, ExperimentSpec};
use crate::encoding::build_encoding;
use crate::error::{Error, Result};
use crate::gadget::{build_gadget, GadgetConfig};
use crate::metrics::MetricsEvaluator;
use crate::parallel;
use crate::pauli::{OperatorSum, Pauli, PauliString};

const DEFAULT_GAMMA_GRID: [f64; 5] = [2.0, 4.0, 8.0, 16.0, 32.0];

/// Times at which the conditional fidelity is reported in the summary.
const SUMMARY_TIMES: [f64; 4] = [1.0, 2.0, 4.0, 8.0];

/// Window for the leakage plateau average.
const PLATEAU_WINDOW: (f64, f64) = (5.0, 10.0);

struct SweepSlice {
    gamma: f64,
    table: Table,
    leakage_plateau: f64,
    f_cond_at: Vec<f64>,
}

fn sweep_gamma(base: &GadgetConfig, gamma: f64, times: &[f64]) -> Result<SweepSlice> {
    let config = GadgetConfig { gamma, ..*base };
    let bundle = build_encoding(&config)?;
    let mut h = build_gadget(&config)?;
    for i in 0..config.n_data {
        h = h.plus(&OperatorSum::from_term(PauliString::single(
            1.0,
            i,
            Pauli::X,
        )));
    }
    let evaluator = MetricsEvaluator::new(&h, &bundle)?;
    let series = evaluator.series(gamma, times)?;

    let mut table = Table::new(
        format!("infidelity_gamma_{}", gamma_key(gamma)),
        [
            "t",
            "p_surv",
            "leakage",
            "f_cond",
            "cond_infidelity",
            "f_abs",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect(),
    );
    for p in &series.points {
        table.push_row(vec![
            p.t,
            p.p_surv,
            p.leakage,
            p.f_cond,
            1.0 - p.f_cond,
            p.f_abs,
        ]);
    }
    let leakage_plateau = series.window_mean(PLATEAU_WINDOW.0, PLATEAU_WINDOW.1, |p| p.leakage);
    let f_cond_at = SUMMARY_TIMES
        .iter()
        .map(|&t| Ok(evaluator.point(t)?.f_cond))
        .collect::<Result<_>>()?;
    Ok(SweepSlice {
        gamma,
        table,
        leakage_plateau,
        f_cond_at,
    })
}

pub fn run_infidelity_sweep(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    if spec.kind != ExperimentKind::InfidelitySweep {
        return Err(Error::Spec("kind: expected 'infidelity-sweep'".into()));
    }
    let base = spec.config.to_gadget_config()?;
    let times = spec.times();
    let gammas = spec
        .gamma_grid
        .clone()
        .unwrap_or_else(|| DEFAULT_GAMMA_GRID.to_vec());

    let slices = parallel::par_try_map(&gammas, |&gamma| sweep_gamma(&base, gamma, &times))?;

    let mut result = ExperimentResult::new(spec);
    for slice in slices {
        let key = gamma_key(slice.gamma);
        result.insert_summary(
            format!("leakage_avg_5_10_gamma_{key}"),
            slice.leakage_plateau,
        );
        for (t, f) in SUMMARY_TIMES.iter().zip(&slice.f_cond_at) {
            result.insert_summary(format!("f_cond_t{}_gamma_{key}", *t as i64), *f);
        }
        result.tables.push(slice.table);
    }
    Ok(result)
}
