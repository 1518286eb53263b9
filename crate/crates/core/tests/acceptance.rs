//! Acceptance suite: one test per acceptance criterion, each printing a
//! single PASS/FAIL line (visible with `--nocapture`; failures also carry the
//! detail in the panic message).
//!
//! Oracle-pinned regression values were recorded from the first run of this
//! implementation and guard against drift at the stated tolerances.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;

use gadgetsim::dense::{realize, Sign, SpectralDecomposition};
use gadgetsim::encoding::{
    analyze_defects, build_encoding, defect_positions, effective_operator, logical_overlap,
    one_defect_ancilla_word, satisfiable_parity, sector_blocks, GroundAncillae, SineTransform,
};
use gadgetsim::experiments::{self, ExperimentSpec};
use gadgetsim::gadget::{
    build_five_body_driver, build_gadget, build_logical_xx, Driver, GadgetConfig,
};
use gadgetsim::metrics::MetricsEvaluator;
use gadgetsim::pauli::{OperatorSum, Pauli, PauliString};
use gadgetsim::register::{with_word_bit, word_bit, word_parity, QubitRegister};
use gadgetsim::state::{evolve_with, StateVector};

/// GHZ fidelity at t = pi/2, gamma = 16 (physical run). Pinned at first run.
const PINNED_GHZ_FIDELITY_GAMMA16: f64 = 1.0;
/// Bit-flip period stretch ratio at gamma = 32. Pinned at first run.
const PINNED_PERIOD_RATIO_GAMMA32: f64 = 1.73656590293;
/// Noise-free minor-embedding fidelity floor at gamma = 8.
const PINNED_NOISE_FREE_FLOOR: f64 = 1.0 - 1e-9;

fn criterion(label: &str, body: impl FnOnce() -> Result<String, String>) {
    match body() {
        Ok(detail) => println!("criterion {label}: PASS - {detail}"),
        Err(detail) => {
            println!("criterion {label}: FAIL - {detail}");
            panic!("criterion {label} failed: {detail}");
        }
    }
}

fn spec_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../specs")
        .join(name)
}

fn config(n_data: usize, kinked: bool, gamma: f64) -> GadgetConfig {
    GadgetConfig::new(n_data, kinked, gamma, 1.0, Driver::FiveBody)
}

#[test]
fn criterion_01_effective_hamiltonian_identity() {
    criterion("1 (effective Hamiltonian)", || {
        let start = Instant::now();
        for n_data in 2..=5 {
            for kinked in [false, true] {
                let cfg = config(n_data, kinked, 8.0);
                let bundle = build_encoding(&cfg).map_err(|e| e.to_string())?;
                let eff =
                    effective_operator(&build_gadget(&cfg).map_err(|e| e.to_string())?, &bundle)
                        .map_err(|e| e.to_string())?;
                let sat = satisfiable_parity(&cfg);
                let dim = 1usize << n_data;
                // (alpha/2)(1 -/+ Z^n): 0 on the satisfiable parity, alpha on the other.
                let expected = DMatrix::from_fn(dim, dim, |r, c| {
                    if r == c && word_parity(r) != sat {
                        Complex64::new(cfg.alpha, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                });
                let dev = (eff.matrix() - expected)
                    .iter()
                    .map(|x| x.norm())
                    .fold(0.0, f64::max);
                if dev > 1e-9 {
                    return Err(format!(
                        "nd={n_data} kinked={kinked}: effective gadget deviates by {dev:.3e}"
                    ));
                }
                let split = bundle.parity_splitting();
                if (split - cfg.alpha).abs() > 1e-9 {
                    return Err(format!(
                        "nd={n_data} kinked={kinked}: splitting {split} != alpha"
                    ));
                }
            }
        }
        let elapsed = start.elapsed().as_secs_f64();
        if elapsed > 10.0 {
            return Err(format!("runtime {elapsed:.1} s exceeds 10 s"));
        }
        Ok(format!("effective gadget = (alpha/2)(1 -/+ Z^n) within 1e-9, splitting = alpha, {elapsed:.2} s"))
    });
}

#[test]
fn criterion_02_sine_transform_identities() {
    criterion("2 (sine transform)", || {
        for n in 1..=6usize {
            let s = SineTransform::new(n);
            let res = s.orthogonality_residual();
            if res > 1e-12 {
                return Err(format!("n={n}: orthogonality residual {res:.3e}"));
            }
        }
        // One-defect block of the five-body driver diagonalizes to
        // lambda_k = -2 cos(pi (k+1)/(nd+1)).
        for n_data in 2..=6usize {
            let cfg = config(n_data, false, 8.0);
            let reg = cfg.register().map_err(|e| e.to_string())?;
            let blocks = sector_blocks(
                &build_five_body_driver(&cfg).map_err(|e| e.to_string())?,
                &reg,
            )
            .map_err(|e| e.to_string())?;
            let z = with_word_bit(0, 0, n_data, 1); // odd parity, frustrated
            let words: Vec<usize> = (0..n_data)
                .map(|j| one_defect_ancilla_word(z, j, &cfg))
                .collect();
            let block = DMatrix::from_fn(n_data, n_data, |r, c| blocks[z][(words[r], words[c])]);
            let s = SineTransform::new(n_data);
            let rotated = s.matrix() * block * s.matrix().transpose();
            for k in 0..n_data {
                for j in 0..n_data {
                    let expected = if k == j { s.eigenvalue(k) } else { 0.0 };
                    if (rotated[(k, j)] - expected).abs() > 1e-10 {
                        return Err(format!(
                            "nd={n_data}: rotated block entry ({k},{j}) = {} != {expected}",
                            rotated[(k, j)]
                        ));
                    }
                }
            }
        }
        Ok("S orthogonal within 1e-12; one-defect blocks diagonalize to -2cos(pi(k+1)/(nd+1)) within 1e-10, nd <= 6".into())
    });
}

#[test]
fn criterion_03_logical_operator_identities() {
    criterion("3 (logical operators)", || {
        let mut failures = Vec::new();
        for n_data in 2..=5usize {
            let cfg = config(n_data, false, 8.0);
            let bundle = build_encoding(&cfg).map_err(|e| e.to_string())?;
            let data_reg = QubitRegister::new(n_data, 0).map_err(|e| e.to_string())?;
            for i in 0..n_data - 1 {
                // Dressed three-body string acts as the logical XX exactly.
                let dressed = effective_operator(
                    &build_logical_xx(&cfg, i).map_err(|e| e.to_string())?,
                    &bundle,
                )
                .map_err(|e| e.to_string())?;
                let logical = realize(
                    &OperatorSum::from_term(
                        PauliString::new(1.0, [(i, Pauli::X), (i + 1, Pauli::X)]).unwrap(),
                    ),
                    &data_reg,
                )
                .map_err(|e| e.to_string())?;
                let dev = dressed.max_abs_diff(&logical);
                if dev > 1e-10 {
                    failures.push(format!(
                        "nd={n_data} i={i}: effective XXX^a deviates from logical XX by {dev:.3e}"
                    ));
                }
                // Bare two-qubit flip, asserted to vanish as stated.
                let bare = effective_operator(
                    &OperatorSum::from_term(
                        PauliString::new(1.0, [(i, Pauli::X), (i + 1, Pauli::X)]).unwrap(),
                    ),
                    &bundle,
                )
                .map_err(|e| e.to_string())?;
                let max = bare.max_abs();
                if max > 1e-10 {
                    failures.push(format!(
                        "nd={n_data} i={i}: effective bare XX has max element {max:.6} \
                         (nonzero on frustrated sectors: the flip moves the defect, \
                         overlapping the new sector ground with weight 2*S0i*S0(i+1))"
                    ));
                }
            }
        }
        if failures.is_empty() {
            Ok("dressed XXX^a = logical XX within 1e-10 and bare XX projects to 0, nd <= 5".into())
        } else {
            Err(failures.join("; "))
        }
    });
}

#[test]
fn criterion_04_overlap_values() {
    criterion("4 (logical overlaps)", || {
        let cfg = config(5, false, 8.0);
        let bundle = build_encoding(&cfg).map_err(|e| e.to_string())?;
        let figure = [0.289, 0.5, 0.577, 0.5, 0.289];
        for (i, &fig) in figure.iter().enumerate() {
            let z2 = with_word_bit(0, i, 5, 1);
            let closed = logical_overlap(0, z2, i, &cfg).map_err(|e| e.to_string())?;
            if (closed - fig).abs() > 5e-4 {
                return Err(format!("i={i}: overlap {closed:.6} != {fig} to 3 decimals"));
            }
            let numeric = bundle.sector_state(0, 0).dot(&bundle.sector_state(z2, 0));
            if (numeric - closed).abs() > 1e-10 {
                return Err(format!("i={i}: numeric {numeric} vs closed form {closed}"));
            }
        }
        Ok("overlaps (0.289, 0.5, 0.577, 0.5, 0.289) to 3 decimals; closed form matches inner products within 1e-10".into())
    });
}

#[test]
fn criterion_05_brute_force_oracle_equivalence() {
    criterion("5 (defect oracle)", || {
        let broken = |z: usize, a: usize, i: usize, n: usize, kinked: bool| -> bool {
            let left = if i == 0 { 0 } else { word_bit(a, i - 1, n - 1) };
            let right = if i == n - 1 {
                usize::from(kinked)
            } else {
                word_bit(a, i, n - 1)
            };
            word_bit(z, i, n) ^ left ^ right == 1
        };
        for n_data in 2..=4usize {
            for kinked in [false, true] {
                let cfg = config(n_data, kinked, 8.0);
                for z in 0..1usize << n_data {
                    for a in 0..1usize << (n_data - 1) {
                        let expected: Vec<usize> = (0..n_data)
                            .filter(|&i| broken(z, a, i, n_data, kinked))
                            .collect();
                        if defect_positions(z, a, &cfg) != expected {
                            return Err(format!("nd={n_data} kinked={kinked} z={z:b} a={a:b}"));
                        }
                    }
                    let profile = analyze_defects(z, &cfg);
                    match profile.ground_ancillae {
                        GroundAncillae::Unique(a) => {
                            if (0..n_data).any(|i| broken(z, a, i, n_data, kinked)) {
                                return Err(format!(
                                    "nd={n_data} z={z:b}: ground word breaks a clause"
                                ));
                            }
                        }
                        GroundAncillae::Degenerate(ws) => {
                            if ws.len() != n_data {
                                return Err(format!(
                                    "nd={n_data} z={z:b}: {} one-defect states",
                                    ws.len()
                                ));
                            }
                            for (j, &a) in ws.iter().enumerate() {
                                let positions: Vec<usize> = (0..n_data)
                                    .filter(|&i| broken(z, a, i, n_data, kinked))
                                    .collect();
                                if positions != vec![j] {
                                    return Err(format!(
                                        "nd={n_data} z={z:b} j={j}: defects {positions:?}"
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok("cumulative-parity formulas match exhaustive clause evaluation, nd <= 4; one-defect degeneracy = nd".into())
    });
}

#[test]
fn criterion_06_ghz_experiment() {
    criterion("6 (GHZ)", || {
        let start = Instant::now();
        // Ideal effective propagator: fidelity 1 at t = pi/2 and the analytic
        // (1 + sin t)/2 profile.
        let mut ideal_spec =
            ExperimentSpec::from_path(&spec_path("ghz.toml")).map_err(|e| e.to_string())?;
        ideal_spec.propagator = Some(experiments::PropagatorMode::Ideal);
        let ideal = experiments::run(&ideal_spec).map_err(|e| e.to_string())?;
        let f_half = ideal
            .summary_value("f_ghz_t_half_pi_gamma_8")
            .ok_or("missing ideal summary")?;
        if (f_half - 1.0).abs() > 1e-9 {
            return Err(format!("ideal GHZ fidelity at pi/2 is {f_half}"));
        }
        let table = ideal.table("ghz").ok_or("missing ideal table")?;
        for row in &table.rows {
            let analytic = 0.5 * (1.0 + row[0].sin());
            if (row[1] - analytic).abs() > 1e-9 {
                return Err(format!("ideal curve off analytic profile at t={}", row[0]));
            }
        }

        // Physical runs over the gamma grid.
        let mut phys_spec = ideal_spec.clone();
        phys_spec.propagator = Some(experiments::PropagatorMode::Physical);
        phys_spec.gamma_grid = Some(vec![2.0, 4.0, 8.0, 16.0]);
        let phys = experiments::run(&phys_spec).map_err(|e| e.to_string())?;
        let fs: Vec<f64> = [2, 4, 8, 16]
            .iter()
            .map(|g| {
                phys.summary_value(&format!("f_ghz_t_half_pi_gamma_{g}"))
                    .ok_or(format!("missing physical summary for gamma {g}"))
            })
            .collect::<Result<_, _>>()?;
        for pair in fs.windows(2) {
            if pair[1] < pair[0] - 1e-9 {
                return Err(format!("fidelity not monotone across gamma: {fs:?}"));
            }
        }
        if (fs[3] - PINNED_GHZ_FIDELITY_GAMMA16).abs() > 1e-6 {
            return Err(format!(
                "gamma=16 fidelity {} drifted from pinned {PINNED_GHZ_FIDELITY_GAMMA16}",
                fs[3]
            ));
        }
        // Physical run sits on the analytic profile at high confinement.
        let t16 = phys.table("ghz_gamma_16").ok_or("missing gamma=16 table")?;
        for row in &t16.rows {
            let analytic = 0.5 * (1.0 + row[0].sin());
            if (row[1] - analytic).abs() > 1e-9 {
                return Err(format!(
                    "gamma=16 curve off analytic profile at t={}",
                    row[0]
                ));
            }
        }
        let elapsed = start.elapsed().as_secs_f64();
        if elapsed > 60.0 {
            return Err(format!("runtime {elapsed:.1} s exceeds 60 s"));
        }
        Ok(format!(
            "ideal fidelity 1 at pi/2; physical fidelities {fs:?} monotone and pinned at gamma=16; {elapsed:.1} s"
        ))
    });
}

#[test]
fn criterion_07_metrics_behavior() {
    criterion("7 (metrics)", || {
        let times: Vec<f64> = (0..200)
            .map(|k| 4.0 * std::f64::consts::PI * k as f64 / 199.0)
            .collect();
        let gammas = [4.0, 8.0, 16.0, 32.0];
        let mut plateaus = Vec::new();
        for &gamma in &gammas {
            let cfg = config(5, false, gamma);
            let bundle = build_encoding(&cfg).map_err(|e| e.to_string())?;
            let mut h = build_gadget(&cfg).map_err(|e| e.to_string())?;
            for i in 0..5 {
                h = h.plus(&OperatorSum::from_term(PauliString::single(
                    1.0,
                    i,
                    Pauli::X,
                )));
            }
            let evaluator = MetricsEvaluator::new(&h, &bundle).map_err(|e| e.to_string())?;
            let series = evaluator.series(gamma, &times).map_err(|e| e.to_string())?;
            for p in &series.points {
                for (name, v) in [
                    ("p_surv", p.p_surv),
                    ("leakage", p.leakage),
                    ("f_cond", p.f_cond),
                    ("f_abs", p.f_abs),
                ] {
                    if !(0.0..=1.0).contains(&v) {
                        return Err(format!(
                            "gamma={gamma} t={}: {name} = {v} out of [0,1]",
                            p.t
                        ));
                    }
                }
                if (p.f_abs - p.p_surv * p.f_cond).abs() > 1e-12 {
                    return Err(format!(
                        "gamma={gamma} t={}: f_abs product identity broken",
                        p.t
                    ));
                }
            }
            plateaus.push(series.window_mean(5.0, 10.0, |p| p.leakage));
            if gamma == 8.0 {
                let infidelities: Vec<f64> = [1.0, 2.0, 4.0, 8.0]
                    .iter()
                    .map(|&t| evaluator.point(t).map(|p| 1.0 - p.f_cond))
                    .collect::<Result<_, _>>()
                    .map_err(|e| e.to_string())?;
                for pair in infidelities.windows(2) {
                    if pair[1] < pair[0] {
                        return Err(format!(
                            "conditional infidelity not non-decreasing at gamma=8: {infidelities:?}"
                        ));
                    }
                }
            }
        }
        for pair in plateaus.windows(2) {
            if pair[1] >= pair[0] {
                return Err(format!(
                    "leakage plateau not strictly decreasing: {plateaus:?}"
                ));
            }
        }
        Ok(format!(
            "leakage plateaus strictly decreasing {plateaus:.3?}; conditional infidelity monotone in t at gamma=8; bounds and product identity hold"
        ))
    });
}

#[test]
fn criterion_08_bit_flip_experiment() {
    criterion("8 (bit flip)", || {
        let spec =
            ExperimentSpec::from_path(&spec_path("bit_flip.toml")).map_err(|e| e.to_string())?;
        let result = experiments::run(&spec).map_err(|e| e.to_string())?;
        let mut failures = Vec::new();

        // Period stretch toward sqrt(3) = 1/S_02, measured at gamma = 32.
        let ratio = result
            .summary_value("period_ratio_gamma_32")
            .ok_or("missing period ratio")?;
        let sqrt3 = 3f64.sqrt();
        if (ratio - sqrt3).abs() > 0.01 {
            failures.push(format!(
                "period ratio {ratio:.6} not within 0.01 of sqrt(3)"
            ));
        }
        if (ratio - PINNED_PERIOD_RATIO_GAMMA32).abs() > 1e-6 {
            failures.push(format!(
                "period ratio {ratio} drifted from pinned {PINNED_PERIOD_RATIO_GAMMA32}"
            ));
        }

        // Ancilla amplitudes at the flip extremum, gamma = 8, against the
        // figure superposition (2 decimals).
        let figure: BTreeMap<&str, f64> = [
            ("0000", 0.577),
            ("0010", 0.5),
            ("0011", 0.289),
            ("0100", 0.5),
            ("1100", 0.289),
        ]
        .into_iter()
        .collect();
        let mut amp_report = Vec::new();
        for (bits, &fig) in &figure {
            let amp = result
                .summary_value(&format!("extremum_amp_{bits}_gamma_8"))
                .ok_or(format!("missing extremum amplitude for {bits}"))?;
            amp_report.push(format!("{bits}:{amp:.4}"));
            if (amp - fig).abs() > 5e-3 {
                failures.push(format!(
                    "extremum amplitude on {bits} is {amp:.4}, not {fig} to 2 decimals \
                     (static drive-induced dressing of the one-defect sector at unit drive)"
                ));
            }
        }
        if failures.is_empty() {
            Ok(format!(
                "period ratio {ratio:.6}; extremum amplitudes [{}]",
                amp_report.join(", ")
            ))
        } else {
            Err(failures.join("; "))
        }
    });
}

#[test]
fn criterion_09_minor_embedding_experiment() {
    criterion("9 (minor embedding)", || {
        let start = Instant::now();
        let spec = ExperimentSpec::from_path(&spec_path("minor_embedding.toml"))
            .map_err(|e| e.to_string())?;
        let result = experiments::run(&spec).map_err(|e| e.to_string())?;
        let table = result
            .table("minor_embedding")
            .ok_or("missing grid table")?;
        let gammas = spec.gammas();
        let etas = spec.etas();
        // Rows are ordered gamma-major; regroup per eta and check monotone in gamma.
        let mut by_eta: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
        for row in &table.rows {
            let ei = etas
                .iter()
                .position(|&e| (e - row[1]).abs() < 1e-12)
                .ok_or("unknown eta")?;
            by_eta.entry(ei).or_default().push(row[2]);
        }
        for (ei, fs) in &by_eta {
            if fs.len() != gammas.len() {
                return Err(format!("eta index {ei}: {} gamma points", fs.len()));
            }
            for pair in fs.windows(2) {
                if pair[1] < pair[0] - 1e-12 {
                    return Err(format!(
                        "eta={}: mean fidelity not non-decreasing in gamma: {fs:?}",
                        etas[*ei]
                    ));
                }
            }
        }
        let f0 = result
            .summary_value("fidelity_noise_free_gamma_8")
            .ok_or("missing noise-free fidelity")?;
        if f0 < PINNED_NOISE_FREE_FLOOR {
            return Err(format!("noise-free fidelity {f0} below pinned floor"));
        }
        let elapsed = start.elapsed().as_secs_f64();
        if elapsed > 600.0 {
            return Err(format!("runtime {elapsed:.0} s exceeds 10 minutes"));
        }
        Ok(format!(
            "mean fidelity non-decreasing in gamma at all {} etas; noise-free fidelity {f0}; {:.0} s for the 6x8x10 grid",
            etas.len(),
            elapsed
        ))
    });
}

#[test]
fn criterion_10_determinism() {
    criterion("10 (determinism)", || {
        let compare_runs = |spec: &ExperimentSpec| -> Result<usize, String> {
            let dirs: Vec<tempfile::TempDir> = (0..2)
                .map(|_| tempfile::tempdir().map_err(|e| e.to_string()))
                .collect::<Result<_, _>>()?;
            let mut manifests = Vec::new();
            for dir in &dirs {
                let result = experiments::run(spec).map_err(|e| e.to_string())?;
                manifests.push(
                    experiments::write_result(&result, dir.path()).map_err(|e| e.to_string())?,
                );
            }
            if manifests[0].files != manifests[1].files {
                return Err("recorded checksums differ between reruns".into());
            }
            let mut compared = 0;
            for entry in &manifests[0].files {
                let a =
                    std::fs::read(dirs[0].path().join(&entry.file)).map_err(|e| e.to_string())?;
                let b =
                    std::fs::read(dirs[1].path().join(&entry.file)).map_err(|e| e.to_string())?;
                if a != b {
                    return Err(format!("{} differs between reruns", entry.file));
                }
                compared += 1;
            }
            let ma =
                std::fs::read(dirs[0].path().join("manifest.json")).map_err(|e| e.to_string())?;
            let mb =
                std::fs::read(dirs[1].path().join("manifest.json")).map_err(|e| e.to_string())?;
            if ma != mb {
                return Err("manifest.json differs between reruns".into());
            }
            Ok(compared + 1)
        };

        let ghz = ExperimentSpec::from_path(&spec_path("ghz.toml")).map_err(|e| e.to_string())?;
        let n1 = compare_runs(&ghz)?;

        // Seeded-randomness path on a small grid.
        let mut me = ExperimentSpec::from_path(&spec_path("minor_embedding.toml"))
            .map_err(|e| e.to_string())?;
        me.config.nd = 4;
        me.gamma_grid = Some(vec![2.0, 4.0]);
        me.eta_grid = Some(vec![0.1, 1.0]);
        me.repetitions = Some(2);
        let n2 = compare_runs(&me)?;

        // Different seed changes the noisy output.
        let mut me_seed = me.clone();
        me_seed.seed = 7;
        let base = experiments::run(&me).map_err(|e| e.to_string())?;
        let other = experiments::run(&me_seed).map_err(|e| e.to_string())?;
        let differs = base
            .table("minor_embedding")
            .zip(other.table("minor_embedding"))
            .map(|(a, b)| a.rows != b.rows)
            .unwrap_or(false);
        if !differs {
            return Err("changing the seed did not change the noisy grid".into());
        }
        Ok(format!(
            "{} files byte-identical across reruns; seed change alters the grid",
            n1 + n2
        ))
    });
}

/// Dynamics cross-check used by the spec's evolve example: the calibrated
/// gadget flips all dressed X observables at t = pi (exact parity flip).
#[test]
fn dressed_x_flip_at_pi() {
    let cfg = config(3, false, 8.0);
    let reg = cfg.register().unwrap();
    let bundle = build_encoding(&cfg).unwrap();
    let h = build_gadget(&cfg).unwrap();
    let decomp = SpectralDecomposition::new(&realize(&h, &reg).unwrap()).unwrap();
    let psi0 = bundle
        .dressed_logical_state(&StateVector::plus_all(3))
        .unwrap();
    let psi = evolve_with(&psi0, &decomp, std::f64::consts::PI, Sign::Neg).unwrap();
    let decoded = bundle.apply_decoder(&psi);
    for i in 0..3 {
        let x = decoded
            .expectation(
                &OperatorSum::from_term(PauliString::single(1.0, i, Pauli::X)),
                &reg,
            )
            .unwrap();
        assert!((x + 1.0).abs() < 1e-9, "dressed <X{i}> = {x} at t = pi");
    }
}
