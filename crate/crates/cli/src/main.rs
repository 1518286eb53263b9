//! Command-line front end: build and inspect gadgets, dump spectra and
//! encodings, evaluate process metrics, and run seeded experiments.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use gadgetsim::encoding::{
    analyze_defects, build_encoding, satisfiable_parity, sector_spectra, SineTransform,
};
use gadgetsim::experiments::{self, gamma_key, ExperimentSpec};
use gadgetsim::gadget::{build_chain, build_gadget, build_single_x_driver, Driver, GadgetConfig};
use gadgetsim::io::{atomic_write, fmt_sig12, operator_to_json, round_sig12, sha256_hex};
use gadgetsim::metrics::MetricsEvaluator;
use gadgetsim::pauli::{OperatorSum, Pauli, PauliString};
use gadgetsim::register::{format_word, word_parity};

#[derive(Parser)]
#[command(
    name = "gadgetsim",
    version,
    about = "Exact simulation of domain-wall chain gadgets",
    after_help = "The GADGETSIM_MAX_QUBITS environment variable overrides the dense \
                  simulation cap (default 14 total qubits)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// Number of data qubits (ancillae are nd - 1).
    #[arg(long)]
    nd: usize,
    /// Use the kinked chain (right virtual ancilla fixed to -1).
    #[arg(long, default_value_t = false)]
    kinked: bool,
    /// Chain strength.
    #[arg(long)]
    gamma: f64,
    /// Target effective strength for calibrated gadgets.
    #[arg(long)]
    alpha: f64,
    /// Ancilla driver: single-x, five-body, or three-body (omit for the bare chain).
    #[arg(long)]
    driver: Option<String>,
    /// Strength for the single-x driver.
    #[arg(long)]
    beta: Option<f64>,
}

impl ConfigArgs {
    fn driver(&self) -> anyhow::Result<Driver> {
        Ok(match self.driver.as_deref() {
            None | Some("none") => Driver::None,
            Some("single-x") => Driver::SingleX {
                beta: self.beta.context("--beta is required with --driver single-x")?,
            },
            Some("five-body") => Driver::FiveBody,
            Some("three-body") => Driver::ThreeBody,
            Some(other) => bail!(
                "--driver: unknown driver '{other}' (expected none, single-x, five-body, three-body)"
            ),
        })
    }

    fn config(&self) -> anyhow::Result<GadgetConfig> {
        let config =
            GadgetConfig::new(self.nd, self.kinked, self.gamma, self.alpha, self.driver()?);
        config.validate()?;
        Ok(config)
    }

    /// The operator selected by the flags: bare chain, chain + single-x
    /// driver, or the calibrated gadget.
    fn operator(&self) -> anyhow::Result<OperatorSum> {
        let config = self.config()?;
        Ok(match config.driver {
            Driver::None => build_chain(&config)?.scaled(config.gamma),
            Driver::SingleX { beta } => build_chain(&config)?
                .scaled(config.gamma)
                .plus(&build_single_x_driver(&config, beta)?),
            Driver::FiveBody | Driver::ThreeBody => build_gadget(&config)?,
        })
    }

    fn driver_name(&self) -> String {
        self.driver.clone().unwrap_or_else(|| "none".to_string())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Dump the configured Hamiltonian as a JSON Pauli-term list.
    Build {
        #[command(flatten)]
        config: ConfigArgs,
        /// Output file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-sector eigenvalue table as CSV, with the parity-splitting column.
    Spectrum {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encoding summary as JSON: sector ground states, overlaps, residuals.
    Encode {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Process-metric series under unit X driving of every data qubit.
    Metrics {
        #[command(flatten)]
        config: ConfigArgs,
        /// Number of time-grid points.
        #[arg(long, default_value_t = 200)]
        points: usize,
        /// End of the time grid (default 4 pi).
        #[arg(long)]
        t_max: Option<f64>,
        /// Strength of the per-data-qubit X drive.
        #[arg(long, default_value_t = 1.0)]
        drive_strength: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Metric series swept over a gamma grid; one CSV per gamma plus a manifest.
    Sweep {
        #[command(flatten)]
        config: ConfigArgs,
        /// Comma-separated confinement strengths.
        #[arg(long, value_delimiter = ',', required = true)]
        gamma_grid: Vec<f64>,
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        drive_strength: f64,
        /// Output directory.
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Run an experiment from a TOML spec file.
    Experiment {
        /// Path to the spec file.
        #[arg(long)]
        spec: PathBuf,
        /// Output directory for CSVs and manifest.json.
        #[arg(long)]
        out: PathBuf,
        /// Override the spec's seed.
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            atomic_write(path, text.as_bytes())?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_build(config: &ConfigArgs, out: Option<&Path>) -> anyhow::Result<()> {
    let operator = config.operator()?;
    let reg = config.config()?.register()?;
    let mut json = serde_json::to_string_pretty(&operator_to_json(&operator, &reg))?;
    json.push('\n');
    emit(out, &json)
}

fn parity_splitting(spectra: &[Vec<f64>], config: &GadgetConfig) -> f64 {
    let sat = satisfiable_parity(config);
    let mut min_sat = f64::INFINITY;
    let mut min_unsat = f64::INFINITY;
    for (z, energies) in spectra.iter().enumerate() {
        if word_parity(z) == sat {
            min_sat = min_sat.min(energies[0]);
        } else {
            min_unsat = min_unsat.min(energies[0]);
        }
    }
    min_unsat - min_sat
}

fn cmd_spectrum(config: &ConfigArgs, out: Option<&Path>) -> anyhow::Result<()> {
    let cfg = config.config()?;
    let reg = cfg.register()?;
    let operator = config.operator()?;
    let spectra = sector_spectra(&operator, &reg)?;
    let splitting = parity_splitting(&spectra, &cfg);
    let mut csv = String::from("z,rank,energy,parity_splitting\n");
    for (z, energies) in spectra.iter().enumerate() {
        for (rank, &energy) in energies.iter().enumerate() {
            csv.push_str(&format!(
                "{},{},{},{}\n",
                format_word(z, cfg.n_data),
                rank,
                fmt_sig12(energy),
                fmt_sig12(splitting)
            ));
        }
    }
    emit(out, &csv)
}

fn cmd_encode(config: &ConfigArgs, out: Option<&Path>) -> anyhow::Result<()> {
    let cfg = config.config()?;
    let bundle = build_encoding(&cfg)?;
    let gadget = build_gadget(&cfg)?;
    let reg = cfg.register()?;
    let sine = SineTransform::new(cfg.n_data);

    let sectors: Vec<serde_json::Value> = (0..reg.data_dim())
        .map(|z| {
            let profile = analyze_defects(z, &cfg);
            let ground = bundle.sector_state(z, 0);
            let amplitudes: Vec<serde_json::Value> = (0..reg.ancilla_dim())
                .filter(|&a| ground[a].abs() > 1e-12)
                .map(|a| {
                    serde_json::json!([format_word(a, reg.n_ancilla()), round_sig12(ground[a])])
                })
                .collect();
            serde_json::json!({
                "z": format_word(z, cfg.n_data),
                "satisfiable": profile.satisfiable,
                "ground_energy": round_sig12(bundle.ground_energy(z)),
                "ground_amplitudes": amplitudes,
            })
        })
        .collect();

    let doc = serde_json::json!({
        "schema": "gadgetsim/encoding/v1",
        "config": {
            "nd": cfg.n_data, "kinked": cfg.kinked, "gamma": cfg.gamma,
            "alpha": cfg.alpha, "driver": config.driver_name(),
        },
        "parity_splitting": round_sig12(bundle.parity_splitting()),
        "unitarity_residual": round_sig12(bundle.unitarity_residual()),
        "diagonalization_residual": round_sig12(bundle.diagonalization_residual(&gadget)?),
        "logical_overlaps": (0..cfg.n_data).map(|j| round_sig12(sine.element(0, j))).collect::<Vec<_>>(),
        "sectors": sectors,
    });
    let mut json = serde_json::to_string_pretty(&doc)?;
    json.push('\n');
    emit(out, &json)
}

fn metric_series_csv(
    cfg: &GadgetConfig,
    points: usize,
    t_max: Option<f64>,
    drive_strength: f64,
) -> anyhow::Result<String> {
    if points < 2 {
        bail!("--points: need at least 2 points");
    }
    let t_max = t_max.unwrap_or(4.0 * std::f64::consts::PI);
    let bundle = build_encoding(cfg)?;
    let mut h = build_gadget(cfg)?;
    for i in 0..cfg.n_data {
        h = h.plus(&OperatorSum::from_term(PauliString::single(
            drive_strength,
            i,
            Pauli::X,
        )));
    }
    let evaluator = MetricsEvaluator::new(&h, &bundle)?;
    let times: Vec<f64> = (0..points)
        .map(|k| t_max * k as f64 / (points - 1) as f64)
        .collect();
    let series = evaluator.series(cfg.gamma, &times)?;
    let mut csv = String::from("t,p_surv,leakage,f_cond,cond_infidelity,f_abs\n");
    for p in &series.points {
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_sig12(p.t),
            fmt_sig12(p.p_surv),
            fmt_sig12(p.leakage),
            fmt_sig12(p.f_cond),
            fmt_sig12(1.0 - p.f_cond),
            fmt_sig12(p.f_abs)
        ));
    }
    Ok(csv)
}

fn cmd_metrics(
    config: &ConfigArgs,
    points: usize,
    t_max: Option<f64>,
    drive_strength: f64,
    out: Option<&Path>,
) -> anyhow::Result<()> {
    let cfg = config.config()?;
    if !cfg.driver.is_subspace() {
        bail!("--driver: metrics need a subspace driver (five-body or three-body)");
    }
    let csv = metric_series_csv(&cfg, points, t_max, drive_strength)?;
    emit(out, &csv)
}

fn cmd_sweep(
    config: &ConfigArgs,
    gamma_grid: &[f64],
    points: usize,
    t_max: Option<f64>,
    drive_strength: f64,
    out_dir: &Path,
) -> anyhow::Result<()> {
    let base = config.config()?;
    if !base.driver.is_subspace() {
        bail!("--driver: sweeps need a subspace driver (five-body or three-body)");
    }
    std::fs::create_dir_all(out_dir)?;
    let mut files = Vec::new();
    for &gamma in gamma_grid {
        let cfg = GadgetConfig { gamma, ..base };
        let csv = metric_series_csv(&cfg, points, t_max, drive_strength)?;
        let name = format!("metrics_gamma_{}.csv", gamma_key(gamma));
        atomic_write(&out_dir.join(&name), csv.as_bytes())?;
        files.push(serde_json::json!({
            "gamma": gamma,
            "file": name,
            "sha256": sha256_hex(csv.as_bytes()),
        }));
    }
    let manifest = serde_json::json!({
        "schema": "gadgetsim/manifest/v1",
        "kind": "metrics-sweep",
        "version": env!("CARGO_PKG_VERSION"),
        "config": {
            "nd": base.n_data, "kinked": base.kinked, "alpha": base.alpha,
            "driver": config.driver_name(), "drive_strength": drive_strength,
            "points": points, "t_max": t_max.unwrap_or(4.0 * std::f64::consts::PI),
        },
        "gamma_grid": gamma_grid,
        "files": files,
    });
    let mut json = serde_json::to_string_pretty(&manifest)?;
    json.push('\n');
    atomic_write(&out_dir.join("manifest.json"), json.as_bytes())?;
    eprintln!("wrote {}", out_dir.join("manifest.json").display());
    Ok(())
}

fn cmd_experiment(spec_path: &Path, out: &Path, seed: Option<u64>) -> anyhow::Result<()> {
    let mut spec = ExperimentSpec::from_path(spec_path)?;
    if let Some(seed) = seed {
        spec.seed = seed;
    }
    let result = experiments::run(&spec)?;
    let manifest = experiments::write_result(&result, out)?;
    for entry in &manifest.files {
        eprintln!("wrote {}", out.join(&entry.file).display());
    }
    eprintln!("wrote {}", out.join("manifest.json").display());
    println!(
        "{} ok ({} tables, seed {})",
        manifest.kind,
        manifest.files.len(),
        manifest.seed
    );
    Ok(())
}

fn main() -> std::process::ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Build { config, out } => cmd_build(config, out.as_deref()),
        Command::Spectrum { config, out } => cmd_spectrum(config, out.as_deref()),
        Command::Encode { config, out } => cmd_encode(config, out.as_deref()),
        Command::Metrics {
            config,
            points,
            t_max,
            drive_strength,
            out,
        } => cmd_metrics(config, *points, *t_max, *drive_strength, out.as_deref()),
        Command::Sweep {
            config,
            gamma_grid,
            points,
            t_max,
            drive_strength,
            out_dir,
        } => cmd_sweep(
            config,
            gamma_grid,
            *points,
            *t_max,
            *drive_strength,
            out_dir,
        ),
        Command::Experiment { spec, out, seed } => cmd_experiment(spec, out, *seed),
    };
    match result {
        Ok(()) => std::process::ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::ExitCode::FAILURE
        }
    }
}
