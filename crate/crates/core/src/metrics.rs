//! Process metrics for gadget dynamics: survival probability, leakage,
//! conditional fidelity, and absolute fidelity.
//!
//! All metrics are evaluated in the encoded frame: the physical propagator is
//! conjugated by the encoding unitary before projecting, which makes the
//! survival trace measure population of the dressed logical subspace and
//! keeps it consistent with the encoded ideal propagator.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::dense::{realize, DenseOperator, Sign, SpectralDecomposition};
use crate::encoding::{effective_operator, EncodingBundle};
use crate::error::{Error, Result};
use crate::parallel;
use crate::pauli::OperatorSum;

/// Survival probabilities below this are reported as undefined rather than
/// renormalized into noise.
pub const SURVIVAL_CUTOFF: f64 = 1e-12;

const BOUND_SLACK: f64 = 1e-10;

/// Metrics at a single time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricPoint {
    pub t: f64,
    pub p_surv: f64,
    pub leakage: f64,
    pub f_cond: f64,
    pub f_abs: f64,
}

/// A metric trace at fixed confinement.
#[derive(Debug, Clone)]
pub struct MetricSeries {
    pub gamma: f64,
    pub points: Vec<MetricPoint>,
}

impl MetricSeries {
    pub fn new(gamma: f64, points: Vec<MetricPoint>) -> Result<Self> {
        for pair in points.windows(2) {
            if pair[1].t <= pair[0].t {
                return Err(Error::Contract(
                    "metric series times must strictly increase".into(),
                ));
            }
        }
        Ok(Self { gamma, points })
    }

    /// Mean of a metric over points with `t` in `[t_lo, t_hi]`.
    pub fn window_mean(&self, t_lo: f64, t_hi: f64, value: impl Fn(&MetricPoint) -> f64) -> f64 {
        let selected: Vec<f64> = self
            .points
            .iter()
            .filter(|p| p.t >= t_lo && p.t <= t_hi)
            .map(&value)
            .collect();
        selected.iter().sum::<f64>() / selected.len().max(1) as f64
    }
}

fn clamp_unit(label: &str, value: f64) -> Result<f64> {
    if !(-BOUND_SLACK..=1.0 + BOUND_SLACK).contains(&value) {
        return Err(Error::Numerical(format!(
            "{label} = {value} escapes [0, 1]"
        )));
    }
    Ok(value.clamp(0.0, 1.0))
}

/// Precomputed machinery to evaluate the metrics of one physical Hamiltonian
/// over many times. Immutable after construction; evaluations at distinct
/// times are independent.
#[derive(Debug, Clone)]
pub struct MetricsEvaluator {
    logical_dim: usize,
    /// Eigenvalues of the realized physical Hamiltonian.
    physical_values: DVector<f64>,
    /// Rows of `U_enc^dagger V` belonging to the encoded subspace
    /// (`2^n_data x 2^total`).
    projected_rows: DMatrix<Complex64>,
    /// Spectral decomposition of the effective logical generator.
    ideal: SpectralDecomposition,
}

impl MetricsEvaluator {
    pub fn new(h_physical: &OperatorSum, bundle: &EncodingBundle) -> Result<Self> {
        let reg = bundle.register();
        let decomp = SpectralDecomposition::new(&realize(h_physical, reg)?)?;
        let w = bundle.logical_columns();
        let projected_rows = w.adjoint() * decomp.vectors();
        let ideal = SpectralDecomposition::new(&effective_operator(h_physical, bundle)?)?;
        Ok(Self {
            logical_dim: reg.data_dim(),
            physical_values: decomp.values().clone(),
            projected_rows,
            ideal,
        })
    }

    /// Logical block of the rotated propagator, `P U^dag e^{-itH} U P`.
    fn logical_block(&self, t: f64) -> DMatrix<Complex64> {
        let mut scaled = self.projected_rows.clone();
        for (k, mut col) in scaled.column_iter_mut().enumerate() {
            col *= Complex64::new(0.0, -t * self.physical_values[k]).exp();
        }
        &scaled * self.projected_rows.adjoint()
    }

    /// Ideal logical propagator `exp(-it P U^dag H U P)`.
    pub fn ideal_propagator(&self, t: f64) -> Result<DenseOperator> {
        self.ideal.propagator(t, Sign::Neg)
    }

    /// All metrics at one time.
    pub fn point(&self, t: f64) -> Result<MetricPoint> {
        let dim = self.logical_dim as f64;
        let block = self.logical_block(t);
        let p_surv = clamp_unit(
            "p_surv",
            block.iter().map(|c| c.norm_sqr()).sum::<f64>() / dim,
        )?;
        if p_surv < SURVIVAL_CUTOFF {
            return Err(Error::UndefinedMetric(format!(
                "survival probability {p_surv:.3e} at t = {t} is below the cutoff"
            )));
        }
        let ideal = self.ideal_propagator(t)?;
        let trace: Complex64 = ideal
            .matrix()
            .iter()
            .zip(block.iter())
            .map(|(oi, ob)| oi.conj() * ob)
            .sum();
        let f_cond = clamp_unit("f_cond", trace.norm_sqr() / (p_surv * dim * dim))?;
        let f_abs = p_surv * f_cond;
        Ok(MetricPoint {
            t,
            p_surv,
            leakage: 1.0 - p_surv,
            f_cond,
            f_abs,
        })
    }

    /// Metric trace over a strictly increasing time grid.
    pub fn series(&self, gamma: f64, times: &[f64]) -> Result<MetricSeries> {
        let points = parallel::par_try_map(times, |&t| self.point(t))?;
        MetricSeries::new(gamma, points)
    }
}

/// One-shot survival probability `Tr[P O^dag(t) P O(t)] / 2^n_data` in the
/// encoded frame.
pub fn survival_probability(
    h_physical: &OperatorSum,
    bundle: &EncodingBundle,
    t: f64,
) -> Result<f64> {
    Ok(MetricsEvaluator::new(h_physical, bundle)?.point(t)?.p_surv)
}

/// One-shot ideal logical propagator `exp(-it P U^dag H U P)`.
pub fn ideal_propagator(
    bundle: &EncodingBundle,
    h_physical: &OperatorSum,
    t: f64,
) -> Result<DenseOperator> {
    MetricsEvaluator::new(h_physical, bundle)?.ideal_propagator(t)
}

/// One-shot conditional process fidelity at time `t`.
pub fn conditional_fidelity(
    h_physical: &OperatorSum,
    bundle: &EncodingBundle,
    t: f64,
) -> Result<f64> {
    Ok(MetricsEvaluator::new(h_physical, bundle)?.point(t)?.f_cond)
}

/// Absolute fidelity: survival probability times conditional fidelity.
pub fn absolute_fidelity(point: &MetricPoint) -> f64 {
    point.p_surv * point.f_cond
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::build_encoding;
    use crate::gadget::{build_gadget, Driver, GadgetConfig};
    use crate::pauli::{Pauli, PauliString};
    use approx::assert_abs_diff_eq;

    fn config() -> GadgetConfig {
        GadgetConfig::new(3, false, 8.0, 1.0, Driver::FiveBody)
    }

    fn driven_hamiltonian(cfg: &GadgetConfig) -> OperatorSum {
        let mut h = build_gadget(cfg).unwrap();
        for i in 0..cfg.n_data {
            h = h.plus(&OperatorSum::from_term(PauliString::single(
                1.0,
                i,
                Pauli::X,
            )));
        }
        h
    }

    #[test]
    fn survival_is_one_at_zero_time() {
        let cfg = config();
        let bundle = build_encoding(&cfg).unwrap();
        let h = driven_hamiltonian(&cfg);
        assert_abs_diff_eq!(
            survival_probability(&h, &bundle, 0.0).unwrap(),
            1.0,
            epsilon = 1e-10
        );
    }

    #[test]
    fn unperturbed_gadget_never_leaks() {
        let cfg = config();
        let bundle = build_encoding(&cfg).unwrap();
        let h = build_gadget(&cfg).unwrap();
        let evaluator = MetricsEvaluator::new(&h, &bundle).unwrap();
        for t in [0.5, 1.0, 3.0, 7.0] {
            let p = evaluator.point(t).unwrap();
            assert_abs_diff_eq!(p.p_surv, 1.0, epsilon = 1e-10);
            assert_abs_diff_eq!(p.f_cond, 1.0, epsilon = 1e-9);
            assert_abs_diff_eq!(p.leakage, 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn conditional_fidelity_is_one_at_zero_time() {
        let cfg = config();
        let bundle = build_encoding(&cfg).unwrap();
        let h = driven_hamiltonian(&cfg);
        assert_abs_diff_eq!(
            conditional_fidelity(&h, &bundle, 0.0).unwrap(),
            1.0,
            epsilon = 1e-10
        );
    }

    #[test]
    fn ideal_propagator_identity_at_zero() {
        let cfg = config();
        let bundle = build_encoding(&cfg).unwrap();
        let h = build_gadget(&cfg).unwrap();
        let u = ideal_propagator(&bundle, &h, 0.0).unwrap();
        assert!(u.max_abs_diff(&DenseOperator::identity(8)) < 1e-12);
    }

    #[test]
    fn ideal_gadget_propagator_flips_parity_at_pi() {
        // exp(-i pi (alpha/2)(1 - Z^n)) sends |+>^n to |->^n up to phase.
        let cfg = config();
        let bundle = build_encoding(&cfg).unwrap();
        let h = build_gadget(&cfg).unwrap();
        let u = ideal_propagator(&bundle, &h, std::f64::consts::PI).unwrap();
        let plus = crate::state::StateVector::plus_all(3);
        let minus = crate::state::StateVector::minus_all(3);
        let out = plus.apply_dense(&u);
        assert_abs_diff_eq!(out.overlap_sq(&minus), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn absolute_fidelity_is_the_product() {
        let p = MetricPoint {
            t: 1.0,
            p_surv: 0.9,
            leakage: 0.1,
            f_cond: 0.8,
            f_abs: 0.72,
        };
        assert_abs_diff_eq!(absolute_fidelity(&p), 0.72, epsilon = 1e-15);
    }

    #[test]
    fn metric_bounds_and_product_identity() {
        let cfg = config();
        let bundle = build_encoding(&cfg).unwrap();
        let evaluator = MetricsEvaluator::new(&driven_hamiltonian(&cfg), &bundle).unwrap();
        let series = evaluator
            .series(cfg.gamma, &[0.5, 1.0, 2.0, 4.0, 8.0])
            .unwrap();
        for p in &series.points {
            assert!((0.0..=1.0).contains(&p.p_surv));
            assert!((0.0..=1.0).contains(&p.leakage));
            assert!((0.0..=1.0).contains(&p.f_cond));
            assert!((0.0..=1.0).contains(&p.f_abs));
            assert_abs_diff_eq!(p.leakage, 1.0 - p.p_surv, epsilon = 0.0);
            assert_abs_diff_eq!(p.f_abs, p.p_surv * p.f_cond, epsilon = 1e-12);
            assert!(p.f_abs <= p.p_surv.min(p.f_cond) + 1e-12);
        }
    }

    #[test]
    fn survival_plateau_pinned() {
        // n_d = 5, gamma = 8, unit X on every data qubit: after the initial
        // mixing the instantaneous leakage oscillates around a constant
        // level. Mean over t in [5, 10] frozen at first run.
        let cfg = GadgetConfig::new(5, false, 8.0, 1.0, Driver::FiveBody);
        let bundle = build_encoding(&cfg).unwrap();
        let evaluator = MetricsEvaluator::new(&driven_hamiltonian(&cfg), &bundle).unwrap();
        let times: Vec<f64> = (0..=100).map(|k| 5.0 + 0.05 * k as f64).collect();
        let ps: Vec<f64> = times
            .iter()
            .map(|&t| evaluator.point(t).unwrap().p_surv)
            .collect();
        let mean = ps.iter().sum::<f64>() / ps.len() as f64;
        assert_abs_diff_eq!(mean, 0.837430967634543, epsilon = 1e-9);
        let spread = ps.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - ps.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(spread < 0.08, "plateau spread {spread}");
    }

    #[test]
    fn series_requires_increasing_times() {
        let cfg = config();
        let bundle = build_encoding(&cfg).unwrap();
        let evaluator = MetricsEvaluator::new(&build_gadget(&cfg).unwrap(), &bundle).unwrap();
        assert!(evaluator.series(8.0, &[1.0, 1.0]).is_err());
    }
}
