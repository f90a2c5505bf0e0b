// Copyright 2026 The qsteer Contributors
// SPDX-License-Identifier: Apache-2.0

//! Fast invariant and oracle suites behind `qsteer verify`.
//!
//! Each suite returns its measured residuals next to the bound it was held
//! to, so a report line is self-explanatory. Suites take their knobs as
//! arguments so tests can inject negative controls.

use std::f64::consts::PI;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::diagnostics::{self, TrajectorySummary};
use crate::dynamics::{
    evolve_trajectory, sme_integrate, sse_step, OutcomeSource, Policy, RngPolicy, StepInputs,
    TrajectoryOptions, WalkerEnsemble,
};
use crate::linalg::{Operator, StateVector, C64};
use crate::model::{
    kraus_completeness_residual, kraus_operators, steering_set, supercurrent_axis,
    unitarity_residual, Model, ModelError, ModelSpec, Outcome, SteeringChoice,
    WEAK_MEASUREMENT_LIMIT,
};
use crate::steering::{bloch_vs_sme_crosscheck, BlochVector, Protocol};

use super::config::{GammaGrid, RunConfig};
use super::run::{build_pool, compute_sweep};
use super::HarnessError;

/// First-order Kraus residual is `~ (|H| dt)^2`; beyond this the expansion
/// is not a weak measurement.
pub const KRAUS_RESIDUAL_LIMIT: f64 = WEAK_MEASUREMENT_LIMIT * WEAK_MEASUREMENT_LIMIT;
pub const KRAUS_DTS: [f64; 3] = [1e-2, 1e-3, 1e-4];
pub const KRAUS_EXPONENT_TOL: f64 = 0.1;
pub const AXIS_SQUARE_TOL: f64 = 1e-12;
pub const ORACLE_PREFACTOR: f64 = 5.0;
pub const ORACLE_WALKERS: [usize; 3] = [10, 100, 1000];
pub const ORACLE_SLOPE: f64 = -0.5;
pub const ORACLE_SLOPE_TOL: f64 = 0.15;
pub const BLOCH_TOL: f64 = 1e-10;
pub const PROBABILITY_TOL: f64 = 1e-10;
pub const TRACE_DRIFT_TOL: f64 = 1e-8;
pub const WALKER_NORM_TOL: f64 = 1e-12;
pub const POSITIVITY_TOL: f64 = -1e-9;
pub const GREEDY_P_VALUE: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub label: String,
    pub measured: f64,
    /// Human-readable bound, e.g. `<= 1e-10`.
    pub bound: String,
    pub passed: bool,
}

impl Check {
    fn at_most(label: impl Into<String>, measured: f64, limit: f64) -> Self {
        Self {
            label: label.into(),
            measured,
            bound: format!("<= {limit:.3e}"),
            passed: measured <= limit,
        }
    }

    fn at_least(label: impl Into<String>, measured: f64, limit: f64) -> Self {
        Self {
            label: label.into(),
            measured,
            bound: format!(">= {limit:.3e}"),
            passed: measured >= limit,
        }
    }

    fn within(label: impl Into<String>, measured: f64, center: f64, tol: f64) -> Self {
        Self {
            label: label.into(),
            measured,
            bound: format!("{center} +- {tol}"),
            passed: (measured - center).abs() <= tol,
        }
    }

    fn failed(label: impl Into<String>, message: impl fmt::Display) -> Self {
        Self {
            label: format!("{}: {message}", label.into()),
            measured: f64::NAN,
            bound: "no error".into(),
            passed: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteResult {
    pub id: &'static str,
    pub name: &'static str,
    pub checks: Vec<Check>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed() { "PASS" } else { "FAIL" };
        writeln!(f, "{tag} [{}] {}", self.id, self.name)?;
        for c in &self.checks {
            let mark = if c.passed { "ok " } else { "BAD" };
            writeln!(
                f,
                "    {mark} {}: {:.6e} ({})",
                c.label, c.measured, c.bound
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suites: Vec<SuiteResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.suites {
            write!(f, "{s}")?;
        }
        let n_pass = self.suites.iter().filter(|s| s.passed()).count();
        writeln!(f, "{n_pass}/{} suites passed", self.suites.len())
    }
}

/// Single-qubit parameters of `cfg` with noise switched off.
fn base_spec(cfg: &RunConfig) -> ModelSpec {
    ModelSpec {
        n_qubits: 1,
        delta: cfg.delta,
        transmission: cfg.transmission,
        phase: cfg.phase,
        coupling: cfg.coupling,
        steer_strength: cfg.steer_strength,
        dt: cfg.dt,
        gamma_ad: 0.0,
        gamma_pd: 0.0,
        asymmetry: 1.0,
    }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

/// Worst completeness residual over the steering menu at each `dt`, and the
/// fitted power of `dt`.
pub fn kraus_suite(spec: &ModelSpec, dts: &[f64]) -> SuiteResult {
    let mut checks = Vec::new();
    let mut residuals = Vec::new();
    for &dt in dts {
        let s = ModelSpec {
            n_qubits: 1,
            dt,
            ..*spec
        };
        let worst = steering_set(1).iter().try_fold(0.0f64, |acc, choice| {
            kraus_operators(&s, choice).map(|k| acc.max(kraus_completeness_residual(&k)))
        });
        match worst {
            Ok(r) => {
                checks.push(Check::at_most(
                    format!("residual at dt={dt:e}"),
                    r,
                    KRAUS_RESIDUAL_LIMIT,
                ));
                residuals.push(r);
            }
            Err(e) => checks.push(Check::failed(format!("dt={dt:e}"), e)),
        }
    }
    if residuals.len() == dts.len() && dts.len() >= 2 && residuals.iter().all(|&r| r > 0.0) {
        checks.push(Check::within(
            "fitted dt exponent",
            log_log_slope(dts, &residuals),
            2.0,
            KRAUS_EXPONENT_TOL,
        ));
    } else {
        checks.push(Check::failed(
            "fitted dt exponent",
            "not enough positive residuals",
        ));
    }
    SuiteResult {
        id: "8a",
        name: "Kraus completeness is second order in dt",
        checks,
    }
}

/// Builds the supercurrent axis of a spec; replaceable for negative controls.
pub type AxisBuilder = fn(&ModelSpec) -> Result<Operator, ModelError>;

/// The supercurrent axis squares to one and is unitary for random
/// transmissions and phases.
pub fn axis_suite(spec: &ModelSpec, samples: usize, seed: u64, axis: AxisBuilder) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut square = 0.0f64;
    let mut unitary = 0.0f64;
    let mut errors = Vec::new();
    for _ in 0..samples {
        // T <= 0.95 keeps E_A >= sqrt(0.05) delta.
        let s = ModelSpec {
            transmission: rng.random_range(0.01..0.95),
            phase: rng.random_range(0.0..2.0 * PI),
            ..*spec
        };
        match axis(&s) {
            Ok(a) => {
                let id = Operator::identity(2).unwrap();
                square = square.max((a * a - id).max_abs());
                unitary = unitary.max(unitarity_residual(&a));
            }
            Err(e) => errors.push(e),
        }
    }
    let mut checks = vec![
        Check::at_most(
            format!("max |s^2 - 1| over {samples} draws"),
            square,
            AXIS_SQUARE_TOL,
        ),
        Check::at_most("max |s^dagger s - 1|", unitary, AXIS_SQUARE_TOL),
    ];
    if let Some(e) = errors.first() {
        checks.push(Check::failed("axis construction", e));
    }
    SuiteResult {
        id: "8b",
        name: "supercurrent axis is an involution",
        checks,
    }
}

/// Oracle settings for the walker-average versus direct-SME comparison.
#[derive(Debug, Clone)]
pub struct OracleSettings {
    pub spec: ModelSpec,
    pub n_steps: usize,
    pub walkers: Vec<usize>,
    pub replicas: usize,
    pub seed: u64,
}

impl OracleSettings {
    /// Small `dt` keeps direct Euler integration of the SME positive;
    /// strong noise makes the walker spread, and so the test, non-trivial.
    pub fn standard(spec: &ModelSpec, seed: u64) -> Self {
        Self {
            spec: ModelSpec {
                n_qubits: 1,
                dt: 1e-3,
                gamma_ad: 5.0,
                gamma_pd: 5.0,
                ..*spec
            },
            n_steps: 200,
            walkers: ORACLE_WALKERS.to_vec(),
            replicas: 6,
            seed,
        }
    }
}

/// Fixed record: seeded random choices, clicks at a few fixed steps.
fn fixed_record(n_steps: usize, seed: u64) -> (Vec<SteeringChoice>, Vec<Outcome>) {
    let set = steering_set(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let choices = (0..n_steps)
        .map(|_| set[rng.random_range(0..set.len())])
        .collect();
    let outcomes = (0..n_steps)
        .map(|k| {
            if k % 70 == 35 {
                Outcome::CLICK
            } else {
                Outcome::NO_CLICK
            }
        })
        .collect();
    (choices, outcomes)
}

pub fn oracle_suite(settings: &OracleSettings) -> SuiteResult {
    let mut checks = Vec::new();
    let run = || -> Result<Vec<Check>, HarnessError> {
        let model = Model::new(settings.spec)?;
        let protocol = Protocol::n1_target_zero();
        let (choices, outcomes) = fixed_record(settings.n_steps, settings.seed);
        let sme = sme_integrate(
            &model,
            &protocol,
            &outcomes,
            Some(&choices),
            settings.n_steps,
        )?;
        let mut out = Vec::new();
        let mut rms = Vec::new();
        for &n_w in &settings.walkers {
            let options = TrajectoryOptions {
                n_steps: settings.n_steps,
                n_walkers: n_w,
                snapshot_stride: 1,
                policy: Policy::Fixed(choices.clone()),
                outcomes: OutcomeSource::Fixed(outcomes.clone()),
                ..TrajectoryOptions::default()
            };
            let mut worst = 0.0f64;
            let mut sum_sq = 0.0;
            let mut count = 0usize;
            for rep in 0..settings.replicas {
                let rng = RngPolicy::new(settings.seed ^ 0x5eed);
                let record = evolve_trajectory(&model, &protocol, &options, &rng, rep as u64)?;
                for ((_, avg), exact) in record.snapshots.iter().zip(&sme) {
                    let d = (*avg - *exact).frobenius_norm();
                    worst = worst.max(d);
                    sum_sq += d * d;
                    count += 1;
                }
            }
            let limit = ORACLE_PREFACTOR / (n_w as f64).sqrt();
            out.push(Check::at_most(
                format!("max deviation, n_w={n_w}"),
                worst,
                limit,
            ));
            rms.push((sum_sq / count as f64).sqrt());
        }
        let n_w: Vec<f64> = settings.walkers.iter().map(|&n| n as f64).collect();
        out.push(Check::within(
            "fitted convergence slope",
            log_log_slope(&n_w, &rms),
            ORACLE_SLOPE,
            ORACLE_SLOPE_TOL,
        ));
        Ok(out)
    };
    match run() {
        Ok(c) => checks.extend(c),
        Err(e) => checks.push(Check::failed("integration", e)),
    }
    SuiteResult {
        id: "8c",
        name: "walker average converges to the stochastic master equation",
        checks,
    }
}

/// Closed-form Bloch iteration against the density-matrix update, random
/// rates, 100 steps with jumps.
pub fn bloch_suite(spec: &ModelSpec, seed: u64) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = ModelSpec {
        n_qubits: 1,
        dt: 0.005,
        gamma_ad: rng.random_range(0.0..1.0),
        gamma_pd: rng.random_range(0.0..1.0),
        ..*spec
    };
    let (choices, _) = fixed_record(100, seed);
    let outcomes: Vec<Outcome> = (0..100)
        .map(|k| {
            if k % 17 == 5 {
                Outcome::CLICK
            } else {
                Outcome::NO_CLICK
            }
        })
        .collect();
    let initial = BlochVector([0.6, -0.3, 0.5]);
    let check = Model::new(s)
        .map_err(HarnessError::from)
        .and_then(|m| Ok(bloch_vs_sme_crosscheck(&m, &initial, &choices, &outcomes)?));
    let checks = vec![match check {
        Ok(d) => Check::at_most("max component deviation over 100 steps", d, BLOCH_TOL),
        Err(e) => Check::failed("crosscheck", e),
    }];
    SuiteResult {
        id: "8d",
        name: "Bloch iteration matches the density-matrix update",
        checks,
    }
}

fn random_density(dim: usize, rng: &mut ChaCha8Rng) -> Operator {
    let mut rho = Operator::zeros(dim).unwrap();
    let weights: Vec<f64> = (0..3).map(|_| rng.random_range(0.0..1.0)).collect();
    let total: f64 = weights.iter().sum();
    for w in weights {
        let amps: Vec<C64> = (0..dim)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let psi = StateVector::new(&amps).unwrap().normalized().unwrap();
        rho += psi.projector().scale_re(w / total);
    }
    rho
}

fn normalization_checks(cfg: &RunConfig) -> Result<Vec<Check>, HarnessError> {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.master_seed);
    let base = base_spec(cfg);

    let mut worst_p = 0.0f64;
    for n_qubits in [1, 2] {
        let model = Model::new(ModelSpec {
            n_qubits,
            gamma_ad: 0.1,
            gamma_pd: 0.1,
            ..base
        })?;
        for _ in 0..100 {
            let rho = random_density(model.dim(), &mut rng);
            worst_p = worst_p.max((model.probabilities(&rho)?.total() - 1.0).abs());
        }
    }
    checks.push(Check::at_most(
        "max |sum P - 1|, random states",
        worst_p,
        PROBABILITY_TOL,
    ));

    // Dissipation damps the Euler growth of pure-state errors.
    let spec = ModelSpec {
        dt: 0.01,
        gamma_ad: 0.5,
        gamma_pd: 0.5,
        ..base
    };
    let model = Model::new(spec)?;
    let protocol = Protocol::n1_target_zero();
    let n = 10_000;
    let outcomes: Vec<Outcome> = (0..n)
        .map(|k| {
            if k % 500 == 250 {
                Outcome::CLICK
            } else {
                Outcome::NO_CLICK
            }
        })
        .collect();
    let rhos = sme_integrate(&model, &protocol, &outcomes, None, n)?;
    let drift = rhos
        .iter()
        .map(|r| (r.trace().re - 1.0).abs())
        .fold(0.0, f64::max);
    checks.push(Check::at_most(
        "SME trace drift over 1e4 steps",
        drift,
        TRACE_DRIFT_TOL,
    ));

    let mut ensemble = WalkerEnsemble::new(*protocol.initial_state(), 16)?;
    let mut bath = ChaCha8Rng::seed_from_u64(cfg.master_seed ^ 0xba7);
    let set = protocol.steering_set();
    let mut worst_norm = 0.0f64;
    let mut draws = vec![0.0; model.error_channels().len()];
    for k in 0..2000 {
        let choice = set[k % set.len()];
        let outcome = if k % 97 == 3 {
            Outcome::CLICK
        } else {
            Outcome::NO_CLICK
        };
        for psi in ensemble.walkers_mut() {
            for d in draws.iter_mut() {
                *d = bath.sample(StandardNormal);
            }
            let input = StepInputs {
                h0: model.hamiltonian(&choice),
                c_meas: model.jumps().jump(outcome),
                c_meas_gram: model.jumps().gram(outcome),
                c_errors: model.error_channels(),
                c_error_grams: model.error_grams(),
                xi: outcome.xi,
                bath_draws: &draws,
                drift: cfg.bath_drift,
            };
            *psi = sse_step(psi, &input, model.dt())?;
            worst_norm = worst_norm.max((psi.norm_sqr() - 1.0).abs());
        }
    }
    checks.push(Check::at_most(
        "max walker |norm^2 - 1|",
        worst_norm,
        WALKER_NORM_TOL,
    ));

    let model2 = Model::new(ModelSpec {
        n_qubits: 2,
        coupling: 0.49,
        gamma_ad: 0.1,
        gamma_pd: 0.1,
        ..base
    })?;
    let bell = Protocol::n2_bell(0, 1)?;
    let options = TrajectoryOptions {
        n_steps: 300,
        n_walkers: 8,
        snapshot_stride: 1,
        drift: cfg.bath_drift,
        ..TrajectoryOptions::default()
    };
    let record = evolve_trajectory(
        &model2,
        &bell,
        &options,
        &RngPolicy::new(cfg.master_seed),
        0,
    )?;
    let mut min_eig = f64::INFINITY;
    for (_, rho) in &record.snapshots {
        min_eig = min_eig.min(diagnostics::min_eigenvalue(rho)?);
    }
    checks.push(Check::at_least(
        "min eigenvalue of rho_bar, two qubits",
        min_eig,
        POSITIVITY_TOL,
    ));

    let small = RunConfig {
        grid: GammaGrid {
            min: 1e-2,
            max: 1.0,
            count: 5,
        },
        n_steps: 120,
        total_time: None,
        n_trajectories: 4,
        n_walkers: 3,
        ..cfg.clone()
    };
    let one = compute_sweep(&small, &build_pool(1)?)?;
    let three = compute_sweep(&small, &build_pool(3)?)?;
    let mismatches = one
        .points
        .iter()
        .zip(&three.points)
        .filter(|(a, b)| a != b)
        .count()
        + one.points.len().abs_diff(three.points.len());
    checks.push(Check::at_most(
        "sweep points differing between 1 and 3 workers",
        mismatches as f64,
        0.0,
    ));
    Ok(checks)
}

pub fn normalization_suite(cfg: &RunConfig) -> SuiteResult {
    let checks = normalization_checks(cfg).unwrap_or_else(|e| vec![Check::failed("suite", e)]);
    SuiteResult {
        id: "8e",
        name: "normalization, trace, positivity and determinism",
        checks,
    }
}

/// Welch's one-sided test that `a` has the larger mean. Returns `(t, p)`.
pub fn welch_one_sided(a: &[f64], b: &[f64]) -> (f64, f64) {
    let stats = |x: &[f64]| {
        let n = x.len() as f64;
        let m = x.iter().sum::<f64>() / n;
        let v = x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1.0);
        (n, m, v)
    };
    let (na, ma, va) = stats(a);
    let (nb, mb, vb) = stats(b);
    let se2 = va / na + vb / nb;
    let t = (ma - mb) / se2.sqrt();
    let df = se2 * se2 / ((va / na).powi(2) / (na - 1.0) + (vb / nb).powi(2) / (nb - 1.0));
    match StudentsT::new(0.0, 1.0, df) {
        Ok(dist) => (t, 1.0 - dist.cdf(t)),
        // Zero variance on both sides: decided by the means alone.
        Err(_) => (t, if ma > mb { 0.0 } else { 1.0 }),
    }
}

/// Late-time fidelity of greedy steering against a state-blind random
/// policy, noise-free, `n_traj` trajectories each.
pub fn greedy_suite(cfg: &RunConfig, n_traj: usize) -> SuiteResult {
    let run = || -> Result<Vec<Check>, HarnessError> {
        let model = Model::new(base_spec(cfg))?;
        let protocol = Protocol::n1_target_zero();
        let rng = RngPolicy::new(cfg.master_seed);
        let late = |policy: Policy| -> Result<Vec<f64>, HarnessError> {
            let options = TrajectoryOptions {
                n_steps: 600,
                // Without bath noise every walker is identical.
                n_walkers: 1,
                snapshot_stride: 1,
                policy,
                drift: cfg.bath_drift,
                ..TrajectoryOptions::default()
            };
            (0..n_traj as u64)
                .map(|t| {
                    let record = evolve_trajectory(&model, &protocol, &options, &rng, t)?;
                    Ok(TrajectorySummary::from_record(&record, cfg.window_fraction)?.mean_fidelity)
                })
                .collect()
        };
        let greedy = late(Policy::Greedy)?;
        let random = late(Policy::Random)?;
        let (_, p) = welch_one_sided(&greedy, &random);
        let mean = |x: &[f64]| x.iter().sum::<f64>() / x.len() as f64;
        Ok(vec![
            Check::at_least("greedy late-time fidelity", mean(&greedy), mean(&random)),
            Check::at_most(
                format!("one-sided p-value, {n_traj} trajectories each"),
                p,
                GREEDY_P_VALUE,
            ),
        ])
    };
    SuiteResult {
        id: "8f",
        name: "greedy steering beats random steering",
        checks: run().unwrap_or_else(|e| vec![Check::failed("suite", e)]),
    }
}

/// Every suite with its standard settings.
pub fn verify(cfg: &RunConfig) -> VerifyReport {
    let base = base_spec(cfg);
    VerifyReport {
        suites: vec![
            kraus_suite(&base, &KRAUS_DTS),
            axis_suite(&base, 100, cfg.master_seed, supercurrent_axis),
            oracle_suite(&OracleSettings::standard(&base, cfg.master_seed)),
            bloch_suite(&base, cfg.master_seed),
            normalization_suite(cfg),
            greedy_suite(cfg, 100),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_a_power_law() {
        let x = [1.0, 10.0, 100.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(-0.5)).collect();
        assert!((log_log_slope(&x, &y) + 0.5).abs() < 1e-12);
    }

    #[test]
    fn kraus_suite_passes_and_catches_inflated_dt() {
        let spec = ModelSpec::default();
        let ok = kraus_suite(&spec, &KRAUS_DTS);
        assert!(ok.passed(), "{ok}");
        let inflated: Vec<f64> = KRAUS_DTS.iter().map(|d| d * 100.0).collect();
        let bad = kraus_suite(&spec, &inflated);
        assert!(!bad.passed(), "{bad}");
    }

    #[test]
    fn axis_suite_catches_non_unitary_axis() {
        let spec = ModelSpec::default();
        assert!(axis_suite(&spec, 100, 3, supercurrent_axis).passed());
        fn stretched(s: &ModelSpec) -> Result<Operator, ModelError> {
            Ok(supercurrent_axis(s)?.scale_re(1.01))
        }
        let bad = axis_suite(&spec, 100, 3, stretched);
        assert!(!bad.passed(), "{bad}");
    }

    #[test]
    fn bloch_suite_passes() {
        let r = bloch_suite(&ModelSpec::default(), 11);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn welch_detects_shifted_means() {
        let a: Vec<f64> = (0..50).map(|i| 1.0 + 0.01 * (i % 7) as f64).collect();
        let b: Vec<f64> = (0..50).map(|i| 0.5 + 0.01 * (i % 5) as f64).collect();
        let (t, p) = welch_one_sided(&a, &b);
        assert!(t > 10.0 && p < 1e-10);
        let (_, p_rev) = welch_one_sided(&b, &a);
        assert!(p_rev > 0.99);
    }

    #[test]
    fn failed_suite_reports_fail_line() {
        let s = SuiteResult {
            id: "x",
            name: "demo",
            checks: vec![Check::at_most("r", 2.0, 1.0)],
        };
        assert!(s.to_string().starts_with("FAIL [x] demo"));
        let empty = SuiteResult {
            id: "y",
            name: "empty",
            checks: vec![],
        };
        assert!(!empty.passed());
    }
}
