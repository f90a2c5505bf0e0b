// Copyright 2026 The qsteer Contributors
// SPDX-License-Identifier: Apache-2.0

//! Single runs and parallel sweeps.
//!
//! A sweep is a list of (gamma index, trajectory index) jobs executed on a
//! bounded rayon pool. Each job owns its RNG streams, keyed by both indices,
//! and results are collected in job order, so output does not depend on the
//! worker count.

use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagnostics::{
    self, aggregate, locate_threshold, SweepPoint, Threshold, TrajectoryRecord, TrajectorySummary,
};
use crate::dynamics::{evolve_trajectory, RngPolicy};
use crate::model::Model;

use super::config::RunConfig;
use super::output;
use super::HarnessError;

pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Identifies the configuration and code behind an artifact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub config_hash: String,
    pub master_seed: u64,
    pub code_version: String,
}

impl Provenance {
    pub fn of(cfg: &RunConfig) -> Self {
        Self {
            config_hash: cfg.hash(),
            master_seed: cfg.master_seed,
            code_version: CODE_VERSION.to_string(),
        }
    }
}

/// Scheduling facts. Kept apart from results, which must not depend on them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub config_hash: String,
    pub workers: usize,
    pub wall_time_s: f64,
}

/// Stream key of trajectory `t` at grid index `g`.
pub fn trajectory_key(g: usize, t: usize) -> u64 {
    ((g as u64) << 32) | t as u64
}

/// Pool of `workers` threads; 0 means one per core.
pub fn build_pool(workers: usize) -> Result<rayon::ThreadPool, HarnessError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| HarnessError::Runtime(format!("thread pool: {e}")))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingleRunSummary {
    pub provenance: Provenance,
    pub protocol: String,
    pub gamma: f64,
    pub gamma_ad: f64,
    pub gamma_pd: f64,
    pub n_steps: usize,
    pub n_walkers: usize,
    pub window_fraction: f64,
    /// Absent when the window is empty.
    pub late_mean_fidelity: Option<f64>,
    pub late_purity: Option<f64>,
    pub final_fidelity: Option<f64>,
    pub detector_clicks: usize,
    pub warnings: Vec<String>,
}

/// One trajectory at `cfg.gamma`, trajectory key 0.
pub fn simulate_single(
    cfg: &RunConfig,
) -> Result<(TrajectoryRecord, SingleRunSummary), HarnessError> {
    let warnings = cfg.validate()?;
    let protocol = cfg.resolve_protocol()?;
    let spec = cfg.spec_at(cfg.gamma)?;
    let model = Model::new(spec)?;
    // The late-time purity needs every window snapshot.
    let options = cfg.trajectory_options(1);
    let record = evolve_trajectory(
        &model,
        &protocol,
        &options,
        &RngPolicy::new(cfg.master_seed),
        0,
    )?;
    let (late_f, late_p) = match TrajectorySummary::from_record(&record, cfg.window_fraction) {
        Ok(s) => (
            Some(s.mean_fidelity),
            Some(diagnostics::purity(&s.mean_rho)?),
        ),
        Err(diagnostics::DiagnosticsError::EmptyWindow) => (None, None),
        Err(e) => return Err(e.into()),
    };
    let summary = SingleRunSummary {
        provenance: Provenance::of(cfg),
        protocol: protocol.name().to_string(),
        gamma: cfg.gamma,
        gamma_ad: spec.gamma_ad,
        gamma_pd: spec.gamma_pd,
        n_steps: options.n_steps,
        n_walkers: options.n_walkers,
        window_fraction: cfg.window_fraction,
        late_mean_fidelity: late_f,
        late_purity: late_p,
        final_fidelity: record.steps.last().map(|s| s.fidelity),
        detector_clicks: record.steps.iter().filter(|s| s.outcome.is_jump()).count(),
        warnings,
    };
    Ok((record, summary))
}

/// Writes `trajectory.csv`, `summary.json` and, with a positive snapshot
/// stride, `snapshots.csv` into `cfg.out_dir`.
pub fn run_single(cfg: &RunConfig) -> Result<SingleRunSummary, HarnessError> {
    let (mut record, summary) = simulate_single(cfg)?;
    let dir = cfg.out_dir.as_path();
    output::ensure_dir(dir)?;
    let hash = &summary.provenance.config_hash;
    let labels = cfg.resolve_protocol()?.reference_labels().to_vec();
    output::write_trajectory_csv(
        &output::artifact(dir, "trajectory.csv"),
        hash,
        &record,
        &labels,
    )?;
    if cfg.snapshot_stride > 0 {
        record
            .snapshots
            .retain(|(k, _)| k % cfg.snapshot_stride == 0);
        output::write_snapshots_csv(&output::artifact(dir, "snapshots.csv"), hash, &record)?;
    }
    output::write_json(&output::artifact(dir, "summary.json"), &summary)?;
    Ok(summary)
}

/// A grid point with at least one failed trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointFailure {
    pub gamma_index: usize,
    pub gamma: f64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub provenance: Provenance,
    pub protocol: String,
    pub noise: super::config::NoiseMode,
    /// Successful points in grid order.
    pub points: Vec<SweepPoint>,
    pub failures: Vec<PointFailure>,
    pub threshold: Option<Threshold>,
    /// Why no threshold was located, if none was.
    pub threshold_error: Option<String>,
    pub warnings: Vec<String>,
}

impl SweepResult {
    pub fn is_complete(&self) -> bool {
        self.failures.is_empty()
    }
}

fn run_job(
    model: &Model,
    cfg: &RunConfig,
    protocol: &crate::steering::Protocol,
    g: usize,
    t: usize,
) -> Result<TrajectorySummary, HarnessError> {
    let options = cfg.trajectory_options(1);
    let record = evolve_trajectory(
        model,
        protocol,
        &options,
        &RngPolicy::new(cfg.master_seed),
        trajectory_key(g, t),
    )?;
    Ok(TrajectorySummary::from_record(
        &record,
        cfg.window_fraction,
    )?)
}

/// Runs the sweep on `pool` without touching the file system.
pub fn compute_sweep(
    cfg: &RunConfig,
    pool: &rayon::ThreadPool,
) -> Result<SweepResult, HarnessError> {
    let warnings = cfg.validate_sweep()?;
    let protocol = cfg.resolve_protocol()?;
    let gammas = cfg.grid.values();
    let models = gammas
        .iter()
        .map(|&g| Ok(Model::new(cfg.spec_at(g)?)?))
        .collect::<Result<Vec<_>, HarnessError>>()?;
    let n_traj = cfg.n_trajectories;
    let jobs: Vec<(usize, usize)> = (0..gammas.len())
        .flat_map(|g| (0..n_traj).map(move |t| (g, t)))
        .collect();
    let results: Vec<Result<TrajectorySummary, HarnessError>> = pool.install(|| {
        jobs.par_iter()
            .map(|&(g, t)| run_job(&models[g], cfg, &protocol, g, t))
            .collect()
    });

    let mut points = Vec::new();
    let mut failures = Vec::new();
    for (g, chunk) in results.chunks(n_traj).enumerate() {
        let outcome = chunk
            .iter()
            .map(|r| r.as_ref().cloned().map_err(ToString::to_string))
            .collect::<Result<Vec<_>, String>>()
            .and_then(|s| aggregate(gammas[g], &s).map_err(|e| e.to_string()));
        match outcome {
            Ok(p) => points.push(p),
            Err(message) => failures.push(PointFailure {
                gamma_index: g,
                gamma: gammas[g],
                message,
            }),
        }
    }
    let (threshold, threshold_error) = match locate_threshold(&points) {
        Ok(t) => (Some(t), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(SweepResult {
        provenance: Provenance::of(cfg),
        protocol: protocol.name().to_string(),
        noise: cfg.noise,
        points,
        failures,
        threshold,
        threshold_error,
        warnings,
    })
}

/// Writes `sweep.csv`, `sweep.json` and `timing.json` into `cfg.out_dir`.
///
/// Partial results are written before a failed point is reported as
/// [`HarnessError::PartialSweep`].
pub fn run_sweep(cfg: &RunConfig) -> Result<SweepResult, HarnessError> {
    cfg.validate_sweep()?;
    let dir = cfg.out_dir.as_path();
    output::ensure_dir(dir)?;
    let pool = build_pool(cfg.workers)?;
    let start = Instant::now();
    let result = compute_sweep(cfg, &pool)?;
    let timing = Timing {
        config_hash: result.provenance.config_hash.clone(),
        workers: pool.current_num_threads(),
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    write_sweep(dir, &result)?;
    output::write_json(&output::artifact(dir, "timing.json"), &timing)?;
    if !result.is_complete() {
        return Err(HarnessError::PartialSweep {
            failed: result.failures.len(),
            total: cfg.grid.count,
        });
    }
    Ok(result)
}

pub fn write_sweep(dir: &Path, result: &SweepResult) -> Result<(), HarnessError> {
    let hash = &result.provenance.config_hash;
    output::write_sweep_csv(&output::artifact(dir, "sweep.csv"), hash, &result.points)?;
    output::write_json(&output::artifact(dir, "sweep.json"), result)
}

/// Threshold of an existing sweep CSV, with the hash it carries.
pub fn locate_threshold_file(path: &Path) -> Result<(String, Threshold), HarnessError> {
    let (hash, points) = output::read_sweep_csv(path)?;
    Ok((hash, locate_threshold(&points)?))
}
