// Copyright 2026 The qsteer Contributors
// SPDX-License-Identifier: Apache-2.0

//! Run configuration, presets and the config hash.
//!
//! Files are JSON. Keys starting with `_` are annotations and are dropped
//! before parsing, so the shipped example can document itself. Every other
//! key must be known.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dynamics::{BathDrift, Policy, TrajectoryOptions};
use crate::model::{ModelSpec, SteeringChoice};
use crate::steering::{DecisionMode, Protocol};

use super::HarnessError;

/// Smallest grid accepted by a sweep.
pub const MIN_GRID_POINTS: usize = 5;

/// Which error channels a sweep rate drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseMode {
    /// `gamma_ad = gamma_pd = gamma`.
    #[default]
    Both,
    /// `gamma_pd = gamma`, no amplitude damping.
    Phase,
    /// `gamma_ad = gamma`, no dephasing.
    Amplitude,
}

impl NoiseMode {
    /// `(gamma_ad, gamma_pd)` for a sweep rate.
    pub fn rates(self, gamma: f64) -> (f64, f64) {
        match self {
            NoiseMode::Both => (gamma, gamma),
            NoiseMode::Phase => (0.0, gamma),
            NoiseMode::Amplitude => (gamma, 0.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// Publication-scale statistics.
    Paper,
    /// Reduced statistics for CI. Not publication quality.
    Smoke,
}

/// Log-spaced error-rate grid, in the same units as `delta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl GammaGrid {
    /// Endpoints are exact; interior points are geometric.
    pub fn values(&self) -> Vec<f64> {
        match self.count {
            0 => Vec::new(),
            1 => vec![self.min],
            n => {
                let (a, b) = (self.min.ln(), self.max.ln());
                (0..n)
                    .map(|i| {
                        if i == 0 {
                            self.min
                        } else if i == n - 1 {
                            self.max
                        } else {
                            (a + (b - a) * i as f64 / (n - 1) as f64).exp()
                        }
                    })
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub protocol: String,
    pub delta: f64,
    pub transmission: f64,
    pub phase: f64,
    pub coupling: f64,
    pub steer_strength: f64,
    pub dt: f64,
    pub asymmetry: f64,
    /// Error rate of a single run; sweeps use `grid` instead.
    pub gamma: f64,
    pub noise: NoiseMode,
    pub grid: GammaGrid,
    pub n_steps: usize,
    /// When set, overrides `n_steps` with `round(total_time / dt)`.
    pub total_time: Option<f64>,
    pub window_fraction: f64,
    pub n_trajectories: usize,
    pub n_walkers: usize,
    pub master_seed: u64,
    /// Store `rho_bar` every this many steps in single runs; 0 disables.
    pub snapshot_stride: usize,
    /// Flat indices into the full steering menu; `None` keeps all of it.
    pub steering_subset: Option<Vec<usize>>,
    pub bath_drift: BathDrift,
    pub decision: DecisionMode,
    /// Not part of the hash: results do not depend on where they are written.
    pub out_dir: PathBuf,
    /// 0 uses every core. Not part of the hash.
    pub workers: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let spec = ModelSpec::default();
        Self {
            protocol: "n1-target-zero".into(),
            delta: spec.delta,
            transmission: spec.transmission,
            phase: spec.phase,
            coupling: spec.coupling,
            steer_strength: spec.steer_strength,
            dt: spec.dt,
            asymmetry: spec.asymmetry,
            gamma: 1e-3,
            noise: NoiseMode::Both,
            grid: GammaGrid {
                min: 1e-3,
                max: 10.0,
                count: 17,
            },
            n_steps: 3000,
            total_time: None,
            window_fraction: 0.2,
            n_trajectories: 500,
            n_walkers: 100,
            master_seed: 1,
            snapshot_stride: 0,
            steering_subset: None,
            bath_drift: BathDrift::Unraveling,
            decision: DecisionMode::Factorized,
            out_dir: PathBuf::from("out"),
            workers: 0,
        }
    }
}

/// Drops annotation keys (leading `_`) at every depth.
fn strip_annotations(value: &mut serde_json::Value) {
    match value {
        serde_json::Value::Object(map) => {
            map.retain(|k, _| !k.starts_with('_'));
            map.values_mut().for_each(strip_annotations);
        }
        serde_json::Value::Array(items) => items.iter_mut().for_each(strip_annotations),
        _ => {}
    }
}

/// Recursive object merge; non-object values in `top` win.
fn merge(base: &mut serde_json::Value, top: serde_json::Value) {
    match (base, top) {
        (serde_json::Value::Object(b), serde_json::Value::Object(t)) => {
            for (k, v) in t {
                match b.get_mut(&k) {
                    Some(slot) if slot.is_object() && v.is_object() => merge(slot, v),
                    _ => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

impl RunConfig {
    pub fn preset(preset: Preset) -> Self {
        let base = Self::default();
        match preset {
            Preset::Paper => base,
            Preset::Smoke => Self {
                n_trajectories: 50,
                n_walkers: 20,
                grid: GammaGrid {
                    count: 9,
                    ..base.grid
                },
                ..base
            },
        }
    }

    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        Self::from_json_over(&Self::default(), text)
    }

    /// Keys present in `text` replace those of `base`; nested objects merge.
    pub fn from_json_over(base: &Self, text: &str) -> Result<Self, HarnessError> {
        let mut value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        strip_annotations(&mut value);
        if !value.is_object() {
            return Err(HarnessError::Config("top level must be an object".into()));
        }
        let mut merged = serde_json::to_value(base).expect("config serializes");
        merge(&mut merged, value);
        serde_json::from_value(merged).map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn load_over(base: &Self, path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Io {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        Self::from_json_over(base, &text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Effective step count after `total_time`.
    pub fn steps(&self) -> usize {
        match self.total_time {
            Some(t) => (t / self.dt).round() as usize,
            None => self.n_steps,
        }
    }

    pub fn resolve_protocol(&self) -> Result<Protocol, HarnessError> {
        let protocol = Protocol::from_name(&self.protocol)?;
        match &self.steering_subset {
            None => Ok(protocol),
            Some(indices) => {
                let n = protocol.n_qubits();
                let set = indices
                    .iter()
                    .map(|&i| {
                        SteeringChoice::from_index(n, i).ok_or_else(|| {
                            HarnessError::Config(format!("steering index {i} out of range"))
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(protocol.with_steering_set(set)?)
            }
        }
    }

    /// Model parameters at sweep rate `gamma`.
    pub fn spec_at(&self, gamma: f64) -> Result<ModelSpec, HarnessError> {
        let n_qubits = Protocol::from_name(&self.protocol)?.n_qubits();
        let (gamma_ad, gamma_pd) = self.noise.rates(gamma);
        Ok(ModelSpec {
            n_qubits,
            delta: self.delta,
            transmission: self.transmission,
            phase: self.phase,
            coupling: self.coupling,
            steer_strength: self.steer_strength,
            dt: self.dt,
            gamma_ad,
            gamma_pd,
            asymmetry: self.asymmetry,
        })
    }

    pub fn trajectory_options(&self, snapshot_stride: usize) -> TrajectoryOptions {
        TrajectoryOptions {
            n_steps: self.steps(),
            n_walkers: self.n_walkers,
            snapshot_stride,
            policy: Policy::Greedy,
            outcomes: crate::dynamics::OutcomeSource::Sampled,
            decision: self.decision,
            drift: self.bath_drift,
        }
    }

    /// Hard checks shared by every subcommand. Returns model warnings.
    pub fn validate(&self) -> Result<Vec<String>, HarnessError> {
        let bad = |msg: String| Err(HarnessError::Config(msg));
        self.resolve_protocol()?;
        if !(self.window_fraction > 0.0 && self.window_fraction <= 1.0) {
            return bad(format!(
                "window_fraction {} must lie in (0, 1]",
                self.window_fraction
            ));
        }
        if self.n_walkers == 0 {
            return bad("n_walkers must be at least 1".into());
        }
        if let Some(t) = self.total_time {
            if !(t.is_finite() && t >= 0.0) {
                return bad(format!("total_time {t} must be finite and non-negative"));
            }
        }
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return bad(format!(
                "gamma {} must be finite and non-negative",
                self.gamma
            ));
        }
        Ok(self.spec_at(self.gamma)?.validate()?)
    }

    /// Extra checks for sweeps.
    pub fn validate_sweep(&self) -> Result<Vec<String>, HarnessError> {
        let warnings = self.validate()?;
        let g = &self.grid;
        if g.count < MIN_GRID_POINTS {
            return Err(HarnessError::Config(format!(
                "grid needs at least {MIN_GRID_POINTS} points, got {}",
                g.count
            )));
        }
        if !(g.min > 0.0 && g.max > g.min && g.max.is_finite()) {
            return Err(HarnessError::Config(format!(
                "grid needs 0 < min < max, got [{}, {}]",
                g.min, g.max
            )));
        }
        if self.n_trajectories < 2 {
            return Err(HarnessError::Config(
                "sweeps need at least 2 trajectories".into(),
            ));
        }
        for gamma in g.values() {
            self.spec_at(gamma)?.validate()?;
        }
        Ok(warnings)
    }

    /// SHA-256 over the canonical JSON of every result-affecting field.
    pub fn hash(&self) -> String {
        let mut value = serde_json::to_value(self).expect("config serializes");
        if let serde_json::Value::Object(map) = &mut value {
            map.remove("out_dir");
            map.remove("workers");
        }
        // serde_json maps are ordered by key, so this text is canonical.
        let text = serde_json::to_string(&value).expect("value serializes");
        let digest = Sha256::digest(text.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}
