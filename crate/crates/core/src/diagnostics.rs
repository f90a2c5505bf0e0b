// Copyright 2026 The qsteer Contributors
// SPDX-License-Identifier: Apache-2.0

//! Fidelity, purity, late-time ensemble statistics, threshold location and
//! oscillation spectra.

use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{LinalgError, Operator, StateVector, C64, EIGEN_TOL};
use crate::model::{Outcome, SteeringChoice};
use crate::steering::{BlochVector, Protocol};

/// Shortest trace accepted by [`dominant_frequency`].
pub const MIN_SPECTRUM_LEN: usize = 256;
/// Peak-to-median ratio below which a spectral peak is not trusted.
pub const MIN_PEAK_SNR: f64 = 2.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiagnosticsError {
    #[error("late-time window is empty")]
    EmptyWindow,
    #[error("need at least {need} {what}, got {got}")]
    TooFew {
        what: &'static str,
        need: usize,
        got: usize,
    },
    #[error("density matrix has eigenvalue {0:e} below the clipping tolerance")]
    NotPositive(f64),
    #[error("purity minimum lies on the grid boundary at gamma = {0}; widen the grid")]
    BoundaryMinimum(f64),
    #[error("gamma grid must be positive and strictly increasing")]
    BadGrid,
    #[error("trace is flat; no spectral peak")]
    FlatTrace,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `<target| rho |target>`
pub fn fidelity(rho: &Operator, target: &StateVector) -> f64 {
    rho.expect_state(target).re
}

pub fn min_eigenvalue(rho: &Operator) -> Result<f64, LinalgError> {
    rho.min_eigval()
}

/// `Tr(rho^2)` from the spectrum, with eigenvalues in `[-1e-9, 0)` clipped.
pub fn purity(rho: &Operator) -> Result<f64, DiagnosticsError> {
    let eig = rho.hermitian_part().eigvals_hermitian()?;
    if eig[0] < -EIGEN_TOL {
        return Err(DiagnosticsError::NotPositive(eig[0]));
    }
    Ok(eig.iter().map(|l| l.max(0.0).powi(2)).sum())
}

/// Diagnostics of one step, evaluated on the walker-averaged state after the
/// step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    pub choice: SteeringChoice,
    pub outcome: Outcome,
    pub fidelity: f64,
    /// Fidelities to the protocol's reference states.
    pub references: Vec<f64>,
    /// Single qubit only.
    pub bloch: Option<[f64; 3]>,
    pub purity: f64,
}

impl StepRecord {
    pub fn measure(
        step: usize,
        choice: SteeringChoice,
        outcome: Outcome,
        rho: &Operator,
        protocol: &Protocol,
    ) -> Self {
        let bloch = BlochVector::from_density(rho).ok().map(|b| b.0);
        Self {
            step,
            choice,
            outcome,
            fidelity: fidelity(rho, protocol.target_state()),
            references: protocol
                .references()
                .iter()
                .map(|r| fidelity(rho, r))
                .collect(),
            bloch,
            purity: rho.trace_product(rho).re,
        }
    }
}

/// Per-step log of one measurement trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub n_qubits: usize,
    pub dt: f64,
    pub snapshot_stride: usize,
    pub steps: Vec<StepRecord>,
    /// `(step, rho_bar)` every `snapshot_stride` steps.
    pub snapshots: Vec<(usize, Operator)>,
}

impl TrajectoryRecord {
    pub fn new(n_qubits: usize, dt: f64, snapshot_stride: usize) -> Self {
        Self {
            n_qubits,
            dt,
            snapshot_stride,
            steps: Vec::new(),
            snapshots: Vec::new(),
        }
    }

    pub fn push(&mut self, record: StepRecord, rho: &Operator) {
        if self.snapshot_stride > 0 && record.step.is_multiple_of(self.snapshot_stride) {
            self.snapshots.push((record.step, *rho));
        }
        self.steps.push(record);
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn fidelity_trace(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.fidelity).collect()
    }
}

/// First step inside the final `window_fraction` of `n_steps` (1-based).
pub fn window_start(n_steps: usize, window_fraction: f64) -> usize {
    let len = (n_steps as f64 * window_fraction).round() as usize;
    n_steps - len.min(n_steps) + 1
}

/// Late-time averages of one trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySummary {
    pub mean_fidelity: f64,
    pub mean_rho: Operator,
}

impl TrajectorySummary {
    pub fn from_record(
        record: &TrajectoryRecord,
        window_fraction: f64,
    ) -> Result<Self, DiagnosticsError> {
        let start = window_start(record.len(), window_fraction);
        let window: Vec<&StepRecord> = record.steps.iter().filter(|s| s.step >= start).collect();
        if window.is_empty() {
            return Err(DiagnosticsError::EmptyWindow);
        }
        let mean_fidelity = window.iter().map(|s| s.fidelity).sum::<f64>() / window.len() as f64;
        let snaps: Vec<&Operator> = record
            .snapshots
            .iter()
            .filter(|(k, _)| *k >= start)
            .map(|(_, r)| r)
            .collect();
        if snaps.is_empty() {
            return Err(DiagnosticsError::EmptyWindow);
        }
        let mut mean_rho = Operator::zeros(snaps[0].dim())?;
        for r in &snaps {
            mean_rho += **r;
        }
        Ok(Self {
            mean_fidelity,
            mean_rho: mean_rho.scale_re(1.0 / snaps.len() as f64),
        })
    }
}

/// Late-time statistics at one error rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub gamma: f64,
    pub mean_fidelity: f64,
    /// Sample variance across trajectories.
    pub fidelity_variance: f64,
    pub fidelity_std: f64,
    /// Purity of the trajectory- and time-averaged state.
    pub purity: f64,
    pub n_trajectories: usize,
}

impl SweepPoint {
    /// Standard error of `mean_fidelity`.
    pub fn fidelity_sem(&self) -> f64 {
        self.fidelity_std / (self.n_trajectories as f64).sqrt()
    }
}

/// Combines per-trajectory summaries, in the given order.
pub fn aggregate(
    gamma: f64,
    summaries: &[TrajectorySummary],
) -> Result<SweepPoint, DiagnosticsError> {
    let n = summaries.len();
    if n < 2 {
        return Err(DiagnosticsError::TooFew {
            what: "trajectories",
            need: 2,
            got: n,
        });
    }
    let mean = summaries.iter().map(|s| s.mean_fidelity).sum::<f64>() / n as f64;
    let var = summaries
        .iter()
        .map(|s| (s.mean_fidelity - mean).powi(2))
        .sum::<f64>()
        / (n - 1) as f64;
    let mut rho = Operator::zeros(summaries[0].mean_rho.dim())?;
    for s in summaries {
        rho += s.mean_rho;
    }
    let rho = rho.scale_re(1.0 / n as f64);
    Ok(SweepPoint {
        gamma,
        mean_fidelity: mean,
        fidelity_variance: var,
        fidelity_std: var.sqrt(),
        purity: purity(&rho)?,
        n_trajectories: n,
    })
}

/// Time-averages each record over its final window, then averages across
/// records.
pub fn late_time_stats(
    gamma: f64,
    records: &[TrajectoryRecord],
    window_fraction: f64,
) -> Result<SweepPoint, DiagnosticsError> {
    let summaries = records
        .iter()
        .map(|r| TrajectorySummary::from_record(r, window_fraction))
        .collect::<Result<Vec<_>, _>>()?;
    aggregate(gamma, &summaries)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    pub gamma_c: f64,
    /// Smallest purity on the grid.
    pub min_purity: f64,
    pub grid_index: usize,
}

/// Error rate of minimal purity, refined by a parabola through the discrete
/// minimum and its neighbours in `ln gamma`.
pub fn locate_threshold(points: &[SweepPoint]) -> Result<Threshold, DiagnosticsError> {
    if points.len() < 5 {
        return Err(DiagnosticsError::TooFew {
            what: "grid points",
            need: 5,
            got: points.len(),
        });
    }
    if points[0].gamma <= 0.0 || points.windows(2).any(|w| w[1].gamma <= w[0].gamma) {
        return Err(DiagnosticsError::BadGrid);
    }
    let (i, min) = points
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.purity.total_cmp(&b.1.purity))
        .map(|(i, p)| (i, p.purity))
        .unwrap();
    if i == 0 || i == points.len() - 1 {
        return Err(DiagnosticsError::BoundaryMinimum(points[i].gamma));
    }
    let x: Vec<f64> = points[i - 1..=i + 1].iter().map(|p| p.gamma.ln()).collect();
    let y: Vec<f64> = points[i - 1..=i + 1].iter().map(|p| p.purity).collect();
    // vertex of the interpolating parabola
    let d1 = (y[1] - y[0]) / (x[1] - x[0]);
    let d2 = (y[2] - y[1]) / (x[2] - x[1]);
    let curvature = (d2 - d1) / (x[2] - x[0]);
    let vertex = if curvature > 0.0 {
        (0.5 * (x[0] + x[1]) - d1 / (2.0 * curvature)).clamp(x[0], x[2])
    } else {
        x[1]
    };
    Ok(Threshold {
        gamma_c: vertex.exp(),
        min_purity: min,
        grid_index: i,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralPeak {
    /// Angular frequency of the peak.
    pub omega: f64,
    /// Bin spacing in angular frequency.
    pub resolution: f64,
    /// Peak magnitude over the median non-zero-bin magnitude.
    pub snr: f64,
}

impl SpectralPeak {
    pub fn is_reliable(&self) -> bool {
        self.snr >= MIN_PEAK_SNR
    }
}

/// Largest peak of the magnitude spectrum of a linearly detrended trace,
/// excluding the zero bin, refined by parabolic interpolation of the
/// log-magnitude.
pub fn dominant_frequency(trace: &[f64], dt: f64) -> Result<SpectralPeak, DiagnosticsError> {
    let n = trace.len();
    if n < MIN_SPECTRUM_LEN {
        return Err(DiagnosticsError::TooFew {
            what: "samples",
            need: MIN_SPECTRUM_LEN,
            got: n,
        });
    }
    let detrended = detrend(trace);
    let scale = detrended.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if scale < 1e-14 {
        return Err(DiagnosticsError::FlatTrace);
    }
    let mut buf: Vec<C64> = detrended.iter().map(|&v| C64::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let mags: Vec<f64> = buf[..n / 2 + 1].iter().map(|c| c.norm()).collect();
    let (k, peak) = mags
        .iter()
        .enumerate()
        .skip(1)
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, m)| (k, *m))
        .unwrap();
    let mut rest: Vec<f64> = mags[1..].to_vec();
    rest.sort_by(f64::total_cmp);
    let median = rest[rest.len() / 2];
    let offset = if k > 1 && k + 1 < mags.len() {
        let (a, b, c) = (mags[k - 1].ln(), mags[k].ln(), mags[k + 1].ln());
        let denom = a - 2.0 * b + c;
        if denom < 0.0 {
            (0.5 * (a - c) / denom).clamp(-0.5, 0.5)
        } else {
            0.0
        }
    } else {
        0.0
    };
    let resolution = 2.0 * std::f64::consts::PI / (n as f64 * dt);
    Ok(SpectralPeak {
        omega: (k as f64 + offset) * resolution,
        resolution,
        snr: if median > 0.0 {
            peak / median
        } else {
            f64::INFINITY
        },
    })
}

fn detrend(trace: &[f64]) -> Vec<f64> {
    let n = trace.len() as f64;
    let t_mean = (n - 1.0) / 2.0;
    let y_mean = trace.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (i, y) in trace.iter().enumerate() {
        let dx = i as f64 - t_mean;
        sxy += dx * (y - y_mean);
        sxx += dx * dx;
    }
    let slope = sxy / sxx;
    trace
        .iter()
        .enumerate()
        .map(|(i, y)| y - y_mean - slope * (i as f64 - t_mean))
        .collect()
}
