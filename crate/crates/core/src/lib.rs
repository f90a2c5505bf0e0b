// Copyright 2026 The qsteer Contributors
// SPDX-License-Identifier: Apache-2.0

//! Active steering of one or two weakly measured Andreev qubits subject to
//! amplitude damping and dephasing.
//!
//! Each time step a detector qubit is weakly entangled with the system and
//! read out projectively; a greedy rule then picks the steering Hamiltonian
//! that maximizes the anticipated measurement-averaged gain of a target
//! observable. Measurement trajectories are simulated as ensembles of
//! pure-state walkers that share the detector record and see independent
//! bath noise.
//!
//! - [`linalg`]: dense 2x2 and 4x4 complex operators.
//! - [`model`]: Hamiltonians, jump operators and the steering menu.
//! - [`dynamics`]: walker stepping, outcome sampling, direct SME integration.
//! - [`steering`]: gain evaluation, greedy decisions, Bloch oracle.
//! - [`diagnostics`]: fidelity, purity, sweeps, thresholds, spectra.
//! - [`harness`]: configuration, sweeps, verification suites and file output.

pub mod diagnostics;
pub mod dynamics;
pub mod harness;
pub mod linalg;
pub mod model;
pub mod steering;

use thiserror::Error;

pub use diagnostics::{DiagnosticsError, SweepPoint, TrajectoryRecord};
pub use dynamics::{BathDrift, DynamicsError, Policy, RngPolicy, TrajectoryOptions};
pub use harness::HarnessError;
pub use linalg::{LinalgError, Operator, StateVector, C64};
pub use model::{Model, ModelError, ModelSpec, Outcome, SteerOp, SteeringChoice};
pub use steering::{DecisionMode, Protocol, SteeringError};

/// Any error raised by the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Steering(#[from] SteeringError),
    #[error(transparent)]
    Diagnostics(#[from] DiagnosticsError),
    #[error(transparent)]
    Harness(#[from] HarnessError),
}
