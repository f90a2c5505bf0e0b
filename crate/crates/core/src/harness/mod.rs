// Copyright 2026 The qsteer Contributors
// SPDX-License-Identifier: Apache-2.0

//! Configuration, sweep orchestration, verification and file output.

pub mod config;
pub mod output;
pub mod run;
pub mod verify;

use std::path::PathBuf;

use thiserror::Error;

use crate::diagnostics::DiagnosticsError;
use crate::dynamics::DynamicsError;
use crate::linalg::LinalgError;
use crate::model::ModelError;
use crate::steering::SteeringError;

pub use config::{GammaGrid, NoiseMode, Preset, RunConfig};
pub use run::{compute_sweep, run_single, run_sweep, Provenance, SweepResult};
pub use verify::{verify, VerifyReport};

/// Process exit status of a validation error.
pub const EXIT_VALIDATION: i32 = 1;
/// Process exit status of a runtime failure.
pub const EXIT_RUNTIME: i32 = 2;
/// Process exit status of a failed verification suite.
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{}: {message}", path.display())]
    Io { path: PathBuf, message: String },
    #[error("{}: malformed CSV: {message}", path.display())]
    Csv { path: PathBuf, message: String },
    #[error("{}: config hash {found} does not match {expected}", path.display())]
    HashMismatch {
        path: PathBuf,
        expected: String,
        found: String,
    },
    #[error("{failed} of {total} grid points failed; partial results written")]
    PartialSweep { failed: usize, total: usize },
    #[error("{0}")]
    Runtime(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Steering(#[from] SteeringError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Diagnostics(#[from] DiagnosticsError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

impl HarnessError {
    /// Validation problems are the caller's to fix; everything else is a
    /// runtime failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_)
            | HarnessError::Model(_)
            | HarnessError::HashMismatch { .. } => EXIT_VALIDATION,
            HarnessError::Steering(SteeringError::UnknownProtocol(_)) => EXIT_VALIDATION,
            _ => EXIT_RUNTIME,
        }
    }
}
