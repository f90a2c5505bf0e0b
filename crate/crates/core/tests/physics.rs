// Copyright 2026 The qsteer Contributors
// SPDX-License-Identifier: Apache-2.0

use qsteer::diagnostics::TrajectorySummary;
use qsteer::dynamics::{evolve_trajectory, Policy, RngPolicy, TrajectoryOptions};
use qsteer::model::{Model, ModelSpec};
use qsteer::steering::Protocol;

fn options(n_steps: usize, n_walkers: usize) -> TrajectoryOptions {
    TrajectoryOptions {
        n_steps,
        n_walkers,
        ..TrajectoryOptions::default()
    }
}

#[test]
fn noise_free_single_qubit_stays_pure_and_reaches_target() {
    let model = Model::new(ModelSpec::default()).unwrap();
    let protocol = Protocol::n1_target_zero();
    let record =
        evolve_trajectory(&model, &protocol, &options(1500, 3), &RngPolicy::new(9), 0).unwrap();
    assert!(record.steps.iter().all(|s| (s.purity - 1.0).abs() < 1e-12));
    let late = TrajectorySummary::from_record(&record, 0.2).unwrap();
    assert!(late.mean_fidelity > 0.95, "{}", late.mean_fidelity);
}

#[test]
fn noise_free_pair_is_steered_into_the_bell_state() {
    let spec = ModelSpec {
        n_qubits: 2,
        coupling: 0.49,
        ..ModelSpec::default()
    };
    let model = Model::new(spec).unwrap();
    let protocol = Protocol::n2_bell(0, 1).unwrap();
    let mut total = 0.0;
    for t in 0..4 {
        let record =
            evolve_trajectory(&model, &protocol, &options(2000, 1), &RngPolicy::new(3), t).unwrap();
        total += TrajectorySummary::from_record(&record, 0.2)
            .unwrap()
            .mean_fidelity;
    }
    assert!(total / 4.0 > 0.9, "{}", total / 4.0);
}

#[test]
fn greedy_beats_random_under_weak_noise() {
    let spec = ModelSpec {
        gamma_ad: 1e-3,
        gamma_pd: 1e-3,
        ..ModelSpec::default()
    };
    let model = Model::new(spec).unwrap();
    let protocol = Protocol::n1_target_zero();
    let late = |policy: Policy| -> f64 {
        let opts = TrajectoryOptions {
            policy,
            ..options(900, 5)
        };
        (0..10)
            .map(|t| {
                let r = evolve_trajectory(&model, &protocol, &opts, &RngPolicy::new(5), t).unwrap();
                TrajectorySummary::from_record(&r, 0.2)
                    .unwrap()
                    .mean_fidelity
            })
            .sum::<f64>()
            / 10.0
    };
    let (greedy, random) = (late(Policy::Greedy), late(Policy::Random));
    assert!(greedy > random + 0.3, "greedy {greedy}, random {random}");
}

#[test]
fn strong_amplitude_damping_overrides_steering() {
    let spec = ModelSpec {
        gamma_ad: 10.0,
        gamma_pd: 0.0,
        ..ModelSpec::default()
    };
    let model = Model::new(spec).unwrap();
    let protocol = Protocol::n1_target_zero();
    let record =
        evolve_trajectory(&model, &protocol, &options(1000, 20), &RngPolicy::new(1), 0).unwrap();
    let late = TrajectorySummary::from_record(&record, 0.2).unwrap();
    // The decay target |1> is orthogonal to the steering target |0>.
    assert!(late.mean_fidelity < 0.3, "{}", late.mean_fidelity);
}
