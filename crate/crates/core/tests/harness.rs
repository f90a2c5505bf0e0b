// Copyright 2026 The qsteer Contributors
// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::Path;

use qsteer::diagnostics::locate_threshold;
use qsteer::harness::output::{read_csv_hash, read_sweep_csv};
use qsteer::harness::run::{build_pool, compute_sweep, run_single, run_sweep};
use qsteer::harness::{GammaGrid, HarnessError, RunConfig};

fn small(out: &Path) -> RunConfig {
    RunConfig {
        grid: GammaGrid {
            min: 1e-3,
            max: 10.0,
            count: 5,
        },
        n_steps: 300,
        n_trajectories: 6,
        n_walkers: 4,
        master_seed: 42,
        out_dir: out.to_path_buf(),
        ..RunConfig::default()
    }
}

#[test]
fn sweep_files_are_identical_for_any_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let mut bytes = Vec::new();
    for workers in [1, 2, 5] {
        let out = dir.path().join(format!("w{workers}"));
        let cfg = RunConfig {
            workers,
            ..small(&out)
        };
        run_sweep(&cfg).unwrap();
        bytes.push((
            fs::read(out.join("sweep.csv")).unwrap(),
            fs::read(out.join("sweep.json")).unwrap(),
        ));
    }
    assert!(bytes.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn sweep_csv_round_trips_and_relocates_the_same_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small(dir.path());
    let result = run_sweep(&cfg).unwrap();
    let (hash, points) = read_sweep_csv(&dir.path().join("sweep.csv")).unwrap();
    assert_eq!(hash, cfg.hash());
    assert_eq!(points, result.points);
    assert_eq!(Some(locate_threshold(&points).unwrap()), result.threshold);
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("sweep.json")).unwrap()).unwrap();
    assert_eq!(json["provenance"]["config_hash"], cfg.hash());
    assert_eq!(json["provenance"]["master_seed"], 42);
}

#[test]
fn changed_config_is_detectable_from_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small(dir.path());
    run_sweep(&cfg).unwrap();
    let found = read_csv_hash(&dir.path().join("sweep.csv")).unwrap();
    let other = RunConfig {
        n_walkers: 5,
        ..cfg.clone()
    };
    assert_eq!(found, cfg.hash());
    assert_ne!(found, other.hash());
}

#[test]
fn single_run_writes_trajectory_summary_and_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig {
        n_steps: 50,
        n_walkers: 3,
        snapshot_stride: 10,
        ..small(dir.path())
    };
    let summary = run_single(&cfg).unwrap();
    let text = fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        format!("# qsteer config_hash={}", cfg.hash())
    );
    assert_eq!(
        lines.next().unwrap(),
        "step,time,alpha,xi,eta,F_target,F_0,F_1,r_x,r_y,r_z,purity_walker_avg"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 50);
    // F_target and F_0 name the same state.
    let first: Vec<&str> = rows[0].split(',').collect();
    assert_eq!(first[5], first[6]);
    let r: Vec<f64> = first[8..11].iter().map(|s| s.parse().unwrap()).collect();
    assert!(r.iter().map(|x| x * x).sum::<f64>() <= 1.0 + 1e-12);
    let snaps = fs::read_to_string(dir.path().join("snapshots.csv")).unwrap();
    assert_eq!(snaps.lines().count(), 2 + 5);
    assert!(summary.late_mean_fidelity.is_some());
}

#[test]
fn two_qubit_csv_has_bell_columns_and_blank_bloch() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig {
        protocol: "n2-bell-1-".into(),
        coupling: 0.49,
        n_steps: 10,
        n_walkers: 2,
        ..small(dir.path())
    };
    run_single(&cfg).unwrap();
    let text = fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    let header = text.lines().nth(1).unwrap();
    assert_eq!(
        header,
        "step,time,alpha,xi,eta,F_target,F_0+,F_0-,F_1+,F_1-,r_x,r_y,r_z,purity_walker_avg"
    );
    let row: Vec<&str> = text.lines().nth(2).unwrap().split(',').collect();
    assert_eq!(&row[10..13], &["", "", ""]);
    // Target is the last Bell state.
    assert_eq!(row[5], row[9]);
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let cfg = RunConfig {
        n_steps: 5,
        ..small(&blocker.join("sub"))
    };
    assert!(matches!(run_single(&cfg), Err(HarnessError::Io { .. })));
}

#[test]
fn threshold_depends_on_gamma_over_delta_only() {
    let base = RunConfig {
        n_trajectories: 4,
        ..small(Path::new("unused"))
    };
    let s = 2.0;
    let scaled = RunConfig {
        delta: base.delta * s,
        coupling: base.coupling * s,
        steer_strength: base.steer_strength * s,
        dt: base.dt / s,
        grid: GammaGrid {
            min: base.grid.min * s,
            max: base.grid.max * s,
            count: base.grid.count,
        },
        ..base.clone()
    };
    let pool = build_pool(1).unwrap();
    let a = compute_sweep(&base, &pool).unwrap();
    let b = compute_sweep(&scaled, &pool).unwrap();
    for (p, q) in a.points.iter().zip(&b.points) {
        assert!((p.mean_fidelity - q.mean_fidelity).abs() < 1e-9);
        assert!((p.purity - q.purity).abs() < 1e-9);
    }
    let (ta, tb) = (a.threshold.unwrap(), b.threshold.unwrap());
    assert!((tb.gamma_c / s - ta.gamma_c).abs() < 1e-9 * ta.gamma_c);
}

#[test]
fn sweep_rejects_short_grids_before_running() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small(dir.path());
    cfg.grid.count = 3;
    assert!(matches!(run_sweep(&cfg), Err(HarnessError::Config(_))));
}

#[test]
fn shipped_configs_parse_and_validate() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut n = 0;
    for entry in fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let cfg = RunConfig::load_over(&RunConfig::default(), &path).unwrap();
        cfg.validate_sweep()
            .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        n += 1;
    }
    assert!(n >= 5);
    let example = RunConfig::load_over(&RunConfig::default(), &dir.join("example.json")).unwrap();
    assert_eq!(example, RunConfig::default());
}
