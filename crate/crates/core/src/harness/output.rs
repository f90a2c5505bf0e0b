// Copyright 2026 The qsteer Contributors
// SPDX-License-Identifier: Apache-2.0

//! CSV and JSON artifacts.
//!
//! Every CSV starts with one `# qsteer config_hash=<hex>` comment line
//! followed by a header row. Floats are written with 17 significant digits,
//! which round-trips every `f64` exactly.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::diagnostics::{SweepPoint, TrajectoryRecord};

use super::HarnessError;

const HASH_PREFIX: &str = "# qsteer config_hash=";

/// 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> HarnessError {
    HarnessError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

fn csv_err(path: &Path, e: impl std::fmt::Display) -> HarnessError {
    HarnessError::Csv {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

pub fn ensure_dir(dir: &Path) -> Result<(), HarnessError> {
    std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))
}

fn open_csv(path: &Path, hash: &str) -> Result<csv::Writer<BufWriter<File>>, HarnessError> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(file);
    writeln!(w, "{HASH_PREFIX}{hash}").map_err(|e| io_err(path, e))?;
    Ok(csv::Writer::from_writer(w))
}

fn finish(path: &Path, w: csv::Writer<BufWriter<File>>) -> Result<(), HarnessError> {
    w.into_inner()
        .map_err(|e| io_err(path, e))?
        .flush()
        .map_err(|e| io_err(path, e))
}

/// Column names of the per-step trajectory CSV.
pub fn trajectory_header(reference_labels: &[String]) -> Vec<String> {
    let mut h: Vec<String> = ["step", "time", "alpha", "xi", "eta", "F_target"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    h.extend(reference_labels.iter().cloned());
    h.extend(
        ["r_x", "r_y", "r_z", "purity_walker_avg"]
            .iter()
            .map(|s| s.to_string()),
    );
    h
}

/// Bloch columns are left empty for two qubits.
pub fn write_trajectory_csv(
    path: &Path,
    hash: &str,
    record: &TrajectoryRecord,
    reference_labels: &[String],
) -> Result<(), HarnessError> {
    let mut w = open_csv(path, hash)?;
    w.write_record(trajectory_header(reference_labels))
        .map_err(|e| csv_err(path, e))?;
    for s in &record.steps {
        let mut row = vec![
            s.step.to_string(),
            fmt_f64(s.step as f64 * record.dt),
            s.choice.index().to_string(),
            s.outcome.xi.to_string(),
            s.outcome.eta.to_string(),
            fmt_f64(s.fidelity),
        ];
        row.extend(s.references.iter().map(|&f| fmt_f64(f)));
        match s.bloch {
            Some(r) => row.extend(r.iter().map(|&x| fmt_f64(x))),
            None => row.extend(std::iter::repeat_n(String::new(), 3)),
        }
        row.push(fmt_f64(s.purity));
        w.write_record(&row).map_err(|e| csv_err(path, e))?;
    }
    finish(path, w)
}

/// Row-major `Re`/`Im` parts of every stored `rho_bar`.
pub fn write_snapshots_csv(
    path: &Path,
    hash: &str,
    record: &TrajectoryRecord,
) -> Result<(), HarnessError> {
    let dim = 1usize << record.n_qubits;
    let mut w = open_csv(path, hash)?;
    let mut header = vec!["step".to_string()];
    for i in 0..dim {
        for j in 0..dim {
            header.push(format!("re_{i}{j}"));
            header.push(format!("im_{i}{j}"));
        }
    }
    w.write_record(&header).map_err(|e| csv_err(path, e))?;
    for (step, rho) in &record.snapshots {
        let mut row = vec![step.to_string()];
        for i in 0..dim {
            for j in 0..dim {
                let z = rho.get(i, j);
                row.push(fmt_f64(z.re));
                row.push(fmt_f64(z.im));
            }
        }
        w.write_record(&row).map_err(|e| csv_err(path, e))?;
    }
    finish(path, w)
}

pub const SWEEP_HEADER: [&str; 6] = ["gamma", "mean_F", "var_F", "std_F", "purity", "n_traj"];

pub fn write_sweep_csv(path: &Path, hash: &str, points: &[SweepPoint]) -> Result<(), HarnessError> {
    let mut w = open_csv(path, hash)?;
    w.write_record(SWEEP_HEADER).map_err(|e| csv_err(path, e))?;
    for p in points {
        w.write_record([
            fmt_f64(p.gamma),
            fmt_f64(p.mean_fidelity),
            fmt_f64(p.fidelity_variance),
            fmt_f64(p.fidelity_std),
            fmt_f64(p.purity),
            p.n_trajectories.to_string(),
        ])
        .map_err(|e| csv_err(path, e))?;
    }
    finish(path, w)
}

/// Reads a sweep CSV and the hash it embeds.
pub fn read_sweep_csv(path: &Path) -> Result<(String, Vec<SweepPoint>), HarnessError> {
    let hash = read_csv_hash(path)?;
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(BufReader::new(file));
    let header = r.headers().map_err(|e| csv_err(path, e))?.clone();
    if header.iter().ne(SWEEP_HEADER.iter().copied()) {
        return Err(csv_err(path, format!("unexpected header {header:?}")));
    }
    let mut points = Vec::new();
    for row in r.records() {
        let row = row.map_err(|e| csv_err(path, e))?;
        let f = |i: usize| -> Result<f64, HarnessError> {
            row[i]
                .parse()
                .map_err(|e| csv_err(path, format!("column {}: {e}", SWEEP_HEADER[i])))
        };
        points.push(SweepPoint {
            gamma: f(0)?,
            mean_fidelity: f(1)?,
            fidelity_variance: f(2)?,
            fidelity_std: f(3)?,
            purity: f(4)?,
            n_trajectories: row[5]
                .parse()
                .map_err(|e| csv_err(path, format!("column n_traj: {e}")))?,
        });
    }
    Ok((hash, points))
}

/// The hash on the first line of a CSV written by this module.
pub fn read_csv_hash(path: &Path) -> Result<String, HarnessError> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    let mut line = String::new();
    BufReader::new(file)
        .read_line(&mut line)
        .map_err(|e| io_err(path, e))?;
    line.trim_end()
        .strip_prefix(HASH_PREFIX)
        .map(str::to_string)
        .ok_or_else(|| csv_err(path, "missing config hash line"))
}

/// Fails when an artifact was produced by a different configuration.
pub fn check_hash(path: &Path, found: &str, expected: &str) -> Result<(), HarnessError> {
    if found != expected {
        return Err(HarnessError::HashMismatch {
            path: path.to_path_buf(),
            expected: expected.to_string(),
            found: found.to_string(),
        });
    }
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), HarnessError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| io_err(path, e))?;
    std::fs::write(path, text + "\n").map_err(|e| io_err(path, e))
}

/// `dir/name`.
pub fn artifact(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [
            0.1,
            1.0 / 3.0,
            std::f64::consts::PI,
            1e-300,
            6.02214076e23,
            -2.5e-17,
        ] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
    }

    #[test]
    fn sweep_csv_round_trips_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        let points: Vec<SweepPoint> = (0..5)
            .map(|i| SweepPoint {
                gamma: 10f64.powf(i as f64 / 3.0 - 3.0),
                mean_fidelity: 1.0 / (i as f64 + 1.1),
                fidelity_variance: 1e-3 / 7.0,
                fidelity_std: (1e-3f64 / 7.0).sqrt(),
                purity: 0.5 + 0.1 / (i as f64 + 3.0),
                n_trajectories: 50,
            })
            .collect();
        write_sweep_csv(&path, "abc", &points).unwrap();
        let (hash, back) = read_sweep_csv(&path).unwrap();
        assert_eq!(hash, "abc");
        assert_eq!(back, points);
        assert!(check_hash(&path, &hash, "abd").is_err());
    }

    #[test]
    fn unwritable_path_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("missing").join("x.csv");
        assert!(matches!(
            write_sweep_csv(&path, "h", &[]),
            Err(HarnessError::Io { .. })
        ));
    }
}
