// Copyright 2026 The qsteer Contributors
// SPDX-License-Identifier: Apache-2.0

//! `qsteer` command line.
//!
//! Settings are layered: preset, then config file, then flags.
//! Exit status: 0 ok, 1 validation error, 2 runtime failure, 3 failed
//! verification suite.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qsteer::harness::{
    self, output, run, HarnessError, NoiseMode, Preset, RunConfig, EXIT_VALIDATION, EXIT_VERIFY,
};

#[derive(Parser, Debug)]
#[command(
    name = "qsteer",
    version,
    about = "Active steering of weakly measured Andreev qubits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// One trajectory at a single error rate.
    Run(Common),
    /// Late-time fidelity and purity over the error-rate grid.
    Sweep(Common),
    /// Fast invariant and oracle suites.
    Verify(Common),
    /// Re-locate the threshold of an existing sweep CSV.
    LocateThreshold {
        csv: PathBuf,
        /// Fail unless the CSV was produced by this configuration.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum)]
        preset: Option<Preset>,
    },
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    #[arg(long)]
    seed: Option<u64>,
    /// 0 uses every core.
    #[arg(long, env = "QSTEER_WORKERS")]
    workers: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    noise: Option<NoiseMode>,
    /// n1-target-zero or n2-bell-{0+,0-,1+,1-}.
    #[arg(long)]
    protocol: Option<String>,
    /// Error rate of `run`.
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    trajectories: Option<usize>,
    #[arg(long)]
    walkers: Option<usize>,
}

fn base(preset: Option<Preset>, config: Option<&PathBuf>) -> Result<RunConfig, HarnessError> {
    let base = RunConfig::preset(preset.unwrap_or(Preset::Paper));
    match config {
        Some(path) => RunConfig::load_over(&base, path),
        None => Ok(base),
    }
}

fn resolve(c: &Common) -> Result<RunConfig, HarnessError> {
    let mut cfg = base(c.preset, c.config.as_ref())?;
    if let Some(v) = c.seed {
        cfg.master_seed = v;
    }
    if let Some(v) = c.workers {
        cfg.workers = v;
    }
    if let Some(v) = &c.out {
        cfg.out_dir = v.clone();
    }
    if let Some(v) = c.noise {
        cfg.noise = v;
    }
    if let Some(v) = &c.protocol {
        cfg.protocol = v.clone();
    }
    if let Some(v) = c.gamma {
        cfg.gamma = v;
    }
    if let Some(v) = c.steps {
        cfg.n_steps = v;
        cfg.total_time = None;
    }
    if let Some(v) = c.trajectories {
        cfg.n_trajectories = v;
    }
    if let Some(v) = c.walkers {
        cfg.n_walkers = v;
    }
    Ok(cfg)
}

fn warn(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

fn execute(command: Command) -> Result<ExitCode, HarnessError> {
    match command {
        Command::Run(c) => {
            let cfg = resolve(&c)?;
            let s = run::run_single(&cfg)?;
            warn(&s.warnings);
            println!(
                "{} steps, gamma {}: late fidelity {}, late purity {}, {} clicks -> {}",
                s.n_steps,
                s.gamma,
                s.late_mean_fidelity
                    .map_or("n/a".into(), |v| format!("{v:.4}")),
                s.late_purity.map_or("n/a".into(), |v| format!("{v:.4}")),
                s.detector_clicks,
                cfg.out_dir.display()
            );
        }
        Command::Sweep(c) => {
            let cfg = resolve(&c)?;
            if cfg.n_trajectories < 500 {
                eprintln!(
                    "note: {} trajectories per point is below publication scale",
                    cfg.n_trajectories
                );
            }
            let r = run::run_sweep(&cfg)?;
            warn(&r.warnings);
            println!("gamma            mean_F    std_F     purity");
            for p in &r.points {
                println!(
                    "{:<16.6e} {:<9.4} {:<9.4} {:.4}",
                    p.gamma, p.mean_fidelity, p.fidelity_std, p.purity
                );
            }
            match (&r.threshold, &r.threshold_error) {
                (Some(t), _) => println!(
                    "gamma_c = {:.4e} (min purity {:.4})",
                    t.gamma_c, t.min_purity
                ),
                (None, Some(e)) => println!("no threshold: {e}"),
                _ => {}
            }
        }
        Command::Verify(c) => {
            let cfg = resolve(&c)?;
            cfg.validate()?;
            let report = harness::verify(&cfg);
            print!("{report}");
            if !report.passed() {
                return Ok(ExitCode::from(EXIT_VERIFY as u8));
            }
        }
        Command::LocateThreshold {
            csv,
            config,
            preset,
        } => {
            let (hash, t) = run::locate_threshold_file(&csv)?;
            if config.is_some() || preset.is_some() {
                let cfg = base(preset, config.as_ref())?;
                output::check_hash(&csv, &hash, &cfg.hash())?;
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&t).expect("threshold serializes")
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
