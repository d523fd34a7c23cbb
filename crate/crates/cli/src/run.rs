//! Single-run driver: solve, persist snapshots/ledger/config/report, and the
//! reverse path that re-audits a written run directory.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

use convdiff_core::{integrate, invariant_report, InvariantReport, Trajectory};

use crate::config::RunConfig;
use crate::csvio;

/// Environment variable naming the root under which relative output
/// directories are placed.
pub const OUTPUT_ROOT_ENV: &str = "CONVDIFF_OUTPUT_ROOT";

/// Relative output paths land under `$CONVDIFF_OUTPUT_ROOT` when it is set.
pub fn resolve_output_dir(dir: &Path) -> PathBuf {
    if dir.is_absolute() {
        return dir.to_path_buf();
    }
    match std::env::var_os(OUTPUT_ROOT_ENV) {
        Some(root) => PathBuf::from(root).join(dir),
        None => dir.to_path_buf(),
    }
}

fn snapshot_filename(index: usize) -> String {
    format!("snapshot_{index:03}.csv")
}

#[derive(Debug)]
pub struct SingleOutcome {
    pub out_dir: PathBuf,
    pub trajectory: Trajectory,
    pub report: InvariantReport,
}

/// Solves the configured problem and writes, under the output directory:
/// the resolved `config.toml`, one `snapshot_NNN.csv` per requested time
/// (header `x,u`), `ledger.csv` and `invariants.txt`.
pub fn run_single(config: &RunConfig) -> Result<SingleOutcome> {
    config.validate()?;
    let problem = config.problem()?;
    let stepper = config.stepper(&problem)?;
    let times = config.effective_snapshot_times();
    let trajectory = integrate(&problem, &stepper, &times)?;
    let report = invariant_report(&trajectory)?;

    let out_dir = resolve_output_dir(&config.output_dir);
    std::fs::create_dir_all(&out_dir)
        .with_context(|| format!("cannot create {}", out_dir.display()))?;

    std::fs::write(out_dir.join("config.toml"), config.to_toml()?)?;
    for (i, snap) in trajectory.snapshots.iter().enumerate() {
        csvio::write_snapshot(&out_dir.join(snapshot_filename(i)), snap)?;
    }
    csvio::write_ledger(&out_dir.join("ledger.csv"), &trajectory.ledger)?;
    let passed = if report.all_passed() { "pass" } else { "FAIL" };
    std::fs::write(
        out_dir.join("invariants.txt"),
        format!("{report}overall                  {passed}\n"),
    )?;

    Ok(SingleOutcome {
        out_dir,
        trajectory,
        report,
    })
}

/// Reloads a directory written by [`run_single`] and recomputes the
/// invariant report from the persisted snapshots and ledger.
pub fn check_invariants(dir: &Path) -> Result<InvariantReport> {
    let config_text = std::fs::read_to_string(dir.join("config.toml"))
        .with_context(|| format!("{} is not a run directory", dir.display()))?;
    let config = RunConfig::from_toml(&config_text)?;
    let problem = config.problem()?;

    let times = config.effective_snapshot_times();
    let mut snapshots = Vec::with_capacity(times.len());
    for (i, &t) in times.iter().enumerate() {
        let path = dir.join(snapshot_filename(i));
        snapshots.push(csvio::read_snapshot(&path, problem.grid, t)?);
    }
    let ledger = csvio::read_ledger(&dir.join("ledger.csv"))?;

    let trajectory = Trajectory {
        problem,
        snapshots,
        ledger,
    };
    Ok(invariant_report(&trajectory)?)
}
