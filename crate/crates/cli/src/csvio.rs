//! Plain-text CSV readers and writers.  Floats are written with 17
//! significant digits, which round-trips 64-bit values exactly; iteration
//! order is fixed, so identical inputs give byte-identical files.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};

use convdiff_core::{
    ErrorReport, EtaGapReport, Grid1D, GridFunction, LedgerEntry, ViscousRateReport,
};

/// 17 significant digits: lossless for f64.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).with_context(|| {
        format!("cannot create {}", path.display())
    })?))
}

fn parse_f64(field: &str, path: &Path, line: usize) -> Result<f64> {
    field
        .trim()
        .parse()
        .with_context(|| format!("{}:{line}: bad float {field:?}", path.display()))
}

/// Header `x,u`, one row per cell center.
pub fn write_snapshot(path: &Path, snap: &GridFunction) -> Result<()> {
    let mut out = create(path)?;
    writeln!(out, "x,u")?;
    let grid = snap.grid();
    for (j, &v) in snap.values().iter().enumerate() {
        writeln!(out, "{},{}", fmt_f64(grid.cell_center(j)), fmt_f64(v))?;
    }
    Ok(())
}

/// Reads a snapshot written by [`write_snapshot`] back onto `grid`.
pub fn read_snapshot(path: &Path, grid: Grid1D, time: f64) -> Result<GridFunction> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let mut values = Vec::with_capacity(grid.n_cells());
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if i == 0 {
            if line.trim() != "x,u" {
                bail!("{}: not a snapshot file", path.display());
            }
            continue;
        }
        let Some((_, u)) = line.split_once(',') else {
            bail!("{}:{}: expected two columns", path.display(), i + 1);
        };
        values.push(parse_f64(u, path, i + 1)?);
    }
    Ok(GridFunction::new(grid, values, time)?)
}

pub fn write_ledger(path: &Path, ledger: &[LedgerEntry]) -> Result<()> {
    let mut out = create(path)?;
    writeln!(out, "t,dt,umin,umax,tv,mass")?;
    for e in ledger {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt_f64(e.t),
            fmt_f64(e.dt),
            fmt_f64(e.umin),
            fmt_f64(e.umax),
            fmt_f64(e.tv),
            fmt_f64(e.mass)
        )?;
    }
    Ok(())
}

pub fn read_ledger(path: &Path) -> Result<Vec<LedgerEntry>> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let mut ledger = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if i == 0 {
            if line.trim() != "t,dt,umin,umax,tv,mass" {
                bail!("{}: not a ledger file", path.display());
            }
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            bail!("{}:{}: expected six columns", path.display(), i + 1);
        }
        let mut parsed = [0.0; 6];
        for (k, f) in fields.iter().enumerate() {
            parsed[k] = parse_f64(f, path, i + 1)?;
        }
        ledger.push(LedgerEntry {
            t: parsed[0],
            dt: parsed[1],
            umin: parsed[2],
            umax: parsed[3],
            tv: parsed[4],
            mass: parsed[5],
        });
    }
    Ok(ledger)
}

/// Convergence table: `n_cells,error,rate` with the rate attached to the
/// refinement that produced the row (blank on the coarsest row).
pub fn write_error_report(path: &Path, report: &ErrorReport) -> Result<()> {
    let mut out = create(path)?;
    writeln!(out, "n_cells,error,rate")?;
    for (k, (&n, &e)) in report.grid_sizes.iter().zip(&report.errors).enumerate() {
        if k == 0 {
            writeln!(out, "{n},{},", fmt_f64(e))?;
        } else {
            writeln!(out, "{n},{},{}", fmt_f64(e), fmt_f64(report.rates[k - 1]))?;
        }
    }
    Ok(())
}

/// One row per (η, N) plus the per-η fit repeated on each of its rows.
pub fn write_viscous_rates(path: &Path, report: &ViscousRateReport) -> Result<()> {
    let mut out = create(path)?;
    writeln!(out, "eta,n_cells,cone_error,fitted_rate,constant")?;
    for p in &report.points {
        let fit = report
            .fits
            .iter()
            .find(|f| f.eta == p.eta)
            .context("missing fit for eta")?;
        writeln!(
            out,
            "{},{},{},{},{}",
            fmt_f64(p.eta),
            p.n_cells,
            fmt_f64(p.cone_error),
            fmt_f64(fit.rate),
            fmt_f64(fit.constant)
        )?;
    }
    Ok(())
}

pub fn write_eta_gaps(path: &Path, report: &EtaGapReport) -> Result<()> {
    let mut out = create(path)?;
    writeln!(out, "eta,l1_gap,fitted_exponent")?;
    for &(eta, gap) in &report.gaps {
        writeln!(
            out,
            "{},{},{}",
            fmt_f64(eta),
            fmt_f64(gap),
            fmt_f64(report.fitted_exponent)
        )?;
    }
    Ok(())
}
