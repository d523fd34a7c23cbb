use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};

use convdiff_cli::config::RunConfig;
use convdiff_cli::presets::{self, PresetAction};
use convdiff_cli::{experiments, run};

/// Solver and experiment harness for 1D degenerate convection-diffusion
/// equations u_t + f(u)_x = A(u)_xx (Engquist-Osher flux, forward Euler).
#[derive(Parser)]
#[command(
    name = "convdiff",
    version,
    about = "Solver and experiment harness for 1D degenerate convection-diffusion equations \
             u_t + f(u)_x = A(u)_xx (Engquist-Osher flux, forward Euler)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one problem from a preset and/or a TOML config file.
    Run(RunArgs),
    /// Reproduce the degenerate-diffusion convergence table
    /// (N = 25..800 vs an N = 4000 reference; takes a few minutes).
    Table1(OutArg),
    /// Grid-convergence sweep for linear viscosity A(u) = ηu on a Burgers
    /// Riemann problem; the rate should not degrade as η shrinks.
    Corollary(OutArg),
    /// L1 gap between the degenerate problem and its η-regularized version
    /// over a halving η sweep at a fixed fine grid.
    EtaGap(OutArg),
    /// Recompute the invariant report from a written run directory.
    CheckInvariants { dir: PathBuf },
}

#[derive(Args)]
struct RunArgs {
    /// Preset name: constant | heat | table1 | table1-nXXX | burgers-riemann
    /// | corollary | eta-gap.
    #[arg(long)]
    preset: Option<String>,
    /// TOML run config; overrides the preset when both are given.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n_cells: Option<usize>,
    #[arg(long)]
    t_final: Option<f64>,
    /// Extra viscous regularization A ↦ A + ηu.
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    cfl_safety: Option<f64>,
    #[arg(long)]
    output_dir: Option<PathBuf>,
}

#[derive(Args)]
struct OutArg {
    #[arg(long, default_value = "convdiff-out")]
    output_dir: PathBuf,
}

fn main() -> ExitCode {
    env_logger::init();
    match dispatch() {
        Ok(invariants_ok) => {
            if invariants_ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("invariant check failed");
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

/// Returns whether all invariant checks passed (exit 2 otherwise).
fn dispatch() -> Result<bool> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => run_command(args),
        Command::Table1(out) => {
            let dir = run::resolve_output_dir(&out.output_dir).join("table1");
            let outcome = experiments::run_table1(&dir)?;
            println!("n_cells,error,rate");
            for (k, (&n, &e)) in outcome
                .report
                .grid_sizes
                .iter()
                .zip(&outcome.report.errors)
                .enumerate()
            {
                let rate = if k == 0 {
                    String::from("-")
                } else {
                    format!("{:.2}", outcome.report.rates[k - 1])
                };
                println!("{n},{e:.2},{rate}");
            }
            println!("wrote {}", outcome.csv_path.display());
            Ok(outcome.invariants.iter().all(|(_, r)| r.all_passed()))
        }
        Command::Corollary(out) => {
            let dir = run::resolve_output_dir(&out.output_dir).join("corollary");
            let outcome = experiments::run_corollary(&dir)?;
            for fit in &outcome.report.fits {
                println!(
                    "eta = {:>8.0e}: fitted rate {:.3}, constant {:.4}",
                    fit.eta, fit.rate, fit.constant
                );
            }
            println!("wrote {}", outcome.csv_path.display());
            Ok(true)
        }
        Command::EtaGap(out) => {
            let dir = run::resolve_output_dir(&out.output_dir).join("eta-gap");
            let outcome = experiments::run_eta_gap(&dir)?;
            for &(eta, gap) in &outcome.report.gaps {
                println!("eta = {eta:>8.0e}: L1 gap {gap:.6e}");
            }
            println!(
                "fitted exponent {:.3} (monotone in eta: {})",
                outcome.report.fitted_exponent, outcome.report.monotone_in_eta
            );
            println!("wrote {}", outcome.csv_path.display());
            Ok(true)
        }
        Command::CheckInvariants { dir } => {
            let report = run::check_invariants(&dir)?;
            print!("{report}");
            Ok(report.all_passed())
        }
    }
}

fn run_command(args: RunArgs) -> Result<bool> {
    // Start from the preset (if any), overlay the config file (if any),
    // then apply flag overrides.
    let mut config: Option<RunConfig> = None;
    if let Some(name) = &args.preset {
        match presets::lookup(name) {
            Some(PresetAction::Single(c)) => config = Some(*c),
            Some(PresetAction::Table1) => {
                let out = args.output_dir.unwrap_or_else(|| "convdiff-out".into());
                let dir = run::resolve_output_dir(&out).join("table1");
                let outcome = experiments::run_table1(&dir)?;
                println!("wrote {}", outcome.csv_path.display());
                return Ok(outcome.invariants.iter().all(|(_, r)| r.all_passed()));
            }
            Some(PresetAction::Corollary) => {
                let out = args.output_dir.unwrap_or_else(|| "convdiff-out".into());
                let outcome =
                    experiments::run_corollary(&run::resolve_output_dir(&out).join("corollary"))?;
                println!("wrote {}", outcome.csv_path.display());
                return Ok(true);
            }
            Some(PresetAction::EtaGap) => {
                let out = args.output_dir.unwrap_or_else(|| "convdiff-out".into());
                let outcome =
                    experiments::run_eta_gap(&run::resolve_output_dir(&out).join("eta-gap"))?;
                println!("wrote {}", outcome.csv_path.display());
                return Ok(true);
            }
            None => bail!("unknown preset {name:?}"),
        }
    }
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path)?;
        config = Some(RunConfig::from_toml(&text)?);
    }
    let Some(mut config) = config else {
        bail!("run needs --preset and/or --config");
    };

    if let Some(n) = args.n_cells {
        config.n_cells = n;
    }
    if let Some(t) = args.t_final {
        config.t_final = t;
        // Stale snapshot lists would fall outside the new horizon.
        config.snapshot_times = Vec::new();
    }
    if let Some(eta) = args.eta {
        config.eta = eta;
    }
    if let Some(s) = args.cfl_safety {
        config.cfl_safety = s;
    }
    if let Some(dir) = args.output_dir {
        config.output_dir = dir;
    }

    let outcome = run::run_single(&config)?;
    print!("{}", outcome.report);
    println!("wrote {}", outcome.out_dir.display());
    Ok(outcome.report.all_passed())
}
