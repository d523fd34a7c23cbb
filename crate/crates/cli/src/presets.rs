//! Named presets so the reproduction commands are one-liners.

use std::f64::consts::{FRAC_PI_2, PI};
use std::path::PathBuf;

use crate::config::{BcKind, ConeConfig, DiffusionKind, FluxKind, InitialDataKind, RunConfig};

/// What a preset name resolves to: either a single run or one of the
/// orchestrated experiments.
#[derive(Debug, Clone, PartialEq)]
pub enum PresetAction {
    Single(Box<RunConfig>),
    Table1,
    Corollary,
    EtaGap,
}

/// Registered presets: `constant`, `heat`, `table1-nXXX`, `table1`,
/// `burgers-riemann`, `corollary`, `eta-gap`.
pub fn lookup(name: &str) -> Option<PresetAction> {
    match name {
        "constant" => Some(PresetAction::Single(Box::new(constant_config()))),
        "heat" => Some(PresetAction::Single(Box::new(heat_config(128)))),
        "burgers-riemann" => Some(PresetAction::Single(Box::new(burgers_riemann_config(
            200, 0.0,
        )))),
        "table1" => Some(PresetAction::Table1),
        "corollary" => Some(PresetAction::Corollary),
        "eta-gap" => Some(PresetAction::EtaGap),
        _ => {
            let n = name.strip_prefix("table1-n")?.parse().ok()?;
            Some(PresetAction::Single(Box::new(section4_config(n))))
        }
    }
}

/// Constant data: every operator leaves it alone.
pub fn constant_config() -> RunConfig {
    RunConfig {
        flux: FluxKind::Burgers,
        diffusion: DiffusionKind::Linear { coeff: 0.1 },
        eta: 0.0,
        bc: BcKind::Extrapolate,
        x_left: 0.0,
        x_right: 1.0,
        u0: InitialDataKind::Constant { value: 1.0 },
        n_cells: 50,
        t_final: 0.1,
        snapshot_times: vec![0.0, 0.1],
        cfl_safety: 0.5,
        cone: None,
        reference_resolution: None,
        output_dir: PathBuf::from("convdiff-out/constant"),
    }
}

/// Periodic heat equation with u0 = sin x; exact solution e^{-t}·sin x.
pub fn heat_config(n_cells: usize) -> RunConfig {
    RunConfig {
        flux: FluxKind::Zero,
        diffusion: DiffusionKind::Linear { coeff: 1.0 },
        eta: 0.0,
        bc: BcKind::Periodic,
        x_left: 0.0,
        x_right: 2.0 * PI,
        u0: InitialDataKind::Sine,
        n_cells,
        t_final: 0.5,
        snapshot_times: vec![0.0, 0.5],
        cfl_safety: 0.5,
        cone: None,
        reference_resolution: None,
        output_dir: PathBuf::from("convdiff-out/heat"),
    }
}

/// Degenerate diffusion u_t = (max(u,0)²/2)_xx with u0 = sin x on
/// (-π/2, π), zero diffusive flux at the walls: the convergence-table
/// problem.  A left-moving u = 0 interface forms from smooth data.
pub fn section4_config(n_cells: usize) -> RunConfig {
    RunConfig {
        flux: FluxKind::Zero,
        diffusion: DiffusionKind::SquaredPositivePart,
        eta: 0.0,
        bc: BcKind::ZeroDiffusiveFlux,
        x_left: -FRAC_PI_2,
        x_right: PI,
        u0: InitialDataKind::Sine,
        n_cells,
        t_final: 1.0,
        snapshot_times: vec![0.0, 1.0],
        cfl_safety: 0.5,
        cone: None,
        reference_resolution: Some(4000),
        output_dir: PathBuf::from(format!("convdiff-out/table1-n{n_cells}")),
    }
}

/// Riemann data 1 ↦ 0 for Burgers, optionally with linear viscosity ηu;
/// the inviscid entropy solution is a shock travelling at speed 1/2.
pub fn burgers_riemann_config(n_cells: usize, eta: f64) -> RunConfig {
    RunConfig {
        flux: FluxKind::Burgers,
        diffusion: DiffusionKind::Zero,
        eta,
        bc: BcKind::Extrapolate,
        x_left: -2.0,
        x_right: 2.0,
        u0: InitialDataKind::RiemannStep {
            left: 1.0,
            right: 0.0,
            center: 0.0,
        },
        n_cells,
        t_final: 0.5,
        snapshot_times: vec![0.0, 0.5],
        cfl_safety: 0.5,
        cone: Some(ConeConfig { l: 1.0, m: 1.1 }),
        reference_resolution: None,
        output_dir: PathBuf::from("convdiff-out/burgers-riemann"),
    }
}
