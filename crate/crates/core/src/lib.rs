//! Semi-discrete finite-difference solver for one-dimensional degenerate
//! convection-diffusion equations
//!
//! ```text
//! u_t + f(u)_x = A(u)_xx,      A' >= 0 (may vanish on intervals),
//! ```
//!
//! discretized with the Engquist-Osher monotone flux in space,
//!
//! ```text
//! d/dt u_j + D⁻F_{j+1/2} = D⁻D⁺A(u_j),    F(u,v) = f⁺(u) + f⁻(v),
//! ```
//!
//! and forward Euler in time under the explicit CFL restriction.  On top of
//! the solver sit the analysis tools (norms, conservative grid restriction,
//! cone-restricted L1 errors, convergence tables, Kruzkov entropy residuals,
//! invariant audits) and the viscous-regularization experiments A ↦ A + ηu.
//!
//! The crate is `no_std` (alloc only).  File formats, presets and the command
//! line live in the companion crate `convdiff-cli`.

#![no_std]
// Negated float comparisons (`!(x > 0.0)`) are deliberate: they reject
// NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod eo;
pub mod error;
pub mod grid;
mod math;
pub mod problem;
pub mod regularization;
pub mod scheme;
pub mod time;

pub use analysis::{
    cone_l1_error, convergence_table, entropy_residual, fit_loglog, invariant_report,
    kruzkov_lattice, l1_norm, linf_norm, percent_relative_l1_error, restrict_to_coarse,
    staircase_l1_distance, total_variation, ConeSpec, ErrorReport, InvariantCheck, InvariantReport,
    NormKind,
};
pub use eo::{EoFlux, SplitMode};
pub use error::{Error, Result};
pub use grid::{cell_average_init, Ghosted, Grid1D, GridFunction};
pub use problem::{BoundaryCondition, DiffusionSpec, FluxSpec, Problem, RealFn};
pub use regularization::{
    eta_gap_experiment, eta_gap_single, regularize_diffusion, viscous_rate_experiment,
    viscous_rate_single_eta, EtaGapReport, ViscousRateConfig, ViscousRateFit, ViscousRatePoint,
    ViscousRateReport,
};
pub use scheme::{apply_bc, SchemeState};
pub use time::{integrate, LedgerEntry, TimeStepper, Trajectory};
