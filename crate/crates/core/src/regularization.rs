//! Viscous regularization A ↦ A^η = A + ηu and the experiments probing
//! η-dependence: grid-convergence rates under A(u) = ηu (which should be
//! η-independent) and the L1 gap between a degenerate problem and its
//! regularized counterpart (bounded by C·√η).

use alloc::vec::Vec;

use crate::analysis::{cone_l1_error, fit_loglog, l1_norm, ConeSpec};
use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::math;
use crate::problem::{DiffusionSpec, Problem};
use crate::time::{integrate, TimeStepper, Trajectory};

/// A^η(u) = A(u) + η·u, (A^η)' = A' + η; the spec's `eta` field accumulates,
/// so regularizing twice by η₁ and η₂ equals regularizing once by η₁ + η₂.
pub fn regularize_diffusion(diffusion: &DiffusionSpec, eta: f64) -> Result<DiffusionSpec> {
    diffusion.regularized(eta)
}

/// Sweep definition for [`viscous_rate_experiment`].
#[derive(Debug, Clone)]
pub struct ViscousRateConfig {
    /// Viscosity values, strictly decreasing and positive.
    pub etas: Vec<f64>,
    /// Grid resolutions, strictly doubling.
    pub resolutions: Vec<usize>,
    /// Self-reference resolution; a multiple of the finest sweep resolution.
    pub reference_resolution: usize,
    /// Cone over which errors are measured (M should exceed Lip(f)).
    pub cone: ConeSpec,
    pub cfl_safety: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViscousRatePoint {
    pub eta: f64,
    pub n_cells: usize,
    pub cone_error: f64,
}

/// Least-squares rate of the cone error in dx, and the bound constant of the
/// square-root law: the smallest C with error ≤ C·√dx over the sweep,
/// i.e. C = max_N error/√dx.  Comparable across η when the law is
/// η-independent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViscousRateFit {
    pub eta: f64,
    pub rate: f64,
    pub constant: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ViscousRateReport {
    pub points: Vec<ViscousRatePoint>,
    pub fits: Vec<ViscousRateFit>,
}

impl ViscousRateConfig {
    pub fn validate(&self) -> Result<()> {
        validate_etas(&self.etas)?;
        validate_resolutions(&self.resolutions, self.reference_resolution)
    }
}

fn validate_etas(etas: &[f64]) -> Result<()> {
    if etas.is_empty() {
        return Err(Error::TooFewEntries {
            what: "eta sweep",
            needed: 1,
            got: 0,
        });
    }
    let mut prev = f64::INFINITY;
    for &eta in etas {
        if !(eta > 0.0) || eta >= prev {
            return Err(Error::BadEtaSequence { eta });
        }
        prev = eta;
    }
    Ok(())
}

fn validate_resolutions(resolutions: &[usize], reference: usize) -> Result<()> {
    if resolutions.is_empty() {
        return Err(Error::TooFewEntries {
            what: "resolution sweep",
            needed: 1,
            got: 0,
        });
    }
    for w in resolutions.windows(2) {
        if w[1] != 2 * w[0] {
            return Err(Error::NotDoubling {
                prev: w[0],
                next: w[1],
            });
        }
    }
    let finest = *resolutions.last().unwrap();
    if reference <= finest || !reference.is_multiple_of(finest) {
        return Err(Error::GridMismatch {
            reason: "reference resolution must be a proper multiple of the finest sweep grid",
        });
    }
    Ok(())
}

fn solve_at(problem: &Problem, cfl_safety: f64) -> Result<Trajectory> {
    let stepper = TimeStepper::for_problem(problem)?.with_safety(cfl_safety)?;
    integrate(problem, &stepper, &[problem.t_final])
}

/// One η of the viscous-rate sweep: runs A(u) = ηu across the resolutions
/// against a finer self-reference and fits the cone-error decay in dx.
/// Sweep points are independent, so callers may run etas concurrently.
pub fn viscous_rate_single_eta(
    base: &Problem,
    eta: f64,
    cfg: &ViscousRateConfig,
) -> Result<(Vec<ViscousRatePoint>, ViscousRateFit)> {
    if !base.diffusion.is_identically_zero() {
        return Err(Error::DiffusionNotZero);
    }
    let with_eta = base.with_diffusion(base.diffusion.regularized(eta)?);
    let reference = solve_at(
        &with_eta.with_resolution(cfg.reference_resolution)?,
        cfg.cfl_safety,
    )?;
    let ref_snap = reference.last().expect("one snapshot was requested");

    let mut points = Vec::with_capacity(cfg.resolutions.len());
    let mut dxs = Vec::with_capacity(cfg.resolutions.len());
    for &n in &cfg.resolutions {
        let problem = with_eta.with_resolution(n)?;
        let traj = solve_at(&problem, cfg.cfl_safety)?;
        let snap = traj.last().expect("one snapshot was requested");
        let err = cone_l1_error(snap, ref_snap, base.t_final, &cfg.cone)?;
        points.push(ViscousRatePoint {
            eta,
            n_cells: n,
            cone_error: err,
        });
        dxs.push(problem.grid.dx());
    }

    let errors: Vec<f64> = points.iter().map(|p| p.cone_error).collect();
    let (rate, _) = fit_loglog(&dxs, &errors)?;
    let constant = points
        .iter()
        .zip(&dxs)
        .map(|(p, &dx)| p.cone_error / math::sqrt(dx))
        .fold(0.0f64, f64::max);
    Ok((
        points,
        ViscousRateFit {
            eta,
            rate,
            constant,
        },
    ))
}

/// Runs the scheme on u_t + f(u)_x = η·u_xx for every η and resolution in
/// the sweep, measuring cone-restricted L1 errors against a fine
/// self-reference.  The square-root law predicts rate ≥ 1/2 with a bound
/// constant that does not depend on η.
pub fn viscous_rate_experiment(
    base: &Problem,
    cfg: &ViscousRateConfig,
) -> Result<ViscousRateReport> {
    cfg.validate()?;
    let mut points = Vec::new();
    let mut fits = Vec::new();
    for &eta in &cfg.etas {
        let (p, f) = viscous_rate_single_eta(base, eta, cfg)?;
        points.extend(p);
        fits.push(f);
    }
    Ok(ViscousRateReport { points, fits })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EtaGapReport {
    /// (η, ‖u - u^η‖_L1 at t_final) in the order given.
    pub gaps: Vec<(f64, f64)>,
    /// Least-squares exponent of the gap in η.
    pub fitted_exponent: f64,
    /// Whether the gaps are nondecreasing in η (flagged, not asserted:
    /// the √η estimate is an upper bound, not a monotonicity claim).
    pub monotone_in_eta: bool,
}

/// L1 gap at t_final between the solution of `problem` and the solution with
/// diffusion regularized by one η, on the problem's own (fixed, fine) grid.
pub fn eta_gap_single(problem: &Problem, base_final: &GridFunction, eta: f64) -> Result<f64> {
    let reg = problem.with_diffusion(problem.diffusion.regularized(eta)?);
    let traj = solve_at(&reg, 0.5)?;
    let snap = traj.last().expect("one snapshot was requested");
    let diff: Vec<f64> = snap
        .values()
        .iter()
        .zip(base_final.values())
        .map(|(a, b)| a - b)
        .collect();
    let d = GridFunction::new(problem.grid, diff, problem.t_final)?;
    Ok(l1_norm(&d))
}

/// Measures ‖u - u^η‖_L1(t_final) against η at a fixed fine resolution.
/// Both solves share the grid and scheme, so the measured gap carries an
/// O(dx) contamination common to all η; pick the grid fine enough that the
/// smallest gap stays above it.
pub fn eta_gap_experiment(problem: &Problem, etas: &[f64]) -> Result<EtaGapReport> {
    validate_etas(etas)?;
    let base = solve_at(problem, 0.5)?;
    let base_final = base.last().expect("one snapshot was requested");

    let mut gaps = Vec::with_capacity(etas.len());
    for &eta in etas {
        gaps.push((eta, eta_gap_single(problem, base_final, eta)?));
    }

    let xs: Vec<f64> = gaps.iter().map(|g| g.0).collect();
    let ys: Vec<f64> = gaps.iter().map(|g| g.1).collect();
    let (fitted_exponent, _) = fit_loglog(&xs, &ys)?;
    // etas are strictly decreasing, so monotone-in-η means gaps decrease too.
    let monotone_in_eta = gaps.windows(2).all(|w| w[1].1 <= w[0].1);
    Ok(EtaGapReport {
        gaps,
        fitted_exponent,
        monotone_in_eta,
    })
}
