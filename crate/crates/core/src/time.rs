//! Forward Euler integration of the semi-discrete system under the explicit
//! CFL contract dt ≤ safety·min(dx/max|f'|, dx²/(2·max A')), with exact
//! landing on requested snapshot times and a per-step invariant ledger.

use alloc::vec::Vec;

use crate::eo::EoFlux;
use crate::error::{Error, Result};
use crate::grid::{cell_average_init, GridFunction};
use crate::problem::Problem;
use crate::scheme::SchemeState;

/// Number of quadrature nodes per cell when projecting initial data; exceeds
/// the scheme's first-order accuracy by a wide margin.
pub const INIT_QUAD_POINTS: usize = 4;

/// Time-step policy.  The derivative bounds are taken over the range of the
/// initial data; the L∞ maximum principle of the monotone scheme keeps all
/// later values inside that range, so they never need rescanning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeStepper {
    pub cfl_safety: f64,
    /// Bound on |f'| over the data range; 0 disables the convective limit.
    pub max_fprime: f64,
    /// Bound on A' over the data range; 0 disables the diffusive limit.
    pub max_aprime: f64,
    /// Optional override; rejected by [`TimeStepper::cfl_dt`] if it exceeds
    /// the CFL bound.
    pub fixed_dt: Option<f64>,
}

impl TimeStepper {
    pub fn new(max_fprime: f64, max_aprime: f64) -> Self {
        Self {
            cfl_safety: 0.5,
            max_fprime,
            max_aprime,
            fixed_dt: None,
        }
    }

    /// Samples the initial data range and the derivative bounds of f and A
    /// over it.  A user Lipschitz hint on the flux takes precedence.
    pub fn for_problem(problem: &Problem) -> Result<Self> {
        let (umin, umax) = sample_initial_range(problem)?;
        let max_fprime = if problem.flux.is_identically_zero() {
            0.0
        } else if let Some(hint) = problem.flux.lipschitz_hint() {
            hint
        } else {
            sample_max(|u| problem.flux.f_prime(u).abs(), umin, umax)
        };
        let max_aprime = if problem.diffusion.is_identically_zero() {
            0.0
        } else {
            sample_max(|u| problem.diffusion.a_prime(u), umin, umax).max(0.0)
        };
        Ok(Self::new(max_fprime, max_aprime))
    }

    pub fn with_safety(mut self, cfl_safety: f64) -> Result<Self> {
        if !(cfl_safety > 0.0 && cfl_safety <= 1.0) {
            return Err(Error::InvalidSafety { safety: cfl_safety });
        }
        self.cfl_safety = cfl_safety;
        Ok(self)
    }

    pub fn with_fixed_dt(mut self, dt: f64) -> Self {
        self.fixed_dt = Some(dt);
        self
    }

    /// The effective step: safety·min(dx/max|f'|, dx²/(2·max A')), each term
    /// dropped when its bound is zero.  A fixed dt within the bound wins;
    /// one beyond it is rejected.
    pub fn cfl_dt(&self, dx: f64) -> Result<f64> {
        let mut bound = f64::INFINITY;
        if self.max_fprime > 0.0 {
            bound = bound.min(dx / self.max_fprime);
        }
        if self.max_aprime > 0.0 {
            bound = bound.min(dx * dx / (2.0 * self.max_aprime));
        }
        if bound.is_finite() {
            let bound = self.cfl_safety * bound;
            match self.fixed_dt {
                Some(dt) if dt <= bound * (1.0 + 1e-12) => Ok(dt),
                Some(dt) => Err(Error::FixedDtTooLarge {
                    fixed_dt: dt,
                    bound,
                }),
                None => Ok(bound),
            }
        } else {
            self.fixed_dt.ok_or(Error::NoTimeScale)
        }
    }
}

fn sample_initial_range(problem: &Problem) -> Result<(f64, f64)> {
    const SAMPLES: usize = 4097;
    let (xl, xr) = (problem.grid.x_left(), problem.grid.x_right());
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for k in 0..SAMPLES {
        let x = xl + (xr - xl) * k as f64 / (SAMPLES - 1) as f64;
        let v = (problem.u0)(x);
        if !v.is_finite() {
            return Err(Error::NonFiniteValue {
                what: "initial datum sample",
                cell: k,
            });
        }
        lo = lo.min(v);
        hi = hi.max(v);
    }
    Ok((lo, hi))
}

fn sample_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    const SAMPLES: usize = 2049;
    let mut m = f64::NEG_INFINITY;
    for k in 0..SAMPLES {
        let u = lo + (hi - lo) * k as f64 / (SAMPLES - 1) as f64;
        m = m.max(f(u));
    }
    m
}

/// One row of the per-step ledger: the state summary after the step that
/// ended at time `t` (the first row records the initial data with dt = 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LedgerEntry {
    pub t: f64,
    pub dt: f64,
    pub umin: f64,
    pub umax: f64,
    pub tv: f64,
    pub mass: f64,
}

impl LedgerEntry {
    pub fn linf(&self) -> f64 {
        self.umin.abs().max(self.umax.abs())
    }
}

/// Snapshots at the requested times plus the per-step ledger, with the
/// problem they were produced from (cheap to clone; function handles are
/// shared).
#[derive(Clone)]
pub struct Trajectory {
    pub problem: Problem,
    pub snapshots: Vec<GridFunction>,
    pub ledger: Vec<LedgerEntry>,
}

impl core::fmt::Debug for Trajectory {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Trajectory")
            .field("problem", &self.problem)
            .field("snapshots", &self.snapshots.len())
            .field("steps", &self.ledger.len().saturating_sub(1))
            .finish()
    }
}

impl Trajectory {
    pub fn initial(&self) -> Option<&GridFunction> {
        self.snapshots.first()
    }

    pub fn last(&self) -> Option<&GridFunction> {
        self.snapshots.last()
    }
}

/// Integrates `problem` from its cell-averaged initial data, snapshotting at
/// exactly the requested times (the last step before each one is truncated
/// to land on it).
pub fn integrate(
    problem: &Problem,
    stepper: &TimeStepper,
    snapshot_times: &[f64],
) -> Result<Trajectory> {
    let t_final = problem.t_final;
    let mut prev = -1.0;
    for &t in snapshot_times {
        if !t.is_finite() || t < 0.0 || t > t_final * (1.0 + 1e-12) + 1e-300 || t <= prev {
            return Err(Error::BadSnapshotTime { t, t_final });
        }
        prev = t;
    }

    let u_init = cell_average_init(|x| (problem.u0)(x), problem.grid, INIT_QUAD_POINTS)?;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &v in u_init.values() {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    // Pad the declared range a hair: the maximum principle keeps values
    // inside [lo, hi], with at most rounding-level excursions.
    let pad = 1e-9 * (1.0 + (hi - lo).abs());
    let eo = EoFlux::for_problem(problem, (lo - pad, hi + pad))?;
    let mut state = SchemeState::new(problem, eo, &u_init)?;

    let mut ledger = Vec::new();
    let s0 = state.current_stats();
    ledger.push(LedgerEntry {
        t: 0.0,
        dt: 0.0,
        umin: s0.umin,
        umax: s0.umax,
        tv: s0.tv,
        mass: s0.mass,
    });

    let mut snapshots = Vec::with_capacity(snapshot_times.len());
    let mut dt_base: Option<f64> = None;
    for &target in snapshot_times {
        while state.time() < target {
            let dt = match dt_base {
                Some(dt) => dt,
                None => {
                    let dt = stepper.cfl_dt(problem.grid.dx())?;
                    if !(dt > 0.0) || !dt.is_finite() {
                        return Err(Error::NoTimeScale);
                    }
                    dt_base = Some(dt);
                    dt
                }
            };
            let remaining = target - state.time();
            let landing = remaining <= dt * (1.0 + 1e-12);
            let dt_step = if landing { remaining } else { dt };
            let stats = state
                .step_with_stats(dt_step)
                .map_err(|e| annotate_step_error(e, state.time()))?;
            if landing {
                state.set_time(target);
            }
            ledger.push(LedgerEntry {
                t: state.time(),
                dt: dt_step,
                umin: stats.umin,
                umax: stats.umax,
                tv: stats.tv,
                mass: stats.mass,
            });
        }
        snapshots.push(state.grid_function()?);
    }

    Ok(Trajectory {
        problem: problem.clone(),
        snapshots,
        ledger,
    })
}

fn annotate_step_error(e: Error, t: f64) -> Error {
    match e {
        Error::NonFiniteState { cell, .. } => Error::NonFiniteState { cell, time: t },
        other => other,
    }
}
