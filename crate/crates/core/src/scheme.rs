//! The spatial operator of the semi-discrete scheme,
//!
//! ```text
//! d/dt u_j = -D⁻F_{j+1/2} + D⁻D⁺A_j,
//! F_{j+1/2} = F(u_j, u_{j+1}) = f⁺(u_j) + f⁻(u_{j+1}),   A_j = A(u_j),
//! ```
//!
//! with ghost-cell boundary handling, plus the forward Euler update.

use alloc::vec;
use alloc::vec::Vec;

use crate::eo::EoFlux;
use crate::error::{Error, Result};
use crate::grid::{Ghosted, GridFunction};
use crate::problem::{BoundaryCondition, Problem};

/// Fills the ghost cells of `v` for the given boundary condition.
/// Idempotent: the ghosts are a pure function of the interior.
pub fn apply_bc(v: &mut Ghosted, bc: BoundaryCondition) {
    let n = v.n();
    let padded = v.padded_mut();
    match bc {
        BoundaryCondition::Periodic => {
            padded[0] = padded[n];
            padded[n + 1] = padded[1];
        }
        // One ghost wide, mirroring and copying coincide: the ghost takes the
        // adjacent interior value, so D⁺u (and hence D⁺A) vanish at the wall.
        BoundaryCondition::ZeroDiffusiveFlux | BoundaryCondition::Extrapolate => {
            padded[0] = padded[1];
            padded[n + 1] = padded[n];
        }
    }
}

/// Per-step summary recorded in the trajectory ledger.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct StepStats {
    pub umin: f64,
    pub umax: f64,
    pub tv: f64,
    pub mass: f64,
}

/// The mutable simulation state: ghost-padded cell values bound to a problem
/// and an Engquist-Osher flux.  Ghosts are kept filled by every public
/// method, so stencil evaluations are always valid.
pub struct SchemeState<'p> {
    problem: &'p Problem,
    eo: EoFlux,
    u: Ghosted,
    time: f64,
    // step workspace, reused across steps
    a_vals: Vec<f64>,
    fluxes: Vec<f64>,
    rhs: Vec<f64>,
}

impl<'p> SchemeState<'p> {
    pub fn new(problem: &'p Problem, eo: EoFlux, u: &GridFunction) -> Result<Self> {
        if u.grid() != problem.grid {
            return Err(Error::GridMismatch {
                reason: "state values live on a different grid than the problem",
            });
        }
        let n = problem.grid.n_cells();
        let mut ghosted = Ghosted::from_interior(u.values(), problem.grid.dx());
        apply_bc(&mut ghosted, problem.bc);
        Ok(Self {
            problem,
            eo,
            u: ghosted,
            time: u.time(),
            a_vals: vec![0.0; n + 2],
            fluxes: vec![0.0; n + 1],
            rhs: vec![0.0; n],
        })
    }

    pub fn problem(&self) -> &Problem {
        self.problem
    }

    pub fn eo(&self) -> &EoFlux {
        &self.eo
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub(crate) fn set_time(&mut self, t: f64) {
        self.time = t;
    }

    pub fn interior(&self) -> &[f64] {
        self.u.interior()
    }

    /// Re-apply the boundary condition's ghost fill (idempotent).
    pub fn apply_bc(&mut self) {
        apply_bc(&mut self.u, self.problem.bc);
    }

    /// Snapshot of the current interior values.
    pub fn grid_function(&self) -> Result<GridFunction> {
        GridFunction::new(self.problem.grid, self.u.interior().to_vec(), self.time)
    }

    /// du_j/dt = -(F_{j+1/2} - F_{j-1/2})/dx + (A_{j+1} - 2A_j + A_{j-1})/dx².
    pub fn spatial_rhs(&self) -> Result<Vec<f64>> {
        let n = self.u.n();
        let mut a_vals = vec![0.0; n + 2];
        let mut fluxes = vec![0.0; n + 1];
        let mut rhs = vec![0.0; n];
        compute_rhs(
            self.problem,
            &self.eo,
            self.u.padded(),
            &mut a_vals,
            &mut fluxes,
            &mut rhs,
        )?;
        for (cell, r) in rhs.iter().enumerate() {
            if !r.is_finite() {
                return Err(Error::NonFiniteRhs {
                    cell,
                    time: self.time,
                });
            }
        }
        Ok(rhs)
    }

    /// One forward Euler step u ← u + dt·rhs; `dt` must respect the CFL
    /// bound for the update to stay monotone.
    pub fn step_euler(&mut self, dt: f64) -> Result<()> {
        self.step_with_stats(dt).map(|_| ())
    }

    pub(crate) fn step_with_stats(&mut self, dt: f64) -> Result<StepStats> {
        compute_rhs(
            self.problem,
            &self.eo,
            self.u.padded(),
            &mut self.a_vals,
            &mut self.fluxes,
            &mut self.rhs,
        )?;

        let n = self.u.n();
        let dx = self.problem.grid.dx();
        let padded = self.u.padded_mut();
        let mut umin = f64::INFINITY;
        let mut umax = f64::NEG_INFINITY;
        let mut tv = 0.0;
        let mut mass = 0.0;
        let mut finite = true;
        let mut prev = 0.0;
        for j in 0..n {
            let new = padded[j + 1] + dt * self.rhs[j];
            padded[j + 1] = new;
            finite &= new.is_finite();
            umin = umin.min(new);
            umax = umax.max(new);
            mass += new;
            if j > 0 {
                tv += (new - prev).abs();
            }
            prev = new;
        }
        if self.problem.bc == BoundaryCondition::Periodic {
            tv += (padded[1] - padded[n]).abs();
        }
        self.time += dt;
        if !finite {
            let cell = (0..n).find(|&j| !padded[j + 1].is_finite()).unwrap_or(0);
            return Err(Error::NonFiniteState {
                cell,
                time: self.time,
            });
        }
        self.apply_bc();
        Ok(StepStats {
            umin,
            umax,
            tv,
            mass: mass * dx,
        })
    }

    /// Stats of the current state (used for the t = 0 ledger entry).
    pub(crate) fn current_stats(&self) -> StepStats {
        let vals = self.u.interior();
        let mut umin = f64::INFINITY;
        let mut umax = f64::NEG_INFINITY;
        let mut tv = 0.0;
        let mut mass = 0.0;
        for (j, &v) in vals.iter().enumerate() {
            umin = umin.min(v);
            umax = umax.max(v);
            mass += v;
            if j > 0 {
                tv += (v - vals[j - 1]).abs();
            }
        }
        if self.problem.bc == BoundaryCondition::Periodic {
            tv += (vals[0] - vals[vals.len() - 1]).abs();
        }
        StepStats {
            umin,
            umax,
            tv,
            mass: mass * self.problem.grid.dx(),
        }
    }
}

fn compute_rhs(
    problem: &Problem,
    eo: &EoFlux,
    padded: &[f64],
    a_vals: &mut [f64],
    fluxes: &mut [f64],
    rhs: &mut [f64],
) -> Result<()> {
    let n = padded.len() - 2;
    let dx = problem.grid.dx();
    let inv_dx = 1.0 / dx;
    let inv_dx2 = inv_dx * inv_dx;

    let diffusion_on = !problem.diffusion.is_identically_zero();
    if diffusion_on {
        for (a, &u) in a_vals.iter_mut().zip(padded) {
            *a = problem.diffusion.a(u);
        }
    }

    let flux_on = !eo.is_identically_zero();
    if flux_on {
        for i in 0..=n {
            fluxes[i] = eo.flux(padded[i], padded[i + 1])?;
        }
    }

    for j in 0..n {
        let conv = if flux_on {
            (fluxes[j + 1] - fluxes[j]) * inv_dx
        } else {
            0.0
        };
        let diff = if diffusion_on {
            (a_vals[j + 2] - 2.0 * a_vals[j + 1] + a_vals[j]) * inv_dx2
        } else {
            0.0
        };
        rhs[j] = diff - conv;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Grid1D, GridFunction};
    use crate::problem::{DiffusionSpec, FluxSpec};
    use alloc::vec;

    fn make_problem(
        flux: FluxSpec,
        diffusion: DiffusionSpec,
        bc: BoundaryCondition,
        grid: Grid1D,
    ) -> Problem {
        Problem::new(flux, diffusion, bc, |_| 0.0, grid, 1.0).unwrap()
    }

    fn state_with_values<'p>(problem: &'p Problem, values: Vec<f64>) -> SchemeState<'p> {
        let u = GridFunction::new(problem.grid, values, 0.0).unwrap();
        let eo = EoFlux::for_problem(problem, (-10.0, 10.0)).unwrap();
        SchemeState::new(problem, eo, &u).unwrap()
    }

    #[test]
    fn ghost_fill_conventions() {
        let mut g = Ghosted::from_interior(&[1.0, 2.0, 3.0, 4.0], 1.0);
        apply_bc(&mut g, BoundaryCondition::Periodic);
        assert_eq!(g.value(-1), 4.0);
        assert_eq!(g.value(4), 1.0);

        apply_bc(&mut g, BoundaryCondition::Extrapolate);
        assert_eq!(g.value(-1), 1.0);
        assert_eq!(g.value(4), 4.0);

        // With A strictly increasing the zero-diffusive-flux ghost must make
        // A(ghost) = A(interior), i.e. ghost = interior.
        apply_bc(&mut g, BoundaryCondition::ZeroDiffusiveFlux);
        assert_eq!(g.value(-1), 1.0);
        assert_eq!(g.value(4), 4.0);

        // Filling twice equals filling once.
        let once = g.clone();
        apply_bc(&mut g, BoundaryCondition::ZeroDiffusiveFlux);
        assert_eq!(g, once);
    }

    #[test]
    fn constant_states_are_steady() {
        let grid = Grid1D::new(-1.0, 1.0, 8).unwrap();
        let problem = make_problem(
            FluxSpec::burgers(),
            DiffusionSpec::linear(0.3),
            BoundaryCondition::Periodic,
            grid,
        );
        let st = state_with_values(&problem, vec![0.7; 8]);
        for r in st.spatial_rhs().unwrap() {
            assert_eq!(r, 0.0);
        }
    }

    #[test]
    fn spike_gives_discrete_laplacian() {
        // f = 0, A(u) = u, u = [0, 1, 0], dx = 1: rhs = [1, -2, 1].
        let grid = Grid1D::new(0.0, 3.0, 3).unwrap();
        let problem = make_problem(
            FluxSpec::zero(),
            DiffusionSpec::linear(1.0),
            BoundaryCondition::Extrapolate,
            grid,
        );
        let st = state_with_values(&problem, vec![0.0, 1.0, 0.0]);
        let rhs = st.spatial_rhs().unwrap();
        assert_eq!(rhs, vec![1.0, -2.0, 1.0]);
    }

    #[test]
    fn positive_linear_flux_is_pure_upwind() {
        // f(u) = u, A = 0: rhs_j = -(u_j - u_{j-1})/dx, hand-evaluated.
        let grid = Grid1D::new(0.0, 1.0, 5).unwrap();
        let problem = make_problem(
            FluxSpec::linear(1.0),
            DiffusionSpec::zero(),
            BoundaryCondition::Extrapolate,
            grid,
        );
        let vals = vec![0.4, -0.3, 1.9, 0.2, -1.1];
        let st = state_with_values(&problem, vals.clone());
        let rhs = st.spatial_rhs().unwrap();
        let dx = grid.dx();
        for j in 0..5 {
            let left = if j == 0 { vals[0] } else { vals[j - 1] };
            let expected = -(vals[j] - left) / dx;
            assert!((rhs[j] - expected).abs() <= 1e-12, "cell {j}");
        }
    }

    #[test]
    fn periodic_rhs_is_conservative_and_shift_equivariant() {
        let grid = Grid1D::new(0.0, 2.0, 16).unwrap();
        let problem = make_problem(
            FluxSpec::burgers(),
            DiffusionSpec::new(|u| 0.5 * u.max(0.0) * u.max(0.0), |u| u.max(0.0)),
            BoundaryCondition::Periodic,
            grid,
        );
        let vals: Vec<f64> = (0..16).map(|j| (j as f64 * 0.83).sin()).collect();
        let st = state_with_values(&problem, vals.clone());
        let rhs = st.spatial_rhs().unwrap();

        let sum: f64 = rhs.iter().sum();
        let fmax = rhs.iter().fold(0.0f64, |m, r| m.max(r.abs()));
        assert!(sum.abs() <= 1e-12 * 16.0 * fmax.max(1.0), "sum = {sum}");

        // Cyclic shift of the data shifts the rhs.
        let mut shifted = vals.clone();
        shifted.rotate_right(3);
        let st2 = state_with_values(&problem, shifted);
        let rhs2 = st2.spatial_rhs().unwrap();
        let mut rhs_shifted = rhs.clone();
        rhs_shifted.rotate_right(3);
        for (a, b) in rhs2.iter().zip(&rhs_shifted) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn decreasing_flux_reduces_to_downwind_scheme() {
        // For f' < 0 and A = 0 the scheme must equal rhs_j = -(f(u_{j+1}) - f(u_j))/dx.
        let grid = Grid1D::new(0.0, 1.0, 6).unwrap();
        let problem = make_problem(
            FluxSpec::new(|u| -1.5 * u, |_| -1.5),
            DiffusionSpec::zero(),
            BoundaryCondition::Extrapolate,
            grid,
        );
        let vals = vec![0.3, 0.9, -0.2, 0.5, 1.4, -0.7];
        let st = state_with_values(&problem, vals.clone());
        let rhs = st.spatial_rhs().unwrap();
        let dx = grid.dx();
        for j in 0..6 {
            let right = if j == 5 { vals[5] } else { vals[j + 1] };
            let expected = -(-1.5 * right - -1.5 * vals[j]) / dx;
            assert!((rhs[j] - expected).abs() <= 1e-11, "cell {j}");
        }
    }

    #[test]
    fn euler_step_trivial_cases() {
        // Constant state: unchanged.
        let grid = Grid1D::new(0.0, 1.0, 4).unwrap();
        let problem = make_problem(
            FluxSpec::burgers(),
            DiffusionSpec::linear(1.0),
            BoundaryCondition::Periodic,
            grid,
        );
        let mut st = state_with_values(&problem, vec![2.0; 4]);
        st.step_euler(0.01).unwrap();
        assert_eq!(st.interior(), &[2.0; 4]);
        assert_eq!(st.time(), 0.01);

        // Single heat step by hand: [0,1,0] with dt = 0.25, dx = 1.
        let grid = Grid1D::new(0.0, 3.0, 3).unwrap();
        let problem = make_problem(
            FluxSpec::zero(),
            DiffusionSpec::linear(1.0),
            BoundaryCondition::Extrapolate,
            grid,
        );
        let mut st = state_with_values(&problem, vec![0.0, 1.0, 0.0]);
        st.step_euler(0.25).unwrap();
        assert_eq!(st.interior(), &[0.25, 0.5, 0.25]);
    }

    #[test]
    fn euler_step_matches_scalar_reference_loop() {
        // Independent reference: plain arrays, explicit index arithmetic.
        let grid = Grid1D::new(-1.0, 2.0, 24).unwrap();
        let problem = make_problem(
            FluxSpec::burgers(),
            DiffusionSpec::new(|u| 0.5 * u.max(0.0) * u.max(0.0), |u| u.max(0.0)),
            BoundaryCondition::ZeroDiffusiveFlux,
            grid,
        );
        let vals: Vec<f64> = grid.centers().map(|x| x.sin()).collect();
        let dt = 1e-3;

        let mut st = state_with_values(&problem, vals.clone());
        st.step_euler(dt).unwrap();

        // Reference loop.
        let n = vals.len();
        let dx = grid.dx();
        let mut padded = vec![0.0; n + 2];
        padded[1..=n].copy_from_slice(&vals);
        padded[0] = padded[1];
        padded[n + 1] = padded[n];
        let fp = |u: f64| 0.5 * u.max(0.0) * u.max(0.0);
        let fm = |u: f64| 0.5 * u.min(0.0) * u.min(0.0);
        let a = |u: f64| 0.5 * u.max(0.0) * u.max(0.0);
        let mut expect = vec![0.0; n];
        for j in 0..n {
            let flux_r = fp(padded[j + 1]) + fm(padded[j + 2]);
            let flux_l = fp(padded[j]) + fm(padded[j + 1]);
            let lap = a(padded[j + 2]) - 2.0 * a(padded[j + 1]) + a(padded[j]);
            expect[j] = padded[j + 1] + dt * (lap / (dx * dx) - (flux_r - flux_l) / dx);
        }
        for (got, want) in st.interior().iter().zip(&expect) {
            assert!((got - want).abs() <= 1e-15, "{got} vs {want}");
        }
    }

    #[test]
    fn nan_rhs_is_rejected_with_cell_index() {
        let grid = Grid1D::new(0.0, 1.0, 4).unwrap();
        let problem = make_problem(
            FluxSpec::zero(),
            DiffusionSpec::new(|u| if u > 0.9 { f64::NAN } else { 0.0 }, |_| 0.0),
            BoundaryCondition::Extrapolate,
            grid,
        );
        let st = state_with_values(&problem, vec![0.0, 1.0, 0.0, 0.0]);
        match st.spatial_rhs() {
            Err(Error::NonFiniteRhs { cell, .. }) => assert!(cell <= 2),
            other => panic!("expected NaN rejection, got {other:?}"),
        }
    }
}
