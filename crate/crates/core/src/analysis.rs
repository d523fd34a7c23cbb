//! Norms, errors, convergence tables, entropy residuals and invariant
//! verification: the layer that turns solver output into checkable claims.

use alloc::vec::Vec;

use crate::eo::EoFlux;
use crate::error::{Error, Result};
use crate::grid::{Ghosted, Grid1D, GridFunction};
use crate::math;
use crate::problem::{BoundaryCondition, Problem};
use crate::scheme::apply_bc;
use crate::time::Trajectory;

/// L1 norm dx·Σ|v_j|.
pub fn l1_norm(v: &GridFunction) -> f64 {
    v.grid().dx() * v.values().iter().map(|x| x.abs()).sum::<f64>()
}

/// L∞ norm max_j |v_j|.
pub fn linf_norm(v: &GridFunction) -> f64 {
    v.values().iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Total variation Σ_j |v_{j+1} - v_j|.  The boundary condition decides
/// whether the wrap-around jump is included (periodic: yes).
pub fn total_variation(v: &GridFunction, bc: BoundaryCondition) -> f64 {
    let vals = v.values();
    let mut tv: f64 = vals.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
    if bc == BoundaryCondition::Periodic && vals.len() > 1 {
        tv += (vals[0] - vals[vals.len() - 1]).abs();
    }
    tv
}

/// The space-time cone over which errors are measured: at time t the
/// interval [-L + M·t, L - M·t], in the domain's coordinate frame.  M must
/// dominate |f'| over the data range for the cone to outrun the influence of
/// the far field; that choice is the caller's.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeSpec {
    l: f64,
    m: f64,
}

impl ConeSpec {
    pub fn new(l: f64, m: f64) -> Result<Self> {
        if !(l > 0.0) || !l.is_finite() || !(m >= 0.0) || !m.is_finite() {
            return Err(Error::InvalidCone { l, m });
        }
        Ok(Self { l, m })
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    /// [-L + M·t, L - M·t]; empty cones are rejected.
    pub fn interval_at(&self, t: f64) -> Result<(f64, f64)> {
        let a = -self.l + self.m * t;
        let b = self.l - self.m * t;
        if !(a < b) {
            return Err(Error::EmptyCone { t });
        }
        Ok((a, b))
    }
}

/// Conservative restriction: each coarse value is the mean of the fine cells
/// it covers.  Requires nested grids (same domain, integer ratio).
///
/// The averaging uses balanced pairwise summation so that restricting by 2
/// twice is bit-identical to restricting by 4 directly.
pub fn restrict_to_coarse(fine: &GridFunction, coarse_grid: Grid1D) -> Result<GridFunction> {
    let fg = fine.grid();
    if fg.x_left() != coarse_grid.x_left() || fg.x_right() != coarse_grid.x_right() {
        return Err(Error::GridMismatch {
            reason: "domains differ",
        });
    }
    let nf = fg.n_cells();
    let nc = coarse_grid.n_cells();
    if nc == 0 || nf < nc || !nf.is_multiple_of(nc) {
        return Err(Error::GridMismatch {
            reason: "fine resolution is not an integer multiple of the coarse one",
        });
    }
    let ratio = nf / nc;
    let vals: Vec<f64> = (0..nc)
        .map(|j| pairwise_sum(&fine.values()[j * ratio..(j + 1) * ratio]) / ratio as f64)
        .collect();
    GridFunction::new(coarse_grid, vals, fine.time())
}

fn pairwise_sum(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        2 => v[0] + v[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
        }
    }
}

fn check_same_time(a: f64, b: f64) -> Result<()> {
    if (a - b).abs() > 1e-9 * a.abs().max(b.abs()).max(1.0) {
        return Err(Error::TimeMismatch { a, b });
    }
    Ok(())
}

/// L1 distance ∫|u - v| over the cone interval at time `t`, computed on the
/// coarser of the two (nested) grids; partial cells at the cone edges are
/// weighted by their overlap fraction.
pub fn cone_l1_error(u: &GridFunction, v: &GridFunction, t: f64, cone: &ConeSpec) -> Result<f64> {
    check_same_time(u.time(), t)?;
    check_same_time(v.time(), t)?;
    let (lo, hi) = cone.interval_at(t)?;

    let restricted;
    let (a, b): (&GridFunction, &GridFunction) = if u.grid() == v.grid() {
        (u, v)
    } else if u.grid().n_cells() >= v.grid().n_cells() {
        restricted = restrict_to_coarse(u, v.grid())?;
        (&restricted, v)
    } else {
        restricted = restrict_to_coarse(v, u.grid())?;
        (u, &restricted)
    };

    let grid = a.grid();
    let mut total = 0.0;
    for j in 0..grid.n_cells() {
        let left = grid.cell_left_edge(j).max(lo);
        let right = grid.cell_right_edge(j).min(hi);
        let overlap = right - left;
        if overlap > 0.0 {
            total += overlap * (a.values()[j] - b.values()[j]).abs();
        }
    }
    Ok(total)
}

/// Exact L1 distance ∫|u(x) - v(x)| dx between the two piecewise-constant
/// reconstructions, integrated over the intersection of their domains by
/// sweeping the merged cell edges.  The grids need not be nested.
pub fn staircase_l1_distance(u: &GridFunction, v: &GridFunction) -> Result<f64> {
    let gu = u.grid();
    let gv = v.grid();
    let lo = gu.x_left().max(gv.x_left());
    let hi = gu.x_right().min(gv.x_right());
    if !(lo < hi) {
        return Err(Error::GridMismatch {
            reason: "domains do not overlap",
        });
    }
    let mut i = first_cell_ending_after(gu, lo);
    let mut j = first_cell_ending_after(gv, lo);
    let mut p = lo;
    let mut total = 0.0;
    while p < hi {
        let eu = gu.cell_right_edge(i);
        let ev = gv.cell_right_edge(j);
        let q = eu.min(ev).min(hi);
        total += (q - p) * (u.values()[i] - v.values()[j]).abs();
        if eu <= q && i + 1 < gu.n_cells() {
            i += 1;
        }
        if ev <= q && j + 1 < gv.n_cells() {
            j += 1;
        }
        p = q;
    }
    Ok(total)
}

fn first_cell_ending_after(g: Grid1D, p: f64) -> usize {
    let mut i = (math::floor((p - g.x_left()) / g.dx()).max(0.0) as usize).min(g.n_cells() - 1);
    while i + 1 < g.n_cells() && g.cell_right_edge(i) <= p {
        i += 1;
    }
    i
}

/// The percent relative L1 error 100·‖u_approx - u_ref‖_L1 / ‖u_approx‖_L1
/// between the two piecewise-constant reconstructions (the denominator is
/// the approximation's own norm).  The distance is evaluated in function
/// space, so the staircase of the coarse run is compared at the reference's
/// resolution rather than averaged down to the coarse grid, which would
/// cancel the reconstruction error the measurement is after.
pub fn percent_relative_l1_error(approx: &GridFunction, reference: &GridFunction) -> Result<f64> {
    check_same_time(approx.time(), reference.time())?;
    let num = staircase_l1_distance(approx, reference)?;
    let den = l1_norm(approx);
    if den == 0.0 {
        return Err(Error::ZeroNorm);
    }
    Ok(100.0 * num / den)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    RelativePercentL1,
    ConeL1,
}

/// A grid-refinement study: errors per resolution and the observed orders
/// rates[k] = log2(errors[k]/errors[k+1]) for doubling grids.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub grid_sizes: Vec<usize>,
    pub errors: Vec<f64>,
    pub rates: Vec<f64>,
    pub norm_kind: NormKind,
}

/// Builds an [`ErrorReport`] from (n_cells, error) pairs; the resolutions
/// must double at every step for the log2 rate formula to apply.
pub fn convergence_table(runs: &[(usize, f64)], norm_kind: NormKind) -> Result<ErrorReport> {
    if runs.is_empty() {
        return Err(Error::TooFewEntries {
            what: "convergence table",
            needed: 1,
            got: 0,
        });
    }
    for w in runs.windows(2) {
        if w[1].0 != 2 * w[0].0 {
            return Err(Error::NotDoubling {
                prev: w[0].0,
                next: w[1].0,
            });
        }
    }
    for &(_, e) in runs {
        if !(e > 0.0) || !e.is_finite() {
            return Err(Error::NonPositiveError { value: e });
        }
    }
    let rates = runs
        .windows(2)
        .map(|w| math::ln(w[0].1 / w[1].1) / math::LN_2)
        .collect();
    Ok(ErrorReport {
        grid_sizes: runs.iter().map(|r| r.0).collect(),
        errors: runs.iter().map(|r| r.1).collect(),
        rates,
        norm_kind,
    })
}

/// Least-squares slope and intercept of ln(y) against ln(x).
pub fn fit_loglog(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::TooFewEntries {
            what: "log-log fit",
            needed: 2,
            got: xs.len().min(ys.len()),
        });
    }
    let mut sx = 0.0;
    let mut sy = 0.0;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let n = xs.len() as f64;
    for (&x, &y) in xs.iter().zip(ys) {
        if !(x > 0.0) || !(y > 0.0) {
            return Err(Error::NonPositiveError {
                value: if x > 0.0 { y } else { x },
            });
        }
        let lx = math::ln(x);
        let ly = math::ln(y);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    Ok((slope, intercept))
}

/// The 17-point lattice of Kruzkov constants spanning the data range padded
/// by 0.1 on each side.
pub fn kruzkov_lattice(umin: f64, umax: f64) -> Vec<f64> {
    const POINTS: usize = 17;
    let lo = umin - 0.1;
    let hi = umax + 0.1;
    (0..POINTS)
        .map(|k| lo + (hi - lo) * k as f64 / (POINTS - 1) as f64)
        .collect()
}

/// Worst-case discrete Kruzkov entropy residual of a trajectory for the
/// entropy |u - c|:
///
/// ```text
/// max_{n,j}  (|u_j^{n+1}-c| - |u_j^n-c|)/Δt + D⁻Q_{j+1/2}^n - D⁻D⁺R_j^n,
/// ```
///
/// with the Crandall-Majda numerical entropy flux
/// Q_{j+1/2} = F(u_j∨c, u_{j+1}∨c) - F(u_j∧c, u_{j+1}∧c) and
/// R_j = |A(u_j) - A(c)|.  For the monotone scheme stepped at its own dt the
/// residual is non-positive up to rounding; snapshots must be uniformly
/// spaced (one Euler step apart to certify the scheme itself).
pub fn entropy_residual(traj: &Trajectory, c: f64) -> Result<f64> {
    let snaps = &traj.snapshots;
    if snaps.len() < 2 {
        return Err(Error::TooFewEntries {
            what: "entropy residual",
            needed: 2,
            got: snaps.len(),
        });
    }
    let dt = snaps[1].time() - snaps[0].time();
    for w in snaps.windows(2) {
        let d = w[1].time() - w[0].time();
        if (d - dt).abs() > 1e-9 * dt.abs().max(1e-300) {
            return Err(Error::NonUniformSnapshots {
                expected: dt,
                got: d,
            });
        }
    }

    let problem = &traj.problem;
    let eo = eo_for_range(
        problem,
        snaps.iter().flat_map(|s| s.values().iter().copied()),
        c,
    )?;
    let grid = problem.grid;
    let n = grid.n_cells();
    let dx = grid.dx();
    let inv_dx = 1.0 / dx;
    let inv_dx2 = inv_dx * inv_dx;
    let a_of_c = problem.diffusion.a(c);

    let mut worst = f64::NEG_INFINITY;
    let mut q = alloc::vec![0.0; n + 1];
    for w in snaps.windows(2) {
        let mut cur = Ghosted::from_interior(w[0].values(), dx);
        apply_bc(&mut cur, problem.bc);
        let p = cur.padded();
        for i in 0..=n {
            q[i] =
                eo.flux(p[i].max(c), p[i + 1].max(c))? - eo.flux(p[i].min(c), p[i + 1].min(c))?;
        }
        let r = |i: usize| (problem.diffusion.a(p[i]) - a_of_c).abs();
        let next = w[1].values();
        for j in 0..n {
            let time_term = ((next[j] - c).abs() - (p[j + 1] - c).abs()) / dt;
            let conv = (q[j + 1] - q[j]) * inv_dx;
            let diff = (r(j + 2) - 2.0 * r(j + 1) + r(j)) * inv_dx2;
            worst = worst.max(time_term + conv - diff);
        }
    }
    Ok(worst)
}

fn eo_for_range(
    problem: &Problem,
    values: impl Iterator<Item = f64>,
    extra: f64,
) -> Result<EoFlux> {
    let mut lo = extra;
    let mut hi = extra;
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    let pad = 1e-9 * (1.0 + (hi - lo).abs()) + 1e-12;
    EoFlux::for_problem(problem, (lo - pad, hi + pad))
}

/// One audited invariant: `worst` is the largest observed violation margin
/// (non-positive margins mean the invariant held with room to spare).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantCheck {
    pub name: &'static str,
    pub applicable: bool,
    pub passed: bool,
    pub worst: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantReport {
    pub checks: Vec<InvariantCheck>,
}

impl InvariantReport {
    /// True when every applicable check passed.
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| !c.applicable || c.passed)
    }
}

impl core::fmt::Display for InvariantReport {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        for c in &self.checks {
            if !c.applicable {
                writeln!(f, "{:<24} n/a", c.name)?;
            } else {
                writeln!(
                    f,
                    "{:<24} {}  worst margin {:+.3e} (tol {:.1e})",
                    c.name,
                    if c.passed { "pass" } else { "FAIL" },
                    c.worst,
                    c.tolerance,
                )?;
            }
        }
        Ok(())
    }
}

const LINF_TOL: f64 = 1e-12;
const TV_TOL: f64 = 1e-10;
const MASS_REL_TOL: f64 = 1e-10;
const FLUX_REL_TOL: f64 = 1e-8;

/// Audits the ledger and snapshots of a run against the scheme's stability
/// estimates: L∞ non-increase, TV non-increase, mass conservation (periodic
/// runs), and non-increase of the L∞ norm and total variation of the
/// discrete flux F_{j+1/2} - D⁺A_j.
pub fn invariant_report(traj: &Trajectory) -> Result<InvariantReport> {
    let ledger = &traj.ledger;
    let mut checks = Vec::new();

    // Margins are signed: negative means the estimate held with slack.  A
    // zero-step trajectory has no later entries and all margins are 0.
    let (linf_worst, tv_worst, mass_worst, mass_tol) = match ledger.first() {
        Some(first) if ledger.len() > 1 => {
            let linf0 = first.linf();
            let tv0 = first.tv;
            let mass0 = first.mass;
            let mut linf_worst = f64::NEG_INFINITY;
            let mut tv_worst = f64::NEG_INFINITY;
            let mut mass_worst = 0.0f64;
            for e in &ledger[1..] {
                linf_worst = linf_worst.max(e.linf() - linf0);
                tv_worst = tv_worst.max(e.tv - tv0);
                mass_worst = mass_worst.max((e.mass - mass0).abs());
            }
            (
                linf_worst,
                tv_worst,
                mass_worst,
                MASS_REL_TOL * (1.0 + mass0.abs()),
            )
        }
        _ => (0.0, 0.0, 0.0, MASS_REL_TOL),
    };

    checks.push(InvariantCheck {
        name: "linf-nonincrease",
        applicable: true,
        passed: linf_worst <= LINF_TOL,
        worst: linf_worst,
        tolerance: LINF_TOL,
    });
    checks.push(InvariantCheck {
        name: "tv-nonincrease",
        applicable: true,
        passed: tv_worst <= TV_TOL,
        worst: tv_worst,
        tolerance: TV_TOL,
    });
    checks.push(InvariantCheck {
        name: "mass-conservation",
        applicable: traj.problem.bc == BoundaryCondition::Periodic,
        passed: mass_worst <= mass_tol,
        worst: mass_worst,
        tolerance: mass_tol,
    });

    // Flux invariants need at least an initial snapshot to compare against.
    let (flux_bv_check, flux_linf_check) = if traj.snapshots.len() >= 2 {
        let problem = &traj.problem;
        let eo = eo_for_range(
            problem,
            traj.snapshots
                .iter()
                .flat_map(|s| s.values().iter().copied()),
            0.0,
        )?;
        let g0 = interface_flux_gradient(problem, &eo, &traj.snapshots[0])?;
        let (tv0, linf0) = seq_tv_linf(&g0);
        let mut bv_worst = f64::NEG_INFINITY;
        let mut linf_worst = f64::NEG_INFINITY;
        for snap in &traj.snapshots[1..] {
            let g = interface_flux_gradient(problem, &eo, snap)?;
            let (tv, linf) = seq_tv_linf(&g);
            bv_worst = bv_worst.max(tv - tv0);
            linf_worst = linf_worst.max(linf - linf0);
        }
        (
            InvariantCheck {
                name: "flux-bv-nonincrease",
                applicable: true,
                passed: bv_worst <= FLUX_REL_TOL * tv0 + 1e-12,
                worst: bv_worst,
                tolerance: FLUX_REL_TOL * tv0 + 1e-12,
            },
            InvariantCheck {
                name: "flux-linf-bound",
                applicable: true,
                passed: linf_worst <= FLUX_REL_TOL * linf0 + 1e-12,
                worst: linf_worst,
                tolerance: FLUX_REL_TOL * linf0 + 1e-12,
            },
        )
    } else {
        let vacuous = |name| InvariantCheck {
            name,
            applicable: true,
            passed: true,
            worst: 0.0,
            tolerance: 1e-12,
        };
        (vacuous("flux-bv-nonincrease"), vacuous("flux-linf-bound"))
    };
    checks.push(flux_bv_check);
    checks.push(flux_linf_check);

    Ok(InvariantReport { checks })
}

/// G_{j+1/2} = F(u_j, u_{j+1}) - D⁺A(u_j) on the n+1 interfaces of the
/// ghost-padded state.
fn interface_flux_gradient(
    problem: &Problem,
    eo: &EoFlux,
    snap: &GridFunction,
) -> Result<Vec<f64>> {
    let dx = problem.grid.dx();
    let mut g = Ghosted::from_interior(snap.values(), dx);
    apply_bc(&mut g, problem.bc);
    let p = g.padded();
    let n = snap.values().len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let flux = eo.flux(p[i], p[i + 1])?;
        let grad = (problem.diffusion.a(p[i + 1]) - problem.diffusion.a(p[i])) / dx;
        out.push(flux - grad);
    }
    Ok(out)
}

fn seq_tv_linf(g: &[f64]) -> (f64, f64) {
    let tv = g.windows(2).map(|w| (w[1] - w[0]).abs()).sum::<f64>();
    let linf = g.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    (tv, linf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::cell_average_init;
    use crate::problem::{DiffusionSpec, FluxSpec};
    use crate::time::{integrate, TimeStepper};
    use alloc::vec;

    fn constant_fn(grid: Grid1D, c: f64) -> GridFunction {
        GridFunction::new(grid, vec![c; grid.n_cells()], 0.0).unwrap()
    }

    #[test]
    fn norms_of_constant() {
        let grid = Grid1D::new(-1.0, 3.0, 25).unwrap();
        let u = constant_fn(grid, -2.5);
        assert!((l1_norm(&u) - 4.0 * 2.5).abs() <= 1e-12);
        assert_eq!(linf_norm(&u), 2.5);
        assert_eq!(total_variation(&u, BoundaryCondition::Extrapolate), 0.0);
        assert_eq!(total_variation(&u, BoundaryCondition::Periodic), 0.0);
    }

    #[test]
    fn tv_counts_jumps_per_boundary_convention() {
        let grid = Grid1D::new(0.0, 1.0, 6).unwrap();
        let vals = vec![0.0, 0.0, 0.0, 1.0, 1.0, 1.0];
        let u = GridFunction::new(grid, vals, 0.0).unwrap();
        assert_eq!(total_variation(&u, BoundaryCondition::Extrapolate), 1.0);
        assert_eq!(total_variation(&u, BoundaryCondition::Periodic), 2.0);
    }

    #[test]
    fn tv_of_sine_tends_to_four() {
        let grid = Grid1D::new(0.0, 2.0 * core::f64::consts::PI, 2000).unwrap();
        let u = cell_average_init(|x| x.sin(), grid, 4).unwrap();
        let tv = total_variation(&u, BoundaryCondition::Periodic);
        assert!((tv - 4.0).abs() <= 1e-5, "tv = {tv}");
    }

    #[test]
    fn restriction_trivia() {
        let fine = Grid1D::new(0.0, 1.0, 4).unwrap();
        let coarse = Grid1D::new(0.0, 1.0, 2).unwrap();
        let f = GridFunction::new(fine, vec![1.0, 3.0, 5.0, 7.0], 0.0).unwrap();
        let c = restrict_to_coarse(&f, coarse).unwrap();
        assert_eq!(c.values(), &[2.0, 6.0]);

        let f = constant_fn(fine, 0.7);
        let c = restrict_to_coarse(&f, coarse).unwrap();
        assert_eq!(c.values(), &[0.7, 0.7]);
    }

    #[test]
    fn restriction_preserves_mass_and_rejects_non_nested() {
        let fine = Grid1D::new(-2.0, 2.0, 96).unwrap();
        let coarse = Grid1D::new(-2.0, 2.0, 12).unwrap();
        let vals: Vec<f64> = (0..96).map(|j| (j as f64 * 0.37).sin()).collect();
        let f = GridFunction::new(fine, vals, 0.0).unwrap();
        let c = restrict_to_coarse(&f, coarse).unwrap();
        let mass_f: f64 = f.values().iter().sum::<f64>() * fine.dx();
        let mass_c: f64 = c.values().iter().sum::<f64>() * coarse.dx();
        assert!((mass_f - mass_c).abs() <= 1e-13);

        let bad = Grid1D::new(-2.0, 2.0, 7).unwrap();
        assert!(restrict_to_coarse(&f, bad).is_err());
        let shifted = Grid1D::new(-1.0, 2.0, 12).unwrap();
        assert!(restrict_to_coarse(&f, shifted).is_err());
    }

    #[test]
    fn restriction_composes_exactly() {
        let g16 = Grid1D::new(0.0, 1.0, 16).unwrap();
        let g8 = Grid1D::new(0.0, 1.0, 8).unwrap();
        let g4 = Grid1D::new(0.0, 1.0, 4).unwrap();
        let vals: Vec<f64> = (0..16).map(|j| ((j * j) as f64 * 0.777).sin()).collect();
        let f = GridFunction::new(g16, vals, 0.0).unwrap();
        let two_step = restrict_to_coarse(&restrict_to_coarse(&f, g8).unwrap(), g4).unwrap();
        let direct = restrict_to_coarse(&f, g4).unwrap();
        assert_eq!(two_step.values(), direct.values());
    }

    #[test]
    fn cone_error_basics() {
        let grid = Grid1D::new(-2.0, 2.0, 80).unwrap();
        let cone = ConeSpec::new(1.0, 1.0).unwrap();
        let u = constant_fn(grid, 1.0);
        // Identical functions: zero.
        assert_eq!(cone_l1_error(&u, &u, 0.0, &cone).unwrap(), 0.0);
        // |u - v| = 1 on the cone of length 2(L - Mt).
        let t = 0.25;
        let u = GridFunction::new(grid, vec![1.0; 80], t).unwrap();
        let v = GridFunction::new(grid, vec![0.0; 80], t).unwrap();
        let e = cone_l1_error(&u, &v, t, &cone).unwrap();
        assert!((e - 2.0 * (1.0 - 0.25)).abs() <= 1e-12);
        // Empty cone is rejected.
        assert!(matches!(
            cone.interval_at(1.0),
            Err(Error::EmptyCone { .. })
        ));
    }

    #[test]
    fn cone_error_is_symmetric_and_triangular() {
        let grid = Grid1D::new(-2.0, 2.0, 64).unwrap();
        let cone = ConeSpec::new(1.5, 0.8).unwrap();
        let mk = |seed: u64| {
            let mut s = seed;
            let vals: Vec<f64> = (0..64)
                .map(|_| {
                    s = s
                        .wrapping_mul(6364136223846793005)
                        .wrapping_add(1442695040888963407);
                    ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
                })
                .collect();
            GridFunction::new(grid, vals, 0.5).unwrap()
        };
        let (u, v, w) = (mk(1), mk(2), mk(3));
        let uv = cone_l1_error(&u, &v, 0.5, &cone).unwrap();
        let vu = cone_l1_error(&v, &u, 0.5, &cone).unwrap();
        assert_eq!(uv, vu);
        let uw = cone_l1_error(&u, &w, 0.5, &cone).unwrap();
        let vw = cone_l1_error(&v, &w, 0.5, &cone).unwrap();
        assert!(uw <= uv + vw + 1e-12);
    }

    #[test]
    fn staircase_distance_sweeps_merged_edges() {
        // Same grid: reduces to dx·Σ|diff|.
        let g = Grid1D::new(0.0, 1.0, 4).unwrap();
        let u = GridFunction::new(g, vec![1.0, 2.0, 3.0, 4.0], 0.0).unwrap();
        let v = GridFunction::new(g, vec![0.0, 2.5, 3.0, 5.0], 0.0).unwrap();
        let d = staircase_l1_distance(&u, &v).unwrap();
        assert!((d - 0.25 * (1.0 + 0.5 + 0.0 + 1.0)).abs() <= 1e-15);

        // Nested 2:1: hand-computed on the fine grid.
        let fine = Grid1D::new(0.0, 1.0, 4).unwrap();
        let coarse = Grid1D::new(0.0, 1.0, 2).unwrap();
        let uf = GridFunction::new(fine, vec![1.0, 3.0, 5.0, 7.0], 0.0).unwrap();
        let uc = GridFunction::new(coarse, vec![2.0, 6.0], 0.0).unwrap();
        let d = staircase_l1_distance(&uc, &uf).unwrap();
        assert!((d - 0.25 * (1.0 + 1.0 + 1.0 + 1.0)).abs() <= 1e-15);
        // Symmetric.
        assert_eq!(d, staircase_l1_distance(&uf, &uc).unwrap());

        // Overlapping but non-nested domains: |1 - 0| over [0.5, 1.0].
        let right = Grid1D::new(0.5, 2.0, 3).unwrap();
        let ur = GridFunction::new(right, vec![0.0, 0.0, 0.0], 0.0).unwrap();
        let ones = GridFunction::new(g, vec![1.0; 4], 0.0).unwrap();
        let d = staircase_l1_distance(&ones, &ur).unwrap();
        assert!((d - 0.5).abs() <= 1e-15);

        // Disjoint domains are rejected.
        let far = Grid1D::new(5.0, 6.0, 2).unwrap();
        let ufar = GridFunction::new(far, vec![0.0, 0.0], 0.0).unwrap();
        assert!(staircase_l1_distance(&ones, &ufar).is_err());
    }

    #[test]
    fn percent_error_formula() {
        let grid = Grid1D::new(0.0, 1.0, 10).unwrap();
        let a = constant_fn(grid, 1.0);
        assert_eq!(percent_relative_l1_error(&a, &a).unwrap(), 0.0);
        let r = constant_fn(grid, 1.01);
        let e = percent_relative_l1_error(&a, &r).unwrap();
        assert!((e - 1.0).abs() <= 1e-10);
        let zero = constant_fn(grid, 0.0);
        assert!(matches!(
            percent_relative_l1_error(&zero, &r),
            Err(Error::ZeroNorm)
        ));
    }

    #[test]
    fn convergence_table_rates() {
        // Table values: errors (3.62, 1.55) give the observed rate 1.22.
        let report =
            convergence_table(&[(25, 3.62), (50, 1.55)], NormKind::RelativePercentL1).unwrap();
        assert!((report.rates[0] - 1.22).abs() < 0.005);

        let report = convergence_table(&[(16, 4.0), (32, 1.0)], NormKind::ConeL1).unwrap();
        assert!((report.rates[0] - 2.0).abs() <= 1e-12);

        let report = convergence_table(&[(16, 0.3), (32, 0.3)], NormKind::ConeL1).unwrap();
        assert_eq!(report.rates[0], 0.0);

        assert!(matches!(
            convergence_table(&[(16, 1.0), (24, 0.5)], NormKind::ConeL1),
            Err(Error::NotDoubling { .. })
        ));
    }

    #[test]
    fn convergence_table_recovers_power_law() {
        // e(N) = c·N^{-p} must give back exactly p.
        let p = 1.37;
        let runs: Vec<(usize, f64)> = (0..6)
            .map(|k| {
                let n = 25usize << k;
                (n, 3.0 * libm::pow(n as f64, -p))
            })
            .collect();
        let report = convergence_table(&runs, NormKind::ConeL1).unwrap();
        for r in report.rates {
            assert!((r - p).abs() <= 1e-12);
        }
    }

    #[test]
    fn loglog_fit_recovers_slope() {
        let xs = [0.1f64, 0.05, 0.025, 0.0125];
        let ys: Vec<f64> = xs.iter().map(|&x| 2.0 * x.powf(0.5)).collect();
        let (slope, intercept) = fit_loglog(&xs, &ys).unwrap();
        assert!((slope - 0.5).abs() <= 1e-12);
        assert!((intercept - 2.0f64.ln()).abs() <= 1e-12);
    }

    #[test]
    fn kruzkov_lattice_spans_padded_range() {
        let c = kruzkov_lattice(-1.0, 1.0);
        assert_eq!(c.len(), 17);
        assert_eq!(c[0], -1.1);
        assert_eq!(c[16], 1.1);
        for w in c.windows(2) {
            assert!((w[1] - w[0] - 2.2 / 16.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn entropy_residual_zero_for_constant_trajectory() {
        let grid = Grid1D::new(0.0, 1.0, 16).unwrap();
        let problem = Problem::new(
            FluxSpec::burgers(),
            DiffusionSpec::linear(0.5),
            BoundaryCondition::Periodic,
            |_| 0.8,
            grid,
            1.0,
        )
        .unwrap();
        let stepper = TimeStepper::for_problem(&problem).unwrap();
        // A constant state has no time scale of its own; fix a small dt.
        let dt = 1e-3;
        let stepper = TimeStepper {
            fixed_dt: Some(dt),
            ..stepper
        };
        let times: Vec<f64> = (0..=5).map(|k| k as f64 * dt).collect();
        let traj = integrate(&problem, &stepper, &times).unwrap();
        for c in kruzkov_lattice(0.8, 0.8) {
            assert_eq!(entropy_residual(&traj, c).unwrap(), 0.0);
        }
    }

    #[test]
    fn invariant_report_zero_step_margins() {
        let grid = Grid1D::new(0.0, 1.0, 8).unwrap();
        let problem = Problem::new(
            FluxSpec::zero(),
            DiffusionSpec::linear(1.0),
            BoundaryCondition::Periodic,
            |x: f64| (2.0 * core::f64::consts::PI * x).sin(),
            grid,
            0.0,
        )
        .unwrap();
        let traj = integrate(&problem, &TimeStepper::new(0.0, 0.0), &[0.0]).unwrap();
        let report = invariant_report(&traj).unwrap();
        assert!(report.all_passed());
        for c in &report.checks {
            assert_eq!(c.worst, 0.0, "{}", c.name);
        }
    }
}
