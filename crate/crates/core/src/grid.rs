//! Uniform 1D meshes, cell-valued grid functions and the discrete calculus
//! (D±, cell averaging, reconstructions) everything else builds on.
//!
//! Cells are the half-open intervals I_j = (x_{j-1/2}, x_{j+1/2}] with
//! centers x_j = x_left + (j + 1/2)·dx, j = 0..n_cells-1.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Uniform mesh on the finite domain [x_left, x_right].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    x_left: f64,
    x_right: f64,
    n_cells: usize,
    dx: f64,
}

impl Grid1D {
    pub fn new(x_left: f64, x_right: f64, n_cells: usize) -> Result<Self> {
        if n_cells == 0 {
            return Err(Error::EmptyGrid);
        }
        if !(x_left.is_finite() && x_right.is_finite()) || x_left >= x_right {
            return Err(Error::InvalidDomain { x_left, x_right });
        }
        let dx = (x_right - x_left) / n_cells as f64;
        Ok(Self {
            x_left,
            x_right,
            n_cells,
            dx,
        })
    }

    pub fn x_left(&self) -> f64 {
        self.x_left
    }

    pub fn x_right(&self) -> f64 {
        self.x_right
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn width(&self) -> f64 {
        self.x_right - self.x_left
    }

    /// Center of cell `j`.
    pub fn cell_center(&self, j: usize) -> f64 {
        debug_assert!(j < self.n_cells);
        self.x_left + (j as f64 + 0.5) * self.dx
    }

    /// Left edge x_{j-1/2} of cell `j`.
    pub fn cell_left_edge(&self, j: usize) -> f64 {
        self.x_left + j as f64 * self.dx
    }

    /// Right edge x_{j+1/2} of cell `j`.
    pub fn cell_right_edge(&self, j: usize) -> f64 {
        self.x_left + (j + 1) as f64 * self.dx
    }

    pub fn centers(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_cells).map(move |j| self.cell_center(j))
    }

    /// Index of the cell whose half-open interval (x_{j-1/2}, x_{j+1/2}]
    /// contains `x`.  The left domain endpoint, which no half-open cell
    /// contains, maps to cell 0.
    pub fn cell_containing(&self, x: f64) -> Result<usize> {
        if !x.is_finite() || x < self.x_left || x > self.x_right {
            return Err(Error::OutOfDomain {
                x,
                x_left: self.x_left,
                x_right: self.x_right,
            });
        }
        let guess = math::floor((x - self.x_left) / self.dx) as isize;
        // Walk the neighbors so exact edge hits land on the right-closed side.
        for j in [guess - 1, guess, guess + 1] {
            if j < 0 || j as usize >= self.n_cells {
                continue;
            }
            let j = j as usize;
            if self.cell_left_edge(j) < x && x <= self.cell_right_edge(j) {
                return Ok(j);
            }
        }
        // Only x == x_left falls through the half-open intervals.
        Ok(if guess <= 0 { 0 } else { self.n_cells - 1 })
    }
}

/// Cell values attached to a grid at one simulation time.  Value-semantic and
/// immutable once constructed; all values are checked finite.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid1D,
    values: Vec<f64>,
    time: f64,
}

impl GridFunction {
    pub fn new(grid: Grid1D, values: Vec<f64>, time: f64) -> Result<Self> {
        if values.len() != grid.n_cells() {
            return Err(Error::LengthMismatch {
                expected: grid.n_cells(),
                got: values.len(),
            });
        }
        if !time.is_finite() {
            return Err(Error::NonFiniteTime { t: time });
        }
        for (cell, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteValue {
                    what: "grid function",
                    cell,
                });
            }
        }
        Ok(Self { grid, values, time })
    }

    pub fn grid(&self) -> Grid1D {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    /// Piecewise-constant reconstruction: the value of the cell whose
    /// half-open interval contains `x`.
    pub fn eval_piecewise_constant(&self, x: f64) -> Result<f64> {
        let j = self.grid.cell_containing(x)?;
        Ok(self.values[j])
    }

    /// Piecewise-linear interpolation between adjacent cell-center values,
    /// u(x) = u_j + D⁺u_j·(x - x_j) on [x_j, x_{j+1}].  Outside the range of
    /// cell centers the nearest cell value is returned (clamping).
    pub fn interp_linear(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::OutOfDomain {
                x,
                x_left: self.grid.x_left(),
                x_right: self.grid.x_right(),
            });
        }
        let n = self.values.len();
        let first = self.grid.cell_center(0);
        if n == 1 || x <= first {
            return Ok(self.values[0]);
        }
        if x >= self.grid.cell_center(n - 1) {
            return Ok(self.values[n - 1]);
        }
        let j = (math::floor((x - first) / self.grid.dx()) as usize).min(n - 2);
        let theta = (x - self.grid.cell_center(j)) / self.grid.dx();
        Ok(self.values[j] + (self.values[j + 1] - self.values[j]) * theta)
    }
}

/// Cell averages of the initial datum, u_j(0) = (1/dx)·∫_{I_j} u0 dx,
/// by composite Gauss-Legendre quadrature with `quad_points` nodes per cell.
pub fn cell_average_init(
    u0: impl Fn(f64) -> f64,
    grid: Grid1D,
    quad_points: usize,
) -> Result<GridFunction> {
    assert!(
        quad_points >= 1,
        "need at least one quadrature node per cell"
    );
    let (nodes, weights) = math::gauss_legendre(quad_points);
    let half_dx = 0.5 * grid.dx();
    let mut values = Vec::with_capacity(grid.n_cells());
    for j in 0..grid.n_cells() {
        let c = grid.cell_center(j);
        let mut avg = 0.0;
        for (&xi, &wi) in nodes.iter().zip(&weights) {
            let x = c + half_dx * xi;
            let s = u0(x);
            if !s.is_finite() {
                return Err(Error::NonFiniteSample { cell: j, x });
            }
            avg += wi * s;
        }
        // Σw = 2 on [-1,1], so the cell average is Σw·u/2.
        values.push(0.5 * avg);
    }
    GridFunction::new(grid, values, 0.0)
}

/// Cell values padded with one ghost on each side, the layout the discrete
/// derivatives D± and the scheme stencils operate on.  Interior cell `j`
/// lives at padded index `j + 1`; ghost filling is boundary-condition aware
/// and lives in [`crate::scheme`].
#[derive(Debug, Clone, PartialEq)]
pub struct Ghosted {
    vals: Vec<f64>,
    dx: f64,
}

impl Ghosted {
    /// Pads `values` with one (uninitialized to the endpoint value) ghost on
    /// each side.  Call [`crate::scheme::apply_bc`] before using a stencil
    /// that touches the ghosts.
    pub fn from_interior(values: &[f64], dx: f64) -> Self {
        assert!(!values.is_empty());
        let mut vals = Vec::with_capacity(values.len() + 2);
        vals.push(values[0]);
        vals.extend_from_slice(values);
        vals.push(values[values.len() - 1]);
        Self { vals, dx }
    }

    pub fn n(&self) -> usize {
        self.vals.len() - 2
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn interior(&self) -> &[f64] {
        &self.vals[1..self.vals.len() - 1]
    }

    /// Padded storage, including ghosts; interior cell j is at index j + 1.
    pub fn padded(&self) -> &[f64] {
        &self.vals
    }

    pub(crate) fn padded_mut(&mut self) -> &mut [f64] {
        &mut self.vals
    }

    /// Value at interior index `j` in -1..=n (ghosts at -1 and n).
    pub fn value(&self, j: isize) -> f64 {
        let n = self.n() as isize;
        assert!(
            (-1..=n).contains(&j),
            "index {j} outside the ghost-padded range -1..={n}"
        );
        self.vals[(j + 1) as usize]
    }

    /// Forward difference D⁺v_j = (v_{j+1} - v_j)/dx for interior j.
    pub fn d_plus(&self, j: usize) -> f64 {
        assert!(
            j < self.n(),
            "index {j} outside the interior 0..{}",
            self.n()
        );
        (self.vals[j + 2] - self.vals[j + 1]) / self.dx
    }

    /// Backward difference D⁻v_j = (v_j - v_{j-1})/dx for interior j.
    pub fn d_minus(&self, j: usize) -> f64 {
        assert!(
            j < self.n(),
            "index {j} outside the interior 0..{}",
            self.n()
        );
        (self.vals[j + 1] - self.vals[j]) / self.dx
    }
}
