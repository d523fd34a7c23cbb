//! Problem specifications: flux f with its Engquist-Osher splitting hooks,
//! nondecreasing diffusion A, boundary conditions and the assembled initial
//! value problem u_t + f(u)_x = A(u)_xx on a finite domain.

use alloc::sync::Arc;
use core::fmt;

use crate::error::{Error, Result};
use crate::grid::Grid1D;

/// Shared scalar function handle used for f, f', A, A' and initial data.
pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

fn real_fn(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> RealFn {
    Arc::new(f)
}

/// Convective flux f together with its derivative and optional extras:
/// a user bound on |f'| over the data range and a closed-form monotone
/// splitting (f⁺, f⁻) that takes precedence over numerical splitting.
#[derive(Clone)]
pub struct FluxSpec {
    f: RealFn,
    f_prime: RealFn,
    lipschitz_hint: Option<f64>,
    split: Option<(RealFn, RealFn)>,
    identically_zero: bool,
}

impl FluxSpec {
    pub fn new(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        f_prime: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            f: real_fn(f),
            f_prime: real_fn(f_prime),
            lipschitz_hint: None,
            split: None,
            identically_zero: false,
        }
    }

    /// f ≡ 0 (pure diffusion problems).  The scheme skips the flux loop.
    pub fn zero() -> Self {
        let mut spec = Self::new(|_| 0.0, |_| 0.0)
            .with_lipschitz_hint(0.0)
            .with_closed_form_split(|_| 0.0, |_| 0.0);
        spec.identically_zero = true;
        spec
    }

    /// Linear transport f(u) = a·u with its exact splitting.
    pub fn linear(speed: f64) -> Self {
        let base = Self::new(move |u| speed * u, move |_| speed).with_lipschitz_hint(speed.abs());
        if speed >= 0.0 {
            base.with_closed_form_split(move |u| speed * u, |_| 0.0)
        } else {
            base.with_closed_form_split(|_| 0.0, move |u| speed * u)
        }
    }

    /// Burgers flux f(u) = u²/2; f⁺(u) = max(u,0)²/2, f⁻(u) = min(u,0)²/2.
    pub fn burgers() -> Self {
        Self::new(|u| 0.5 * u * u, |u| u).with_closed_form_split(
            |u| 0.5 * u.max(0.0) * u.max(0.0),
            |u| 0.5 * u.min(0.0) * u.min(0.0),
        )
    }

    pub fn with_lipschitz_hint(mut self, bound: f64) -> Self {
        self.lipschitz_hint = Some(bound);
        self
    }

    pub fn with_closed_form_split(
        mut self,
        f_plus: impl Fn(f64) -> f64 + Send + Sync + 'static,
        f_minus: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.split = Some((real_fn(f_plus), real_fn(f_minus)));
        self
    }

    pub fn f(&self, u: f64) -> f64 {
        (self.f)(u)
    }

    pub fn f_prime(&self, u: f64) -> f64 {
        (self.f_prime)(u)
    }

    pub fn lipschitz_hint(&self) -> Option<f64> {
        self.lipschitz_hint
    }

    pub fn closed_form_split(&self) -> Option<(&RealFn, &RealFn)> {
        self.split.as_ref().map(|(p, m)| (p, m))
    }

    pub fn is_identically_zero(&self) -> bool {
        self.identically_zero
    }
}

impl fmt::Debug for FluxSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FluxSpec")
            .field("lipschitz_hint", &self.lipschitz_hint)
            .field("closed_form_split", &self.split.is_some())
            .field("identically_zero", &self.identically_zero)
            .finish()
    }
}

/// Nondecreasing diffusion function A with derivative A' ≥ 0.  `eta` records
/// how much linear regularization A ↦ A + ηu has been folded in (0 if none).
#[derive(Clone)]
pub struct DiffusionSpec {
    a: RealFn,
    a_prime: RealFn,
    eta: f64,
    identically_zero: bool,
}

impl DiffusionSpec {
    pub fn new(
        a: impl Fn(f64) -> f64 + Send + Sync + 'static,
        a_prime: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            a: real_fn(a),
            a_prime: real_fn(a_prime),
            eta: 0.0,
            identically_zero: false,
        }
    }

    /// A ≡ 0: the hyperbolic conservation-law limit.
    pub fn zero() -> Self {
        let mut spec = Self::new(|_| 0.0, |_| 0.0);
        spec.identically_zero = true;
        spec
    }

    /// Linear diffusion A(u) = k·u (heat equation for k > 0).
    pub fn linear(coeff: f64) -> Self {
        Self::new(move |u| coeff * u, move |_| coeff)
    }

    pub fn a(&self, u: f64) -> f64 {
        (self.a)(u)
    }

    pub fn a_prime(&self, u: f64) -> f64 {
        (self.a_prime)(u)
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn is_identically_zero(&self) -> bool {
        self.identically_zero
    }

    pub(crate) fn regularized(&self, eta: f64) -> Result<Self> {
        if !(eta >= 0.0) {
            return Err(Error::NegativeEta { eta });
        }
        let a = self.a.clone();
        let a_prime = self.a_prime.clone();
        Ok(Self {
            a: real_fn(move |u| a(u) + eta * u),
            a_prime: real_fn(move |u| a_prime(u) + eta),
            eta: self.eta + eta,
            identically_zero: self.identically_zero && eta == 0.0,
        })
    }
}

impl fmt::Debug for DiffusionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DiffusionSpec")
            .field("eta", &self.eta)
            .field("identically_zero", &self.identically_zero)
            .finish()
    }
}

/// Ghost-cell boundary treatment.
///
/// * `ZeroDiffusiveFlux` imposes ∂_x A(u) = 0 at both walls by mirroring the
///   adjacent interior cell into the ghost (which also zeroes D±u across the
///   wall, so the convective stencil sees a mirror as well).
/// * `Periodic` wraps the indices.
/// * `Extrapolate` copies the boundary cell into the ghost, a free-space
///   surrogate for compactly supported data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryCondition {
    ZeroDiffusiveFlux,
    Periodic,
    Extrapolate,
}

/// The assembled initial value problem on a finite domain.
#[derive(Clone)]
pub struct Problem {
    pub flux: FluxSpec,
    pub diffusion: DiffusionSpec,
    pub bc: BoundaryCondition,
    pub u0: RealFn,
    pub grid: Grid1D,
    pub t_final: f64,
}

impl Problem {
    /// `t_final` must be finite and non-negative; `t_final = 0` describes a
    /// zero-step problem whose trajectory is the projected initial datum.
    pub fn new(
        flux: FluxSpec,
        diffusion: DiffusionSpec,
        bc: BoundaryCondition,
        u0: impl Fn(f64) -> f64 + Send + Sync + 'static,
        grid: Grid1D,
        t_final: f64,
    ) -> Result<Self> {
        if !t_final.is_finite() || t_final < 0.0 {
            return Err(Error::BadFinalTime { t_final });
        }
        Ok(Self {
            flux,
            diffusion,
            bc,
            u0: real_fn(u0),
            grid,
            t_final,
        })
    }

    /// Same problem with the diffusion replaced (grids, data and flux kept).
    pub fn with_diffusion(&self, diffusion: DiffusionSpec) -> Self {
        Self {
            diffusion,
            ..self.clone()
        }
    }

    /// Same problem re-meshed with `n_cells` cells.
    pub fn with_resolution(&self, n_cells: usize) -> Result<Self> {
        let grid = Grid1D::new(self.grid.x_left(), self.grid.x_right(), n_cells)?;
        Ok(Self {
            grid,
            ..self.clone()
        })
    }
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("flux", &self.flux)
            .field("diffusion", &self.diffusion)
            .field("bc", &self.bc)
            .field("grid", &self.grid)
            .field("t_final", &self.t_final)
            .finish()
    }
}
