//! Engquist-Osher monotone numerical flux.
//!
//! The splitting
//!
//! ```text
//! f⁺(u) = f(0) + ∫₀ᵘ max(f'(s), 0) ds,      f⁻(u) = ∫₀ᵘ min(f'(s), 0) ds
//! ```
//!
//! makes f⁺ nondecreasing, f⁻ nonincreasing and f⁺ + f⁻ = f, and the
//! two-point flux F(u, v) = f⁺(u) + f⁻(v) monotone in the scheme sense.
//!
//! A user-supplied closed-form split takes precedence; otherwise the
//! integrals are evaluated by adaptive composite Simpson quadrature over a
//! declared data range (fluxes with kinks in f' need a closed-form split).

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::problem::{FluxSpec, Problem};

/// How f± are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitMode {
    ClosedForm,
    Quadrature,
}

/// Tolerance for the adaptive quadrature of max/min(f', 0); well below the
/// scheme's truncation error.
const SPLIT_QUAD_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
struct SplitTable {
    lo: f64,
    step: f64,
    plus: Vec<f64>,
    minus: Vec<f64>,
}

impl SplitTable {
    fn lookup(&self, u: f64) -> (f64, f64) {
        let pos = (u - self.lo) / self.step;
        let i = (math::floor(pos) as usize).min(self.plus.len() - 2);
        let theta = (pos - i as f64).clamp(0.0, 1.0);
        (
            self.plus[i] + (self.plus[i + 1] - self.plus[i]) * theta,
            self.minus[i] + (self.minus[i + 1] - self.minus[i]) * theta,
        )
    }
}

/// The Engquist-Osher flux for one [`FluxSpec`]; immutable after
/// construction and safe for concurrent reads.
#[derive(Clone, Debug)]
pub struct EoFlux {
    spec: FluxSpec,
    mode: SplitMode,
    /// Declared data range; enforced in quadrature mode.
    range: (f64, f64),
    /// Initial panel count for the adaptive quadrature.
    quad_resolution: usize,
    cache: Option<SplitTable>,
}

impl EoFlux {
    /// Uses the spec's closed-form split; errors if the spec has none.
    pub fn closed_form(spec: FluxSpec) -> Result<Self> {
        if spec.closed_form_split().is_none() {
            return Err(Error::MissingSplit);
        }
        Ok(Self {
            spec,
            mode: SplitMode::ClosedForm,
            range: (f64::NEG_INFINITY, f64::INFINITY),
            quad_resolution: 0,
            cache: None,
        })
    }

    /// Splits numerically over the declared data range `(lo, hi)`.
    /// f' is evaluated on the convex hull of {0} ∪ [lo, hi].
    pub fn quadrature(spec: FluxSpec, range: (f64, f64), quad_resolution: usize) -> Result<Self> {
        let (lo, hi) = range;
        if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
            return Err(Error::InvalidRange { lo, hi });
        }
        Ok(Self {
            spec,
            mode: SplitMode::Quadrature,
            range,
            quad_resolution: quad_resolution.max(1),
            cache: None,
        })
    }

    /// Closed form when the spec carries a split, else quadrature over the
    /// given data range.
    pub fn for_problem(problem: &Problem, range: (f64, f64)) -> Result<Self> {
        if problem.flux.closed_form_split().is_some() {
            Self::closed_form(problem.flux.clone())
        } else {
            Self::quadrature(problem.flux.clone(), range, 64)
        }
    }

    /// Eagerly tabulates f± on a lattice of the given spacing over the
    /// declared range; lookups then interpolate linearly.  Keep the spacing
    /// at or below dx²/10 so the cache error stays below the scheme error.
    pub fn with_cache(mut self, spacing: f64) -> Result<Self> {
        let (lo, hi) = self.range;
        if !(spacing > 0.0) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidRange { lo, hi });
        }
        let n = ((hi - lo) / spacing) as usize + 2;
        let step = (hi - lo) / (n - 1) as f64;
        let mut plus = Vec::with_capacity(n);
        let mut minus = Vec::with_capacity(n);
        self.cache = None;
        for i in 0..n {
            let u = lo + i as f64 * step;
            plus.push(self.f_plus(u)?);
            minus.push(self.f_minus(u)?);
        }
        self.cache = Some(SplitTable {
            lo,
            step,
            plus,
            minus,
        });
        Ok(self)
    }

    pub fn mode(&self) -> SplitMode {
        self.mode
    }

    pub fn spec(&self) -> &FluxSpec {
        &self.spec
    }

    /// True when the underlying flux is identically zero, letting the scheme
    /// skip the flux loop entirely.
    pub fn is_identically_zero(&self) -> bool {
        self.spec.is_identically_zero()
    }

    fn check_range(&self, u: f64) -> Result<()> {
        let (lo, hi) = self.range;
        if u < lo || u > hi || !u.is_finite() {
            return Err(Error::OutOfRange { u, lo, hi });
        }
        Ok(())
    }

    /// f⁺(u) = f(0) + ∫₀ᵘ max(f'(s), 0) ds; nondecreasing in u.
    pub fn f_plus(&self, u: f64) -> Result<f64> {
        match self.mode {
            SplitMode::ClosedForm => {
                let (fp, _) = self
                    .spec
                    .closed_form_split()
                    .expect("checked at construction");
                Ok(fp(u))
            }
            SplitMode::Quadrature => {
                self.check_range(u)?;
                if let Some(cache) = &self.cache {
                    return Ok(cache.lookup(u).0);
                }
                let integral = self.integrate_split(u, |d| d.max(0.0), "positive part of f'")?;
                Ok(self.spec.f(0.0) + integral)
            }
        }
    }

    /// f⁻(u) = ∫₀ᵘ min(f'(s), 0) ds; nonincreasing in u.
    pub fn f_minus(&self, u: f64) -> Result<f64> {
        match self.mode {
            SplitMode::ClosedForm => {
                let (_, fm) = self
                    .spec
                    .closed_form_split()
                    .expect("checked at construction");
                Ok(fm(u))
            }
            SplitMode::Quadrature => {
                self.check_range(u)?;
                if let Some(cache) = &self.cache {
                    return Ok(cache.lookup(u).1);
                }
                self.integrate_split(u, |d| d.min(0.0), "negative part of f'")
            }
        }
    }

    /// The two-point flux F(u_left, u_right) = f⁺(u_left) + f⁻(u_right).
    pub fn flux(&self, u_left: f64, u_right: f64) -> Result<f64> {
        Ok(self.f_plus(u_left)? + self.f_minus(u_right)?)
    }

    fn integrate_split(
        &self,
        u: f64,
        clamp: impl Fn(f64) -> f64 + Copy,
        what: &str,
    ) -> Result<f64> {
        if u == 0.0 {
            return Ok(0.0);
        }
        let spec = &self.spec;
        let integrand = |s: f64| clamp(spec.f_prime(s));
        let (a, b, sign) = if u > 0.0 {
            (0.0, u, 1.0)
        } else {
            (u, 0.0, -1.0)
        };
        let (value, converged) =
            adaptive_simpson(&integrand, a, b, SPLIT_QUAD_TOL, self.quad_resolution);
        if !converged {
            log::warn!(
                "quadrature split of the {what} did not reach {SPLIT_QUAD_TOL:.0e} on \
                 [{a}, {b}]; f' may oscillate faster than the node spacing"
            );
        }
        Ok(sign * value)
    }
}

/// Adaptive composite Simpson: `init_panels` panels, each refined until the
/// local Richardson estimate meets its share of `tol`.  Returns the value and
/// whether every panel converged before the depth cap.
fn adaptive_simpson(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
    init_panels: usize,
) -> (f64, bool) {
    let panels = init_panels.max(1);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    let mut converged = true;
    for k in 0..panels {
        let lo = a + k as f64 * h;
        let hi = lo + h;
        let mid = 0.5 * (lo + hi);
        let (flo, fmid, fhi) = (f(lo), f(mid), f(hi));
        let whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
        let (v, ok) = simpson_recurse(f, lo, hi, flo, fmid, fhi, whole, tol / panels as f64, 40);
        total += v;
        converged &= ok;
    }
    (total, converged)
}

#[allow(clippy::too_many_arguments)]
fn simpson_recurse(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> (f64, bool) {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return (left + right + delta / 15.0, true);
    }
    if depth == 0 {
        return (left + right + delta / 15.0, false);
    }
    let (lv, lok) = simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1);
    let (rv, rok) = simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    (lv + rv, lok && rok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::FluxSpec;

    fn sin_flux() -> FluxSpec {
        FluxSpec::new(|u| u.sin(), |u| u.cos())
    }

    /// Hand-derived split of f = sin on [-π, π]: f' = cos changes sign at
    /// ±π/2, so f⁺(u) = sin(clamp(u, -π/2, π/2)) and f⁻(u) = sin u - f⁺(u).
    fn sin_split_oracle(u: f64) -> (f64, f64) {
        let plus = u
            .clamp(-core::f64::consts::FRAC_PI_2, core::f64::consts::FRAC_PI_2)
            .sin();
        (plus, u.sin() - plus)
    }

    #[test]
    fn monotone_increasing_flux_splits_trivially() {
        // f(u) = u: f' ≡ 1 > 0, so f⁺ = u and f⁻ = 0.
        let eo = EoFlux::quadrature(FluxSpec::new(|u| u, |_| 1.0), (-4.0, 4.0), 8).unwrap();
        let mut u = -4.0;
        while u <= 4.0 {
            assert!((eo.f_plus(u).unwrap() - u).abs() <= 1e-12);
            assert_eq!(eo.f_minus(u).unwrap(), 0.0);
            u += 0.37;
        }
    }

    #[test]
    fn burgers_split_values() {
        let eo = EoFlux::closed_form(FluxSpec::burgers()).unwrap();
        assert_eq!(eo.f_plus(1.0).unwrap(), 0.5);
        assert_eq!(eo.f_minus(-1.0).unwrap(), 0.5);
        assert_eq!(eo.flux(1.0, -1.0).unwrap(), 1.0);
        // Transonic rarefaction states: both one-sided integrals vanish.
        assert_eq!(eo.flux(-1.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn quadrature_split_matches_hand_oracle_for_sin() {
        let eo = EoFlux::quadrature(
            sin_flux(),
            (-core::f64::consts::PI, core::f64::consts::PI),
            16,
        )
        .unwrap();
        let mut u = -core::f64::consts::PI;
        while u <= core::f64::consts::PI {
            let (op, om) = sin_split_oracle(u);
            assert!((eo.f_plus(u).unwrap() - op).abs() <= 1e-9, "u={u}");
            assert!((eo.f_minus(u).unwrap() - om).abs() <= 1e-9, "u={u}");
            u += 0.093;
        }
    }

    #[test]
    fn quadrature_rejects_out_of_range() {
        let eo = EoFlux::quadrature(sin_flux(), (-1.0, 1.0), 8).unwrap();
        assert!(matches!(
            eo.f_plus(1.5),
            Err(Error::OutOfRange { u, .. }) if u == 1.5
        ));
        assert!(eo.flux(0.5, -2.0).is_err());
    }

    #[test]
    fn splitting_identity_on_a_thousand_samples() {
        let eo = EoFlux::quadrature(sin_flux(), (-3.0, 3.0), 16).unwrap();
        for k in 0..1000 {
            let u = -3.0 + 6.0 * (k as f64 + 0.5) / 1000.0;
            let sum = eo.f_plus(u).unwrap() + eo.f_minus(u).unwrap();
            assert!(
                (sum - u.sin()).abs() <= 1e-10 * u.sin().abs().max(1.0),
                "u={u}: {sum} vs {}",
                u.sin()
            );
        }
    }

    #[test]
    fn consistency_and_monotonicity_on_a_lattice() {
        let eo = EoFlux::closed_form(FluxSpec::burgers()).unwrap();
        let lattice: Vec<f64> = (0..41).map(|k| -2.0 + 0.1 * k as f64).collect();
        for &u in &lattice {
            // F(u, u) = f(u); exact for closed-form splits.
            assert!((eo.flux(u, u).unwrap() - 0.5 * u * u).abs() <= 1e-15);
        }
        // Nondecreasing in the first argument, nonincreasing in the second.
        for &v in &lattice {
            for w in lattice.windows(2) {
                assert!(eo.flux(w[0], v).unwrap() <= eo.flux(w[1], v).unwrap());
                assert!(eo.flux(v, w[0]).unwrap() >= eo.flux(v, w[1]).unwrap());
            }
        }
    }

    #[test]
    fn decreasing_flux_reduces_to_downwind_value() {
        // f' < 0 everywhere: F(u, v) = f(v).
        let spec = FluxSpec::new(|u| -2.0 * u, |_| -2.0);
        let eo = EoFlux::quadrature(spec, (-2.0, 2.0), 8).unwrap();
        let mut u = -2.0;
        while u <= 2.0 {
            let v = -u * 0.7 + 0.1;
            assert!((eo.flux(u, v).unwrap() - (-2.0 * v)).abs() <= 1e-11);
            u += 0.29;
        }
    }

    #[test]
    fn lipschitz_bound_on_sampled_quadruples() {
        let eo = EoFlux::quadrature(sin_flux(), (-3.0, 3.0), 16).unwrap();
        let lip = 1.0; // |f'| = |cos| <= 1
        let pts: Vec<f64> = (0..25).map(|k| -3.0 + 0.25 * k as f64).collect();
        for &u in &pts {
            for &v in &pts {
                let (u2, v2) = (v.min(2.9), u.max(-2.9));
                let lhs = (eo.flux(u, v).unwrap() - eo.flux(u2, v2).unwrap()).abs();
                let rhs = lip * ((u - u2).abs() + (v - v2).abs());
                assert!(lhs <= rhs + 1e-9);
            }
        }
    }

    #[test]
    fn cache_tracks_direct_evaluation() {
        let direct = EoFlux::quadrature(sin_flux(), (-2.0, 2.0), 16).unwrap();
        let cached = direct.clone().with_cache(1e-3).unwrap();
        let mut u = -2.0;
        while u <= 2.0 {
            let d = direct.f_plus(u).unwrap();
            let c = cached.f_plus(u).unwrap();
            // Linear interpolation error ~ spacing²·max|f''|/8.
            assert!((d - c).abs() <= 1e-6, "u={u}: {d} vs {c}");
            u += 0.0137;
        }
    }
}
