//! Run configuration: a serializable description of one solver run, mapping
//! registered flux/diffusion/data kinds onto the core problem types.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use convdiff_core::{
    BoundaryCondition, ConeSpec, DiffusionSpec, FluxSpec, Grid1D, Problem, TimeStepper,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FluxKind {
    /// f ≡ 0 (pure diffusion).
    Zero,
    /// f(u) = speed·u.
    Linear { speed: f64 },
    /// f(u) = u²/2.
    Burgers,
}

impl FluxKind {
    pub fn build(&self) -> FluxSpec {
        match *self {
            FluxKind::Zero => FluxSpec::zero(),
            FluxKind::Linear { speed } => FluxSpec::linear(speed),
            FluxKind::Burgers => FluxSpec::burgers(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DiffusionKind {
    /// A ≡ 0 (conservation law).
    Zero,
    /// A(u) = coeff·u (heat equation).
    Linear { coeff: f64 },
    /// A(u) = max(u, 0)²/2: degenerate, frozen for u ≤ 0.
    SquaredPositivePart,
}

impl DiffusionKind {
    pub fn build(&self) -> DiffusionSpec {
        match *self {
            DiffusionKind::Zero => DiffusionSpec::zero(),
            DiffusionKind::Linear { coeff } => DiffusionSpec::linear(coeff),
            DiffusionKind::SquaredPositivePart => {
                DiffusionSpec::new(|u| 0.5 * u.max(0.0) * u.max(0.0), |u| u.max(0.0))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InitialDataKind {
    Constant {
        value: f64,
    },
    Sine,
    /// left for x < center, right for x ≥ center.
    RiemannStep {
        left: f64,
        right: f64,
        center: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BcKind {
    ZeroDiffusiveFlux,
    Periodic,
    Extrapolate,
}

impl From<BcKind> for BoundaryCondition {
    fn from(kind: BcKind) -> Self {
        match kind {
            BcKind::ZeroDiffusiveFlux => BoundaryCondition::ZeroDiffusiveFlux,
            BcKind::Periodic => BoundaryCondition::Periodic,
            BcKind::Extrapolate => BoundaryCondition::Extrapolate,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeConfig {
    pub l: f64,
    pub m: f64,
}

impl ConeConfig {
    pub fn build(&self) -> Result<ConeSpec> {
        Ok(ConeSpec::new(self.l, self.m)?)
    }
}

fn default_cfl_safety() -> f64 {
    0.5
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("convdiff-out")
}

/// One run, fully described.  Serializes to TOML losslessly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub flux: FluxKind,
    pub diffusion: DiffusionKind,
    /// Extra viscous regularization folded onto the diffusion: A ↦ A + ηu.
    #[serde(default)]
    pub eta: f64,
    pub bc: BcKind,
    pub x_left: f64,
    pub x_right: f64,
    pub u0: InitialDataKind,
    pub n_cells: usize,
    pub t_final: f64,
    /// Empty means {0, t_final}.
    #[serde(default)]
    pub snapshot_times: Vec<f64>,
    #[serde(default = "default_cfl_safety")]
    pub cfl_safety: f64,
    #[serde(default)]
    pub cone: Option<ConeConfig>,
    /// Fine self-reference resolution for convergence runs.
    #[serde(default)]
    pub reference_resolution: Option<usize>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

impl RunConfig {
    pub fn problem(&self) -> Result<Problem> {
        let grid = Grid1D::new(self.x_left, self.x_right, self.n_cells)?;
        let mut diffusion = self.diffusion.build();
        if self.eta != 0.0 {
            diffusion = convdiff_core::regularize_diffusion(&diffusion, self.eta)?;
        }
        let problem = match self.u0 {
            InitialDataKind::Constant { value } => Problem::new(
                self.flux.build(),
                diffusion,
                self.bc.into(),
                move |_| value,
                grid,
                self.t_final,
            ),
            InitialDataKind::Sine => Problem::new(
                self.flux.build(),
                diffusion,
                self.bc.into(),
                |x: f64| x.sin(),
                grid,
                self.t_final,
            ),
            InitialDataKind::RiemannStep {
                left,
                right,
                center,
            } => Problem::new(
                self.flux.build(),
                diffusion,
                self.bc.into(),
                move |x: f64| if x < center { left } else { right },
                grid,
                self.t_final,
            ),
        }?;
        Ok(problem)
    }

    pub fn stepper(&self, problem: &Problem) -> Result<TimeStepper> {
        Ok(TimeStepper::for_problem(problem)?.with_safety(self.cfl_safety)?)
    }

    /// The snapshot times actually used: {0, t_final} when none are given.
    pub fn effective_snapshot_times(&self) -> Vec<f64> {
        if !self.snapshot_times.is_empty() {
            return self.snapshot_times.clone();
        }
        if self.t_final > 0.0 {
            vec![0.0, self.t_final]
        } else {
            vec![0.0]
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string_pretty(self)?)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).context("malformed run config")?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        #![allow(clippy::neg_cmp_op_on_partial_ord)] // NaN-rejecting guards
        if self.n_cells == 0 {
            bail!("n_cells must be positive");
        }
        if !(self.x_left < self.x_right) {
            bail!("domain is empty: [{}, {}]", self.x_left, self.x_right);
        }
        if !(self.cfl_safety > 0.0 && self.cfl_safety <= 1.0) {
            bail!("cfl_safety {} not in (0, 1]", self.cfl_safety);
        }
        if self.eta < 0.0 {
            bail!("eta must be non-negative, got {}", self.eta);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    #[test]
    fn toml_round_trip_is_lossless() {
        // Awkward floats (π endpoints, 0.1+0.2) must survive the round trip.
        let mut config = presets::section4_config(400);
        config.eta = 0.1 + 0.2;
        config.snapshot_times = vec![0.0, 0.30000000000000004, 1.0];
        let text = config.to_toml().unwrap();
        let back = RunConfig::from_toml(&text).unwrap();
        assert_eq!(back, config);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = format!(
            "bogus_field = 3\n{}",
            presets::heat_config(32).to_toml().unwrap()
        );
        assert!(RunConfig::from_toml(&text).is_err());
    }

    #[test]
    fn config_builds_the_expected_problem() {
        let config = presets::section4_config(100);
        let problem = config.problem().unwrap();
        assert_eq!(problem.grid.n_cells(), 100);
        assert!(problem.flux.is_identically_zero());
        // A(1) = 1/2, A(-1) = 0.
        assert_eq!(problem.diffusion.a(1.0), 0.5);
        assert_eq!(problem.diffusion.a(-1.0), 0.0);
        assert_eq!(problem.t_final, 1.0);
    }

    #[test]
    fn eta_field_regularizes_diffusion() {
        let mut config = presets::burgers_riemann_config(100, 0.0);
        config.eta = 0.01;
        let problem = config.problem().unwrap();
        assert!((problem.diffusion.a(2.0) - 0.02).abs() <= 1e-15);
        assert_eq!(problem.diffusion.eta(), 0.01);
    }
}
