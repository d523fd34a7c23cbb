//! Error type shared by the whole crate.

use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid domain: x_left = {x_left} must be below x_right = {x_right}")]
    InvalidDomain { x_left: f64, x_right: f64 },

    #[error("grid needs at least one cell")]
    EmptyGrid,

    #[error("value count {got} does not match grid cell count {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("non-finite value in {what} at cell {cell}")]
    NonFiniteValue { what: &'static str, cell: usize },

    #[error("initial datum is non-finite at x = {x} (cell {cell})")]
    NonFiniteSample { cell: usize, x: f64 },

    #[error("non-finite time value {t}")]
    NonFiniteTime { t: f64 },

    #[error("x = {x} lies outside the domain [{x_left}, {x_right}]")]
    OutOfDomain { x: f64, x_left: f64, x_right: f64 },

    #[error("closed-form split requested but the flux does not carry one")]
    MissingSplit,

    #[error("u = {u} outside the declared data range [{lo}, {hi}] of the quadrature split")]
    OutOfRange { u: f64, lo: f64, hi: f64 },

    #[error("invalid data range: [{lo}, {hi}]")]
    InvalidRange { lo: f64, hi: f64 },

    #[error("CFL safety factor {safety} not in (0, 1]")]
    InvalidSafety { safety: f64 },

    #[error("no time scale: both derivative bounds are zero and no fixed dt is set")]
    NoTimeScale,

    #[error("fixed dt = {fixed_dt} exceeds the CFL bound {bound}")]
    FixedDtTooLarge { fixed_dt: f64, bound: f64 },

    #[error("non-finite right-hand side at cell {cell} (t = {time})")]
    NonFiniteRhs { cell: usize, time: f64 },

    #[error("non-finite state at cell {cell} after the step to t = {time}")]
    NonFiniteState { cell: usize, time: f64 },

    #[error("snapshot times must be strictly increasing and inside [0, {t_final}]; got {t}")]
    BadSnapshotTime { t: f64, t_final: f64 },

    #[error("t_final = {t_final} must be finite and non-negative")]
    BadFinalTime { t_final: f64 },

    #[error("grids are not nested: {reason}")]
    GridMismatch { reason: &'static str },

    #[error("times differ: {a} vs {b}")]
    TimeMismatch { a: f64, b: f64 },

    #[error("cone is empty at t = {t}")]
    EmptyCone { t: f64 },

    #[error("cone parameters invalid: L = {l}, M = {m}")]
    InvalidCone { l: f64, m: f64 },

    #[error("denominator norm is zero")]
    ZeroNorm,

    #[error("grid sizes must double at every refinement: {prev} then {next}")]
    NotDoubling { prev: usize, next: usize },

    #[error("errors must be positive to fit a rate; got {value}")]
    NonPositiveError { value: f64 },

    #[error("{what} needs at least {needed} entries, got {got}")]
    TooFewEntries {
        what: &'static str,
        needed: usize,
        got: usize,
    },

    #[error("snapshot spacing is not uniform: expected {expected}, got {got}")]
    NonUniformSnapshots { expected: f64, got: f64 },

    #[error("regularization parameter eta = {eta} must be non-negative")]
    NegativeEta { eta: f64 },

    #[error("eta values must be strictly decreasing and positive; got {eta}")]
    BadEtaSequence { eta: f64 },

    #[error("experiment requires a problem with identically zero diffusion")]
    DiffusionNotZero,
}
