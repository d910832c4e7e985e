//! Spin-metrology toolkit.
//!
//! Builds generalized superpositions of atomic (spin) coherent states in the
//! Dicke basis, evaluates spin-squeezing and planar-quantum-squeezing
//! parameters, globally optimizes them over the four-parameter state family,
//! and simulates Ramsey interferometry with Fisher-information bounds.
//!
//! Conventions used throughout:
//! - A total spin `J` is stored as the integer `2J` ([`Spin`]), so half-integer
//!   spins are exact.
//! - Dicke amplitudes are indexed with position `0` holding `M = -J`,
//!   ascending to `M = +J`.
//! - All angles are radians; `hbar = 1`.

pub mod fit;
pub mod metrics;
pub mod optimize;
pub mod ramsey;
pub mod spin;
pub mod states;

pub use fit::{fit_inverse_j, FitResult};
pub use metrics::{
    cfi, depth_check, qfi, qfi_axis, squeezing_report, xi_planar, xi_sorensen, xi_sorensen_axis,
    xi_wineland, xi_wineland_min, Axis, AxisValues, DepthTable, DepthVerdict, Plane, PlaneValues,
    SqueezingReport,
};
pub use optimize::{
    default_bounds, grid_oracle, minimize_metric, splitmix64, sweep_j, sweep_seed, Bounds,
    GridResult, Metric, OptimizationResult, Options,
};
pub use ramsey::{
    align_for_ramsey, heisenberg_from_moments, heisenberg_moments, phase_scan, phase_uncertainty,
    phase_uncertainty_from_moments, ramsey_evolve, ramsey_evolve_steps, HeisenbergMoments,
    PhaseScan,
};
pub use spin::{make_operators, moments, rotate, AngularMomentumOps, MomentSet, Spin, SpinState};
pub use states::{acs, gerry_grobe, mes, superposition, ACSParams, Sign, SuperpositionParams};

/// Tolerance for algebraic identities (commutators, Casimir, normalization).
pub const ALG_TOL: f64 = 1e-12;
/// Tolerance for propagated quantities (moment propagation, inversion round trips).
pub const PROP_TOL: f64 = 1e-10;
/// Threshold below which a squeezing-metric denominator is reported undefined.
pub const DENOM_TOL: f64 = 1e-12;
/// Pre-normalization norm below which a two-branch superposition is rejected as null.
pub const NULL_TOL: f64 = 1e-14;
/// Mean-spin length below which the mean spin direction is reported undefined.
pub const MSD_TOL: f64 = 1e-9;

/// Errors across the toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid spin: 2J must be a positive integer, got {0}")]
    InvalidSpin(i64),
    #[error("amplitude vector has length {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("spin mismatch: state has 2J = {state}, operators have 2J = {ops}")]
    SpinMismatch { state: u32, ops: u32 },
    #[error("state not normalized: |norm^2 - 1| = {0:e}")]
    NotNormalized(f64),
    #[error("norm too small to normalize: {0:e}")]
    ZeroNorm(f64),
    #[error("polar angle {0} outside [0, pi]")]
    ThetaOutOfRange(f64),
    #[error("rotation axis is not a unit vector: |axis| = {0}")]
    NonUnitAxis(f64),
    #[error("rotation angle is not finite")]
    NonFiniteAngle,
    #[error("null superposition: the two branches cancel (pre-normalization norm {0:e})")]
    NullSuperposition(f64),
    #[error("unknown metric name: {0}")]
    UnknownMetric(String),
    #[error("optimization budget must be positive")]
    ZeroBudget,
    #[error("grid of {requested} points exceeds the {limit} point guard")]
    GridGuard { requested: u128, limit: u128 },
    #[error("grid resolution must be at least 3, got {0}")]
    GridResolution(usize),
    #[error("optimization failed for 2J = {two_j}: {source}")]
    SweepEntry {
        two_j: u32,
        #[source]
        source: Box<Error>,
    },
    #[error("least-squares design is rank-deficient (duplicate degrees or too few points)")]
    RankDeficient,
    #[error("need at least {need} points for {need} basis functions, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("fit points must have positive, distinct J values")]
    BadFitPoints,
    #[error(
        "depth table bounds must be positive, at most 0.5, keyed from k >= 1, and non-increasing"
    )]
    BadDepthTable,
}

/// Convenience alias used by every fallible operation in the crate.
pub type Result<T> = std::result::Result<T, Error>;
