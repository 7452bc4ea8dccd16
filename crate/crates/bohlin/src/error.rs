//! Error types shared across the crate.

use thiserror::Error;

/// Everything that can go wrong while building potentials, integrating,
/// mapping trajectories, or evaluating verification checks.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A state came closer to the force-center singularity than the
    /// configured guard radius allows.
    #[error("origin singularity: |z| = {r:.3e} <= r_min = {r_min:.3e}")]
    OriginSingularity { r: f64, r_min: f64 },

    /// Exponent -2 degenerates the conformal map (1 + nu/2 = 0).
    #[error("degenerate exponent: nu = -2 is outside the duality family")]
    DegenerateExponent,

    /// Potential parameters violate an invariant (mass, finiteness, range).
    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    /// A state contains NaN or infinite components.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// Integrator configuration rejected before stepping.
    #[error("invalid integrator config: {0}")]
    InvalidConfig(String),

    /// The adaptive controller shrank the step below the representable floor.
    #[error("step failure at t = {t:.6e}: step size underflow (h = {h:.3e})")]
    StepFailure { t: f64, h: f64 },

    /// Runge-Lenz construction with a vanishing dual coupling.
    #[error("degenerate coupling: k_dual = 0 (dual motion is free)")]
    DegenerateCoupling,

    /// Hooke-to-Kepler quantity ratio undefined at zero energy.
    #[error("zero energy: |E| below floor, dual coupling vanishes")]
    ZeroEnergy,

    /// Consecutive samples are too far apart in angle to track the branch.
    #[error("branch jump: argument moved {delta:.3} rad between samples (ambiguous winding)")]
    BranchJump { delta: f64 },

    /// Trajectory metadata disagrees with the supplied duality parameters.
    #[error("metadata mismatch: {0}")]
    MetadataMismatch(String),

    /// A conserved-quantity report was requested for a potential that does
    /// not admit that quantity.
    #[error("inapplicable quantity: {0}")]
    InapplicableQuantity(String),

    /// Finite-difference checks need a minimum sample count.
    #[error("too few samples: got {got}, need at least {need}")]
    TooFewSamples { got: usize, need: usize },

    /// The functional-equation denominator E - U vanishes at the probe point.
    #[error("turning point: |E - U| below 1e-12 at the probe point")]
    TurningPoint,
}

pub type Result<T> = std::result::Result<T, Error>;
