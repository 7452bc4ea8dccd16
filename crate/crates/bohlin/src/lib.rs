//! Planar central-force dynamics in complex coordinates.
//!
//! A planar motion is represented by its affix `z(t) = x + iy` moving in a
//! power-law potential `U = k|z|^nu`. The crate integrates the equation of
//! motion together with the fictitious-time clock `ds = |z|^nu dt`, applies
//! the conformal duality transform `w = z^(1+nu/2)/(1+nu/2)` that exchanges
//! motions between exponent pairs with `(1+nu/2)(1+mu/2) = 1` (the
//! Levi-Civita map `w = z^2/2` being the oscillator/Kepler special case),
//! and constructs and verifies the conserved quantities living on both
//! sides: energy, angular momentum, the complex oscillator invariant with
//! its symmetric tensor, and the Runge-Lenz affix, tied together by
//! `A = -T/E`.
//!
//! Per-sample evaluation and verification sweeps run in parallel through
//! rayon when the `parallel` feature (default) is enabled; disabling it
//! yields a fully sequential build with the same results.

pub mod conserved;
pub mod duality;
pub mod dynamics;
pub mod error;
pub mod exec;
pub mod interp;
pub mod potential;
pub mod state;
pub mod verify;

pub use conserved::{
    angular_momentum, fjh_complex, fjh_tensor, lrl_affix, lrl_from_fjh, ConservedReport, FjhTensor,
};
pub use duality::{
    dual_exponent, dual_parameters, dualize_trajectory, dualize_trajectory_tracked,
    functional_residual, map_state, unmap_state, BranchTracker, DualityParams,
};
pub use dynamics::{
    drift_report, integrate, ConservedQuantity, IntegratorConfig, Method, Sample, Trajectory,
};
pub use error::{Error, Result};
pub use potential::{acceleration, energy, PowerLawPotential, DEFAULT_R_MIN};
pub use state::State;
pub use verify::{
    dual_eom_residual, functional_residual_scan, identity_suite, overlay_check, CheckStatus,
    VerificationReport, VerifyConfig,
};

pub use num_complex::Complex64;
