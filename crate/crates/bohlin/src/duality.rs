//! The power-law duality transform: a conformal change of coordinates
//! `w = a z^(1+nu/2)/(1+nu/2)` combined with the fictitious-time change
//! `ds = a^2 |z|^nu dt` maps a motion in `U = k|z|^nu` at energy `E` onto a
//! motion in the dual potential `V = k_dual |w|^mu` at energy `E_dual`,
//! with `(1+nu/2)(1+mu/2) = 1`.
//!
//! Exponents are real, so `z^q` is multi-valued; every trajectory-level
//! operation threads a [`BranchTracker`] that unwraps the argument of `z`
//! along the path and keeps all powers on a single analytic branch.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::dynamics::{Sample, Trajectory};
use crate::error::{Error, Result};
use crate::potential::{PowerLawPotential, DEFAULT_R_MIN};
use crate::state::State;

/// Ambiguity margin for branch tracking: an argument step this close to pi
/// cannot be told apart from a winding in the other direction.
const BRANCH_MARGIN: f64 = 1e-6;

/// Wrap an angle to (-pi, pi].
fn wrap_angle(x: f64) -> f64 {
    let mut a = x % TAU;
    if a > PI {
        a -= TAU;
    } else if a <= -PI {
        a += TAU;
    }
    a
}

/// Continuously unwrapped argument of a complex path.
///
/// The tracker is seeded with the principal argument of the first point;
/// each update picks the branch closest to the previous angle. Updates that
/// move the argument by (nearly) pi are rejected as ambiguous — the path is
/// undersampled or passes through the origin.
#[derive(Debug, Clone, Copy)]
pub struct BranchTracker {
    theta: f64,
    theta_start: f64,
    last_z: Complex64,
}

impl BranchTracker {
    /// Seed at the principal argument of `z`.
    pub fn new(z: Complex64) -> Result<Self> {
        if z.norm() == 0.0 {
            return Err(Error::OriginSingularity { r: 0.0, r_min: 0.0 });
        }
        let theta = z.arg();
        Ok(Self {
            theta,
            theta_start: theta,
            last_z: z,
        })
    }

    /// Seed at an explicit unwrapped angle, which must agree with the
    /// principal argument of `z` modulo 2 pi.
    pub fn seeded(z: Complex64, theta: f64) -> Result<Self> {
        if z.norm() == 0.0 {
            return Err(Error::OriginSingularity { r: 0.0, r_min: 0.0 });
        }
        let delta = wrap_angle(theta - z.arg());
        if delta.abs() > 1e-9 {
            return Err(Error::InvalidState(format!(
                "seed angle {theta} is not congruent to arg(z) = {}",
                z.arg()
            )));
        }
        Ok(Self {
            theta,
            theta_start: theta,
            last_z: z,
        })
    }

    /// Advance to the next point of the path and return its unwrapped
    /// argument.
    pub fn advance(&mut self, z: Complex64) -> Result<f64> {
        if z.norm() == 0.0 {
            return Err(Error::OriginSingularity { r: 0.0, r_min: 0.0 });
        }
        let delta = wrap_angle(z.arg() - self.last_z.arg());
        if delta.abs() >= PI - BRANCH_MARGIN {
            return Err(Error::BranchJump { delta });
        }
        self.theta += delta;
        self.last_z = z;
        Ok(self.theta)
    }

    /// Current unwrapped argument.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Net number of full turns accumulated since the seed point.
    pub fn windings(&self) -> i64 {
        ((self.theta - self.theta_start) / TAU).round() as i64
    }
}

/// `z^q` on the branch where `arg(z) = theta` (continuous, not principal).
fn pow_on_branch(r: f64, theta: f64, q: f64) -> Complex64 {
    Complex64::from_polar(r.powf(q), q * theta)
}

/// Exponent pairing of the duality: `mu = -nu/(1 + nu/2)`, an involution
/// with `(1 + nu/2)(1 + mu/2) = 1`.
pub fn dual_exponent(nu: f64) -> Result<f64> {
    if nu == -2.0 {
        return Err(Error::DegenerateExponent);
    }
    Ok(-nu / (1.0 + 0.5 * nu))
}

/// Full parameter map of one duality transform.
///
/// The generator of the forward map is `u(z) = u_coeff * z^(nu/2)`; the
/// canonical transform produced by [`dual_parameters`] has `u_coeff = 1`,
/// and [`DualityParams::dual`] carries the induced coefficient of the
/// inverse transform so that double dualization is an exact involution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualityParams {
    pub nu: f64,
    pub mu: f64,
    pub k: f64,
    pub k_dual: f64,
    pub e: f64,
    pub e_dual: f64,
    pub m: f64,
    /// Coefficient of the inverse conformal map `z = map_coefficient * w^(1/(1+nu/2))`.
    pub map_coefficient: f64,
    /// Generator coefficient of the forward map (1 for the canonical family).
    pub u_coeff: f64,
    /// Generator coefficient induced on the dual side.
    pub v_coeff: f64,
}

impl DualityParams {
    /// Parameter map for the system `(nu, k, E, m)` with generator
    /// coefficient `a`, i.e. `w = a z^(1+nu/2)/(1+nu/2)`.
    pub fn for_system_with_coeff(nu: f64, k: f64, e: f64, m: f64, a: f64) -> Result<Self> {
        if nu == -2.0 {
            return Err(Error::DegenerateExponent);
        }
        if !nu.is_finite() || nu < -2.0 {
            return Err(Error::InvalidPotential(format!(
                "exponent must satisfy nu > -2, got {nu}"
            )));
        }
        if m <= 0.0 || !m.is_finite() {
            return Err(Error::InvalidPotential(format!(
                "mass must be > 0, got {m}"
            )));
        }
        if !k.is_finite() || !e.is_finite() {
            return Err(Error::InvalidPotential("k and E must be finite".into()));
        }
        if a <= 0.0 || !a.is_finite() {
            return Err(Error::InvalidPotential(format!(
                "generator coefficient must be > 0, got {a}"
            )));
        }
        let mu = dual_exponent(nu)?;
        let q = 1.0 + 0.5 * nu;
        let v_coeff = (q / a).powf(0.5 * mu) / a;
        Ok(Self {
            nu,
            mu,
            k,
            k_dual: -e * v_coeff * v_coeff,
            e,
            e_dual: -k / (a * a),
            m,
            map_coefficient: (q / a).powf(1.0 / q),
            u_coeff: a,
            v_coeff,
        })
    }

    /// Parameter map of the inverse transform, generator coefficient
    /// carried over so that `p.dual().dual()` reproduces `p` exactly.
    pub fn dual(&self) -> Result<Self> {
        Self::for_system_with_coeff(self.mu, self.k_dual, self.e_dual, self.m, self.v_coeff)
    }

    /// The dual motion is free (zero coupling) when the source energy
    /// vanishes; still mappable and integrable, but flagged so front ends
    /// can warn.
    pub fn is_free_dual(&self) -> bool {
        self.k_dual == 0.0
    }

    /// Dual potential as a `PowerLawPotential`.
    pub fn dual_potential(&self) -> Result<PowerLawPotential> {
        PowerLawPotential::new(self.k_dual, self.mu, self.m)
    }
}

/// Canonical parameter map for the system `(nu, k, E, m)`:
/// `mu = -nu/(1+nu/2)`, `E_dual = -k`, `k_dual = -E (1+nu/2)^mu`.
pub fn dual_parameters(nu: f64, k: f64, e: f64, m: f64) -> Result<DualityParams> {
    DualityParams::for_system_with_coeff(nu, k, e, m, 1.0)
}

/// Map one state through the conformal transform:
/// `w = a z^(1+nu/2)/(1+nu/2)`, `w' = v / (a conj(z)^(nu/2))`,
/// with all powers taken on the branch tracked by `branch`.
pub fn map_state(
    state: &State,
    params: &DualityParams,
    branch: &mut BranchTracker,
) -> Result<(Complex64, Complex64)> {
    let r = state.radius();
    if r <= DEFAULT_R_MIN {
        return Err(Error::OriginSingularity {
            r,
            r_min: DEFAULT_R_MIN,
        });
    }
    let theta = branch.advance(state.z)?;
    let q = 1.0 + 0.5 * params.nu;
    let w = params.u_coeff / q * pow_on_branch(r, theta, q);
    // conj(z)^(nu/2) on the same branch has argument -(nu/2) theta.
    let w_prime = state.v / (params.u_coeff * pow_on_branch(r, -theta, 0.5 * params.nu));
    Ok((w, w_prime))
}

/// Invert [`map_state`] on the branch tracked through the `w` path:
/// `z = ((1+nu/2) w / a)^(1/(1+nu/2))`, `v = w' a conj(z)^(nu/2)`.
pub fn unmap_state(
    w: Complex64,
    w_prime: Complex64,
    params: &DualityParams,
    branch: &mut BranchTracker,
) -> Result<(Complex64, Complex64)> {
    let rho = w.norm();
    if rho <= DEFAULT_R_MIN {
        return Err(Error::OriginSingularity {
            r: rho,
            r_min: DEFAULT_R_MIN,
        });
    }
    let theta_w = branch.advance(w)?;
    let q = 1.0 + 0.5 * params.nu;
    let r = (q * rho / params.u_coeff).powf(1.0 / q);
    let theta_z = theta_w / q;
    let z = Complex64::from_polar(r, theta_z);
    let v = w_prime * params.u_coeff * pow_on_branch(r, -theta_z, 0.5 * params.nu);
    Ok((z, v))
}

/// Map a whole trajectory onto its dual: positions and velocities via
/// [`map_state`] with a single branch tracker threaded through the samples
/// in order, and the time roles swapped (the fictitious time `s` becomes
/// the dual time; the original `t` rides along as the dual's own fictitious
/// clock). Returns the dual trajectory and the tracker's net winding count.
pub fn dualize_trajectory_tracked(
    traj: &Trajectory,
    params: &DualityParams,
) -> Result<(Trajectory, i64)> {
    let p = traj.potential();
    if (p.nu() - params.nu).abs() > 1e-12 {
        return Err(Error::MetadataMismatch(format!(
            "trajectory exponent {} vs params {}",
            p.nu(),
            params.nu
        )));
    }
    let k_scale = p.k().abs().max(1.0);
    if (p.k() - params.k).abs() > 1e-9 * k_scale {
        return Err(Error::MetadataMismatch(format!(
            "trajectory coupling {} vs params {}",
            p.k(),
            params.k
        )));
    }
    if (p.mass() - params.m).abs() > 1e-12 * p.mass() {
        return Err(Error::MetadataMismatch(format!(
            "trajectory mass {} vs params {}",
            p.mass(),
            params.m
        )));
    }
    let e0 = traj.initial_energy();
    if (e0 - params.e).abs() > 1e-6 * e0.abs().max(1e-6) {
        return Err(Error::MetadataMismatch(format!(
            "trajectory energy {e0} vs params {}",
            params.e
        )));
    }

    let mut branch = BranchTracker::new(traj.first().z)?;
    let mut dual_samples = Vec::with_capacity(traj.samples().len());
    for smp in traj.samples() {
        let (w, w_prime) = map_state(&smp.state(), params, &mut branch)?;
        dual_samples.push(Sample {
            t: smp.s,
            s: smp.t,
            z: w,
            v: w_prime,
        });
    }
    let dual_potential = params.dual_potential()?;
    let dual = Trajectory::from_samples(
        dual_potential,
        dual_samples,
        format!("dualized({})", traj.integrator()),
    )?;
    Ok((dual, branch.windings()))
}

/// [`dualize_trajectory_tracked`] without the winding count.
pub fn dualize_trajectory(traj: &Trajectory, params: &DualityParams) -> Result<Trajectory> {
    dualize_trajectory_tracked(traj, params).map(|(t, _)| t)
}

/// Pointwise residual of the functional equation tying the conformal map
/// to the potential pair:
/// `| |f'(w)|^2 (E - U(f(w))) - (E_dual - V(w)) |`,
/// evaluated from the parameter map on the principal branch (only
/// magnitudes enter). Errors with `TurningPoint` where `E - U` vanishes.
pub fn functional_residual(w: Complex64, params: &DualityParams) -> Result<f64> {
    let rho = w.norm();
    if rho <= DEFAULT_R_MIN {
        return Err(Error::OriginSingularity {
            r: rho,
            r_min: DEFAULT_R_MIN,
        });
    }
    let q = 1.0 + 0.5 * params.nu;
    let r = params.map_coefficient * rho.powf(1.0 / q);
    let e_minus_u = params.e - params.k * r.powf(params.nu);
    if e_minus_u.abs() < 1e-12 {
        return Err(Error::TurningPoint);
    }
    // |f'(w)|^2 = 1/(a^2 r^nu).
    let fp_sq = 1.0 / (params.u_coeff * params.u_coeff * r.powf(params.nu));
    let rhs = params.e_dual - params.k_dual * rho.powf(params.mu);
    Ok((fp_sq * e_minus_u - rhs).abs())
}
