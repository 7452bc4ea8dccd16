//! Central power-law potentials `U(z, z̄) = k |z|^nu` and the forces and
//! energies they generate.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::State;

/// Default guard radius around the force-center singularity.
pub const DEFAULT_R_MIN: f64 = 1e-12;

/// Central potential `U = k |z|^nu` for a particle of mass `m`.
///
/// The exponent is restricted to `nu > -2`: the conformal duality map
/// `w = z^(1+nu/2)/(1+nu/2)` degenerates at `nu = -2` and produces a
/// complex dual coupling below it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawPotential {
    k: f64,
    nu: f64,
    m: f64,
    r_min: f64,
}

impl PowerLawPotential {
    pub fn new(k: f64, nu: f64, m: f64) -> Result<Self> {
        if !k.is_finite() || !nu.is_finite() || !m.is_finite() {
            return Err(Error::InvalidPotential(
                "k, nu, m must all be finite".into(),
            ));
        }
        if m <= 0.0 {
            return Err(Error::InvalidPotential(format!(
                "mass must be > 0, got {m}"
            )));
        }
        if nu == -2.0 {
            return Err(Error::DegenerateExponent);
        }
        if nu < -2.0 {
            return Err(Error::InvalidPotential(format!(
                "exponent must satisfy nu > -2, got {nu}"
            )));
        }
        Ok(Self {
            k,
            nu,
            m,
            r_min: DEFAULT_R_MIN,
        })
    }

    /// Replace the origin guard radius (default `1e-12`).
    pub fn with_r_min(mut self, r_min: f64) -> Result<Self> {
        if r_min <= 0.0 || !r_min.is_finite() {
            return Err(Error::InvalidPotential(format!(
                "r_min must be positive and finite, got {r_min}"
            )));
        }
        self.r_min = r_min;
        Ok(self)
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn mass(&self) -> f64 {
        self.m
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    /// Hooke stiffness `kappa = 2k` when this is an oscillator potential
    /// (`nu = 2`, where `U = k r^2 = (kappa/2) r^2`), `None` otherwise.
    ///
    /// This is the single conversion site between the power-law coupling
    /// convention and the Hooke-stiffness convention used by the
    /// oscillator-tensor constructors.
    pub fn hooke_stiffness(&self) -> Option<f64> {
        if (self.nu - 2.0).abs() < 1e-12 {
            Some(2.0 * self.k)
        } else {
            None
        }
    }

    /// Potential energy at radius `r`.
    pub fn value_at(&self, r: f64) -> f64 {
        self.k * r.powf(self.nu)
    }
}

/// Acceleration of the complex equation of motion,
/// `z̈ = -(nu k / m) |z|^(nu-2) z`.
///
/// For `nu = 0` (or `k = 0`) the force vanishes identically and the result
/// is exactly zero.
pub fn acceleration(p: &PowerLawPotential, z: Complex64) -> Result<Complex64> {
    if p.nu() == 0.0 || p.k() == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let r = z.norm();
    if p.nu() < 2.0 && r <= p.r_min() {
        return Err(Error::OriginSingularity {
            r,
            r_min: p.r_min(),
        });
    }
    let strength = -(p.nu() * p.k() / p.mass()) * r.powf(p.nu() - 2.0);
    Ok(strength * z)
}

/// Total energy `E = (m/2)|v|^2 + k|z|^nu` of a state.
pub fn energy(p: &PowerLawPotential, s: &State) -> Result<f64> {
    if !s.is_finite() {
        return Err(Error::InvalidState(
            "state has non-finite components".into(),
        ));
    }
    let r = s.radius();
    if p.nu() < 0.0 && r <= p.r_min() {
        return Err(Error::OriginSingularity {
            r,
            r_min: p.r_min(),
        });
    }
    Ok(0.5 * p.mass() * s.v.norm_sqr() + p.value_at(r))
}
