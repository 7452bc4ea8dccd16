//! Conserved-quantity constructors: angular momentum, the complex
//! oscillator invariant and its tensor form, and the Runge-Lenz affix of
//! the dual Kepler motion.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::State;

/// Denominator floor for relative drifts, so that identically-zero
/// invariants (e.g. the oscillator invariant on a circular orbit) stay
/// reportable through the absolute drift.
pub const DRIFT_FLOOR: f64 = 1e-300;

/// Angular momentum `L = m Im(z̄ v)`, the complex correspondent of
/// `m r × ṙ`. Conserved along any central-potential motion.
pub fn angular_momentum(s: &State, mass: f64) -> f64 {
    mass * (s.z.conj() * s.v).im
}

/// Complex invariant of the isotropic oscillator,
/// `T = (m/2) v^2 + (kappa/2) z^2`.
///
/// `kappa` is the Hooke stiffness of `U = (kappa/2) r^2`. The quantity is
/// defined for any state but is constant only along oscillator motions.
pub fn fjh_complex(s: &State, kappa: f64, mass: f64) -> Complex64 {
    0.5 * mass * s.v * s.v + 0.5 * kappa * s.z * s.z
}

/// Symmetric 2x2 tensor invariant of the isotropic oscillator (the
/// Fradkin-Jauch-Hill tensor), in energy units. Only the three independent
/// entries are stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FjhTensor {
    pub t11: f64,
    pub t12: f64,
    pub t22: f64,
}

impl FjhTensor {
    /// Trace, equal to the oscillator energy of the generating state.
    pub fn trace(&self) -> f64 {
        self.t11 + self.t22
    }

    /// The complex invariant reassembled from the tensor entries:
    /// `(T11 - T22) + 2i T12`.
    ///
    /// Direct expansion of `(m/2)(ẋ + iẏ)^2 + (kappa/2)(x + iy)^2` forces
    /// the factor 2 on the imaginary part.
    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.t11 - self.t22, 2.0 * self.t12)
    }
}

/// Oscillator tensor of a state:
/// `T11 = (m/2)ẋ² + (kappa/2)x²`, `T22` likewise in y, and
/// `T12 = (m/2)ẋẏ + (kappa/2)xy`.
pub fn fjh_tensor(s: &State, kappa: f64, mass: f64) -> FjhTensor {
    let (x, y) = (s.z.re, s.z.im);
    let (vx, vy) = (s.v.re, s.v.im);
    FjhTensor {
        t11: 0.5 * mass * vx * vx + 0.5 * kappa * x * x,
        t12: 0.5 * mass * vx * vy + 0.5 * kappa * x * y,
        t22: 0.5 * mass * vy * vy + 0.5 * kappa * y * y,
    }
}

/// Laplace-Runge-Lenz affix of a Kepler state `(w, w')` in
/// `V = k_dual |w|^(-1)`:
///
/// `A = i w' L̃ / k_dual - w/|w|`, with `L̃ = m Im(w̄ w')`.
///
/// Conserved along Kepler motions; its modulus is the orbit eccentricity.
pub fn lrl_affix(w: Complex64, w_prime: Complex64, k_dual: f64, mass: f64) -> Result<Complex64> {
    let rho = w.norm();
    if rho == 0.0 {
        return Err(Error::OriginSingularity { r: 0.0, r_min: 0.0 });
    }
    if k_dual == 0.0 {
        return Err(Error::DegenerateCoupling);
    }
    let l_dual = mass * (w.conj() * w_prime).im;
    Ok(Complex64::i() * w_prime * l_dual / k_dual - w / rho)
}

/// Runge-Lenz affix as the ratio of the two conserved quantities of the
/// oscillator/Kepler pair: `A = -T / E`.
pub fn lrl_from_fjh(t: Complex64, e: f64) -> Result<Complex64> {
    if e.abs() < DRIFT_FLOOR {
        return Err(Error::ZeroEnergy);
    }
    Ok(-t / e)
}

/// Measured values of one conserved quantity along a trajectory, with the
/// worst absolute and relative departures from the initial value.
#[derive(Debug, Clone)]
pub struct ConservedReport {
    /// Quantity label ("energy", "angular_momentum", ...).
    pub quantity: String,
    /// `(t, value)` pairs; real quantities carry a zero imaginary part.
    pub samples: Vec<(f64, Complex64)>,
    /// Value at the first sample.
    pub initial: Complex64,
    pub max_abs_drift: f64,
    pub max_rel_drift: f64,
}

impl ConservedReport {
    /// Build a report from measured samples. The relative drift divides by
    /// `max(|initial|, DRIFT_FLOOR)`.
    pub fn new(quantity: impl Into<String>, samples: Vec<(f64, Complex64)>) -> Self {
        let initial = samples.first().map(|&(_, v)| v).unwrap_or_default();
        let max_abs_drift = samples
            .iter()
            .map(|&(_, v)| (v - initial).norm())
            .fold(0.0, f64::max);
        let max_rel_drift = max_abs_drift / initial.norm().max(DRIFT_FLOOR);
        Self {
            quantity: quantity.into(),
            samples,
            initial,
            max_abs_drift,
            max_rel_drift,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn angular_momentum_examples() {
        assert_relative_eq!(
            angular_momentum(&State::new(0.0, c(1.0, 0.0), c(0.0, 1.0)), 1.0),
            1.0
        );
        assert_relative_eq!(
            angular_momentum(&State::new(0.0, c(2.0, 0.0), c(0.0, 1.0)), 1.0),
            2.0
        );
        // Purely radial velocity carries no angular momentum.
        assert_relative_eq!(
            angular_momentum(&State::new(0.0, c(1.0, 1.0), c(1.0, 1.0)), 3.0),
            0.0
        );
    }

    #[test]
    fn oscillator_invariant_on_analytic_orbits() {
        // Circular orbit z = e^{it}: T vanishes at every phase.
        for &t in &[0.0f64, 0.7, 2.1, 4.9] {
            let z = Complex64::from_polar(1.0, t);
            let v = Complex64::i() * z;
            let inv = fjh_complex(&State::new(t, z, v), 1.0, 1.0);
            assert!(inv.norm() < 1e-15, "T = {inv} at t = {t}");
        }

        // Ellipse z = 2 cos t + i sin t: T = (a^2 - b^2)/2 = 3/2.
        for &t in &[0.0f64, 0.4, 1.3, 3.0, 5.5] {
            let z = c(2.0 * t.cos(), t.sin());
            let v = c(-2.0 * t.sin(), t.cos());
            let inv = fjh_complex(&State::new(t, z, v), 1.0, 1.0);
            assert_relative_eq!(inv.re, 1.5, max_relative = 1e-14);
            assert!(inv.im.abs() < 1e-14);
        }

        // Linear oscillation z = cos t: T = 1/2 = E.
        for &t in &[0.0f64, 0.9, 2.2] {
            let z = c(t.cos(), 0.0);
            let v = c(-t.sin(), 0.0);
            let inv = fjh_complex(&State::new(t, z, v), 1.0, 1.0);
            assert_relative_eq!(inv.re, 0.5, max_relative = 1e-14);
            assert_relative_eq!(inv.im, 0.0);
        }
    }

    #[test]
    fn tensor_entries_and_structure_identities() {
        let s = State::new(0.0, c(1.0, 0.0), c(0.0, 1.0));
        let t = fjh_tensor(&s, 1.0, 1.0);
        assert_relative_eq!(t.t11, 0.5);
        assert_relative_eq!(t.t12, 0.0);
        assert_relative_eq!(t.t22, 0.5);
        assert_relative_eq!(t.trace(), 1.0);

        let s = State::new(0.0, c(2.0, 0.0), c(0.0, 1.0));
        let t = fjh_tensor(&s, 1.0, 1.0);
        assert_relative_eq!(t.t11, 2.0);
        assert_relative_eq!(t.t22, 0.5);
        let inv = fjh_complex(&s, 1.0, 1.0);
        assert_relative_eq!(inv.re, t.t11 - t.t22, max_relative = 1e-15);
        assert_relative_eq!(inv.im, 2.0 * t.t12);

        // Symmetric cancellation in the off-diagonal entry.
        let s = State::new(0.0, c(1.0, 1.0), c(1.0, -1.0));
        let t = fjh_tensor(&s, 1.0, 1.0);
        assert_relative_eq!(t.t12, 0.0);
    }

    #[test]
    fn tensor_diagonal_nonnegative_for_positive_stiffness() {
        let s = State::new(0.0, c(-1.3, 0.4), c(0.2, -2.0));
        let t = fjh_tensor(&s, 2.5, 1.7);
        assert!(t.t11 >= 0.0);
        assert!(t.t22 >= 0.0);
    }

    #[test]
    fn runge_lenz_on_circular_kepler_orbits() {
        // Circular orbit of V = -1/rho at rho = 1: zero eccentricity.
        let a = lrl_affix(c(1.0, 0.0), c(0.0, 1.0), -1.0, 1.0).unwrap();
        assert!(a.norm() < 1e-15);

        // Dual of the unit oscillator circle: w = e^{2is}/2, w' = i e^{2is}.
        for &s in &[0.0f64, 0.3, 1.1, 2.8] {
            let w = Complex64::from_polar(0.5, 2.0 * s);
            let wp = Complex64::i() * Complex64::from_polar(1.0, 2.0 * s);
            let a = lrl_affix(w, wp, -0.5, 1.0).unwrap();
            assert!(a.norm() < 1e-15, "A = {a} at s = {s}");
        }
    }

    #[test]
    fn runge_lenz_mass_independence_on_circular_orbits() {
        // m = 2 circular orbit of V = -1/rho at rho = 1: speed 1/sqrt(2).
        let m = 2.0f64;
        let w = c(1.0, 0.0);
        let wp = c(0.0, 1.0 / m.sqrt());
        let a = lrl_affix(w, wp, -1.0, m).unwrap();
        assert!(a.norm() < 1e-15, "eccentricity should vanish, got {a}");
    }

    #[test]
    fn runge_lenz_errors() {
        assert!(matches!(
            lrl_affix(c(0.0, 0.0), c(0.0, 1.0), -1.0, 1.0),
            Err(Error::OriginSingularity { .. })
        ));
        assert!(matches!(
            lrl_affix(c(1.0, 0.0), c(0.0, 1.0), 0.0, 1.0),
            Err(Error::DegenerateCoupling)
        ));
        assert!(matches!(
            lrl_from_fjh(c(1.0, 0.0), 0.0),
            Err(Error::ZeroEnergy)
        ));
    }

    #[test]
    fn ratio_form_examples() {
        assert_relative_eq!(lrl_from_fjh(c(1.5, 0.0), 2.5).unwrap().re, -0.6);
        assert_relative_eq!(lrl_from_fjh(c(0.0, 0.0), 1.0).unwrap().norm(), 0.0);
        // Linear oscillation: T = E, degenerate dual orbit of eccentricity 1.
        assert_relative_eq!(lrl_from_fjh(c(0.5, 0.0), 0.5).unwrap().re, -1.0);
    }

    #[test]
    fn report_drift_accounting() {
        let samples = vec![
            (0.0, c(2.0, 0.0)),
            (1.0, c(2.0 + 1e-9, 0.0)),
            (2.0, c(2.0 - 3e-9, 0.0)),
        ];
        let rep = ConservedReport::new("energy", samples);
        assert_relative_eq!(rep.initial.re, 2.0);
        assert_relative_eq!(rep.max_abs_drift, 3e-9, max_relative = 1e-6);
        assert_relative_eq!(rep.max_rel_drift, 1.5e-9, max_relative = 1e-6);

        // Zero-valued invariant: relative drift saturates, absolute stays useful.
        let rep = ConservedReport::new("fjh", vec![(0.0, c(0.0, 0.0)), (1.0, c(1e-12, 0.0))]);
        assert_relative_eq!(rep.max_abs_drift, 1e-12, max_relative = 1e-6);
        assert!(rep.max_rel_drift > 1e100);
    }
}
