//! Instantaneous phase points of a planar motion in complex coordinates.

use num_complex::Complex64;

/// One phase point: time, position affix and velocity affix.
///
/// The position of a planar particle is represented by the complex number
/// `z = x + iy`, the velocity by `v = vx + i vy`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State {
    /// Time (arbitrary units).
    pub t: f64,
    /// Position affix.
    pub z: Complex64,
    /// Velocity affix.
    pub v: Complex64,
}

impl State {
    pub fn new(t: f64, z: Complex64, v: Complex64) -> Self {
        Self { t, z, v }
    }

    /// Build a state from real coordinates.
    pub fn from_parts(t: f64, x: f64, y: f64, vx: f64, vy: f64) -> Self {
        Self::new(t, Complex64::new(x, y), Complex64::new(vx, vy))
    }

    /// True when every component is finite (no NaN, no infinity).
    pub fn is_finite(&self) -> bool {
        self.t.is_finite()
            && self.z.re.is_finite()
            && self.z.im.is_finite()
            && self.v.re.is_finite()
            && self.v.im.is_finite()
    }

    /// Distance from the origin, `|z|`.
    pub fn radius(&self) -> f64 {
        self.z.norm()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite_detection() {
        let good = State::from_parts(0.0, 1.0, 2.0, -0.5, 0.25);
        assert!(good.is_finite());

        let nan = State::from_parts(0.0, f64::NAN, 0.0, 0.0, 0.0);
        assert!(!nan.is_finite());

        let inf = State::from_parts(0.0, 0.0, 0.0, f64::INFINITY, 0.0);
        assert!(!inf.is_finite());
    }
}
