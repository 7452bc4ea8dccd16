//! Cubic Hermite interpolation on trajectory samples.
//!
//! Trajectories store velocities alongside positions, so each interval
//! supports a C1 cubic interpolant with no extra derivative estimation.
//! Queries are clamped to the sampled range.

use num_complex::Complex64;

use crate::dynamics::Sample;

/// Index of the interval `[t_i, t_{i+1}]` containing `t`.
fn locate(samples: &[Sample], t: f64) -> usize {
    let n = samples.len();
    let idx = samples.partition_point(|s| s.t <= t);
    idx.clamp(1, n - 1) - 1
}

/// Interpolated position at parameter `t` (the sample `t` field is the
/// evolution parameter, whatever its physical role).
pub fn hermite_position(samples: &[Sample], t: f64) -> Complex64 {
    let i = locate(samples, t);
    let (a, b) = (&samples[i], &samples[i + 1]);
    let h = b.t - a.t;
    let u = ((t - a.t) / h).clamp(0.0, 1.0);
    let (u2, u3) = (u * u, u * u * u);
    let h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
    let h10 = u3 - 2.0 * u2 + u;
    let h01 = -2.0 * u3 + 3.0 * u2;
    let h11 = u3 - u2;
    a.z * h00 + a.v * (h * h10) + b.z * h01 + b.v * (h * h11)
}

/// Derivative of the interpolant at `t`; one order less accurate than the
/// position.
pub fn hermite_velocity(samples: &[Sample], t: f64) -> Complex64 {
    let i = locate(samples, t);
    let (a, b) = (&samples[i], &samples[i + 1]);
    let h = b.t - a.t;
    let u = ((t - a.t) / h).clamp(0.0, 1.0);
    let u2 = u * u;
    let d00 = (6.0 * u2 - 6.0 * u) / h;
    let d10 = 3.0 * u2 - 4.0 * u + 1.0;
    let d01 = (-6.0 * u2 + 6.0 * u) / h;
    let d11 = 3.0 * u2 - 2.0 * u;
    a.z * d00 + a.v * d10 + b.z * d01 + b.v * d11
}
