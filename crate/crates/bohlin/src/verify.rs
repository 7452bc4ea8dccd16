//! End-to-end verification: dual equation-of-motion residuals, overlay of
//! the mapped trajectory against a direct integration in the dual
//! potential, and the battery of conserved-quantity identities.

use num_complex::Complex64;
use serde::Serialize;

use crate::conserved::{angular_momentum, fjh_complex, fjh_tensor, lrl_affix, DRIFT_FLOOR};
use crate::duality::{
    dualize_trajectory, functional_residual, map_state, BranchTracker, DualityParams,
};
use crate::dynamics::{integrate, IntegratorConfig, Trajectory};
use crate::error::{Error, Result};
use crate::exec;
use crate::interp::{hermite_position, hermite_velocity};
use crate::potential::energy;
use crate::state::State;

/// Outcome of one check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// The identity does not apply to this exponent; reported, not fatal.
    Inapplicable,
}

/// One verification result: what was measured, against which threshold.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub status: CheckStatus,
    pub measured: f64,
    pub threshold: f64,
    pub details: String,
}

impl VerificationReport {
    /// Pass iff `measured <= threshold`.
    pub fn evaluated(
        check: impl Into<String>,
        measured: f64,
        threshold: f64,
        details: impl Into<String>,
    ) -> Self {
        let status = if measured <= threshold {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        Self {
            check: check.into(),
            status,
            measured,
            threshold,
            details: details.into(),
        }
    }

    pub fn inapplicable(check: impl Into<String>, details: impl Into<String>) -> Self {
        Self {
            check: check.into(),
            status: CheckStatus::Inapplicable,
            measured: 0.0,
            threshold: 0.0,
            details: details.into(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status != CheckStatus::Fail
    }
}

/// Thresholds and knobs for the verification suites.
#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    /// Per-sample algebraic structure identities (round-off only).
    pub exact_tol: f64,
    /// Conservation-based identities, limited by integration accuracy.
    pub identity_tol: f64,
    /// Finite-difference residual checks.
    pub fd_tol: f64,
    /// Overlay of mapped vs directly-integrated dual trajectories.
    pub overlay_tol: f64,
    /// Uniform resampling density for finite differences, as a multiple of
    /// the source sample count.
    pub resample_factor: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            exact_tol: 1e-12,
            identity_tol: 1e-8,
            fd_tol: 1e-5,
            overlay_tol: 1e-5,
            resample_factor: 4,
        }
    }
}

/// Maximum residual of the dual equation of motion
/// `w'' + (mu k_dual / m) |w|^(mu-2) w = 0` along a dual trajectory,
/// normalized by the largest acceleration scale present.
///
/// `w''` comes from central second differences on a uniform resampling of
/// the dual time grid (cubic Hermite from the stored velocities).
pub fn dual_eom_residual(
    dual: &Trajectory,
    params: &DualityParams,
    cfg: &VerifyConfig,
) -> Result<VerificationReport> {
    let samples = dual.samples();
    if samples.len() < 5 {
        return Err(Error::TooFewSamples {
            got: samples.len(),
            need: 5,
        });
    }
    let n = samples.len() * cfg.resample_factor.max(1);
    let (s0, s1) = (samples[0].t, samples[samples.len() - 1].t);
    let h = (s1 - s0) / n as f64;
    let grid: Vec<f64> = (0..=n).map(|i| s0 + h * i as f64).collect();
    let w: Vec<Complex64> = exec::map(&grid, |&s| hermite_position(samples, s));

    let coeff = params.mu * params.k_dual / params.m;
    let mut worst = 0.0f64;
    let mut max_fd = 0.0f64;
    let mut max_force = 0.0f64;
    for j in 1..n {
        let wdd = (w[j + 1] - 2.0 * w[j] + w[j - 1]) / (h * h);
        let rho = w[j].norm();
        let force = if coeff == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            coeff * rho.powf(params.mu - 2.0) * w[j]
        };
        worst = worst.max((wdd + force).norm());
        max_fd = max_fd.max(wdd.norm());
        max_force = max_force.max(force.norm());
    }
    // Characteristic acceleration floor keeps force-free duals (mu = 0)
    // from dividing noise by noise.
    let v_max = exec::max_of(samples, |s| s.v.norm());
    let rho_max = exec::max_of(samples, |s| s.z.norm());
    let scale = max_fd.max(max_force).max(v_max * v_max / rho_max);
    let measured = worst / scale.max(DRIFT_FLOOR);
    Ok(VerificationReport::evaluated(
        "dual_eom_residual",
        measured,
        cfg.fd_tol,
        format!(
            "max |w'' + (mu k/m) rho^(mu-2) w| = {worst:.3e} over {n} resampled points, \
             acceleration scale {scale:.3e}"
        ),
    ))
}

/// Integrate the dual system directly from the mapped initial state and
/// compare with the mapped trajectory at matching values of the dual time.
///
/// The measured value is the worst position discrepancy; velocities are
/// folded in at a tenfold looser threshold (interpolated velocities carry
/// one order less accuracy).
pub fn overlay_check(
    original: &Trajectory,
    params: &DualityParams,
    int_cfg: &IntegratorConfig,
    cfg: &VerifyConfig,
) -> Result<VerificationReport> {
    let mapped = dualize_trajectory(original, params)?;
    let first = original.first().state();
    let mut branch = BranchTracker::new(first.z)?;
    let (w0, w0p) = map_state(&first, params, &mut branch)?;

    let s_final = mapped.last().t;
    let mut direct_cfg = *int_cfg;
    direct_cfg.t_end = s_final;
    let dual_potential = params.dual_potential()?;
    let direct = integrate(&dual_potential, &State::new(0.0, w0, w0p), &direct_cfg)?;

    let pos = exec::max_of(mapped.samples(), |smp| {
        (hermite_position(direct.samples(), smp.t) - smp.z).norm()
    });
    let vel = exec::max_of(mapped.samples(), |smp| {
        (hermite_velocity(direct.samples(), smp.t) - smp.v).norm()
    });
    let measured = pos.max(vel / 10.0);
    Ok(VerificationReport::evaluated(
        "overlay",
        measured,
        cfg.overlay_tol,
        format!(
            "max position discrepancy {pos:.3e}, max velocity discrepancy {vel:.3e} \
             against direct integration in (k={:.6e}, mu={:.6})",
            params.k_dual, params.mu
        ),
    ))
}

fn pairwise(original: &Trajectory, dual: &Trajectory) -> Result<()> {
    if original.samples().len() != dual.samples().len() {
        return Err(Error::MetadataMismatch(format!(
            "sample counts differ: {} vs {}",
            original.samples().len(),
            dual.samples().len()
        )));
    }
    for (o, d) in original.samples().iter().zip(dual.samples()) {
        if (o.s - d.t).abs() > 1e-9 * o.s.abs().max(1.0) {
            return Err(Error::MetadataMismatch(
                "dual trajectory is not the sample-by-sample image of the original \
                 (fictitious times disagree)"
                    .into(),
            ));
        }
    }
    Ok(())
}

/// The conserved-quantity identity battery on an (original, dual) pair.
///
/// Applicable at any exponent: angular-momentum scaling and the dual
/// energy relation. Oscillator/Kepler-specific identities (oscillator
/// invariant constancy, tensor trace and structure, Runge-Lenz constancy
/// and the ratio identity) report as inapplicable unless `nu = 2`.
pub fn identity_suite(
    original: &Trajectory,
    dual: &Trajectory,
    params: &DualityParams,
    cfg: &VerifyConfig,
) -> Result<Vec<VerificationReport>> {
    pairwise(original, dual)?;
    let m = params.m;
    let factor = 1.0 + 0.5 * params.nu;
    let pairs: Vec<(crate::dynamics::Sample, crate::dynamics::Sample)> = original
        .samples()
        .iter()
        .copied()
        .zip(dual.samples().iter().copied())
        .collect();

    let mut reports = Vec::new();

    // L = (1 + nu/2) L_dual, pointwise and exact up to round-off.
    let l0 = original.initial_angular_momentum();
    let l_dev = exec::max_of(&pairs, |(o, d)| {
        let l = angular_momentum(&o.state(), m);
        let l_dual = angular_momentum(&d.state(), m);
        (l - factor * l_dual).abs()
    });
    reports.push(VerificationReport::evaluated(
        "l_scaling",
        l_dev,
        cfg.exact_tol * l0.abs().max(1.0),
        format!("max |L - (1+nu/2) L_dual| with L0 = {l0:.6e}"),
    ));

    // Dual energy relation: (m/2)|w'|^2 + V(w) = E_dual on every sample.
    let e_dev = exec::max_of(&pairs, |(_, d)| {
        let v = params.k_dual * d.z.norm().powf(params.mu);
        (0.5 * m * d.v.norm_sqr() + v - params.e_dual).abs()
    });
    reports.push(VerificationReport::evaluated(
        "dual_energy",
        e_dev,
        cfg.identity_tol,
        format!(
            "max |(m/2)|w'|^2 + V(w) - E_dual| with E_dual = {:.6e}",
            params.e_dual
        ),
    ));

    let hooke = original.potential().hooke_stiffness();
    match hooke {
        None => {
            for check in [
                "fjh_constant",
                "fjh_trace",
                "fjh_structure",
                "lrl_constant",
                "lrl_ratio",
            ] {
                reports.push(VerificationReport::inapplicable(
                    check,
                    format!(
                        "requires an oscillator original (nu = 2), trajectory has nu = {}",
                        original.potential().nu()
                    ),
                ));
            }
        }
        Some(kappa) => {
            let t0 = fjh_complex(&original.first().state(), kappa, m);
            let t_dev = exec::max_of(&pairs, |(o, _)| {
                (fjh_complex(&o.state(), kappa, m) - t0).norm()
            });
            reports.push(VerificationReport::evaluated(
                "fjh_constant",
                t_dev,
                cfg.identity_tol * t0.norm().max(1.0),
                format!("oscillator invariant T0 = {t0:.6e}"),
            ));

            let trace_dev = exec::try_map(&pairs, |(o, _)| {
                let st = o.state();
                let e = energy(original.potential(), &st)?;
                Ok::<f64, Error>((fjh_tensor(&st, kappa, m).trace() - e).abs())
            })?
            .into_iter()
            .fold(0.0, f64::max);
            reports.push(VerificationReport::evaluated(
                "fjh_trace",
                trace_dev,
                cfg.exact_tol * original.initial_energy().abs().max(1.0),
                "trace(T) = E per state",
            ));

            let structure_dev = exec::max_of(&pairs, |(o, _)| {
                let st = o.state();
                let tensor = fjh_tensor(&st, kappa, m);
                let inv = fjh_complex(&st, kappa, m);
                let re = (inv.re - (tensor.t11 - tensor.t22)).abs();
                let im = (inv.im - 2.0 * tensor.t12).abs();
                re.max(im)
            });
            reports.push(VerificationReport::evaluated(
                "fjh_structure",
                structure_dev,
                cfg.exact_tol * t0.norm().max(1.0),
                "Re T = T11 - T22 and Im T = 2 T12 per state",
            ));

            if params.k_dual == 0.0 {
                reports.push(VerificationReport::inapplicable(
                    "lrl_constant",
                    "dual motion is free (zero coupling)",
                ));
                reports.push(VerificationReport::inapplicable(
                    "lrl_ratio",
                    "dual motion is free (zero coupling)",
                ));
            } else {
                let a0 = lrl_affix(dual.first().z, dual.first().v, params.k_dual, m)?;
                let a_dev = exec::try_map(&pairs, |(_, d)| {
                    lrl_affix(d.z, d.v, params.k_dual, m).map(|a| (a - a0).norm())
                })?
                .into_iter()
                .fold(0.0, f64::max);
                reports.push(VerificationReport::evaluated(
                    "lrl_constant",
                    a_dev,
                    cfg.identity_tol,
                    format!("Runge-Lenz affix A0 = {a0:.6e}, |A0| = {:.6}", a0.norm()),
                ));

                let ratio_dev = exec::try_map(&pairs, |(o, d)| {
                    let t = fjh_complex(&o.state(), kappa, m);
                    let a = lrl_affix(d.z, d.v, params.k_dual, m)?;
                    Ok::<f64, Error>((a + t / params.e).norm())
                })?
                .into_iter()
                .fold(0.0, f64::max);
                reports.push(VerificationReport::evaluated(
                    "lrl_ratio",
                    ratio_dev,
                    cfg.identity_tol,
                    "A = -T/E pointwise across the pair",
                ));
            }
        }
    }

    Ok(reports)
}

/// Worst functional-equation residual over `n` deterministic pseudo-random
/// probe points in the annulus swept by the dual trajectory.
pub fn functional_residual_scan(
    dual: &Trajectory,
    params: &DualityParams,
    n: usize,
    seed: u64,
) -> Result<f64> {
    let rho_min = dual
        .samples()
        .iter()
        .map(|s| s.z.norm())
        .fold(f64::INFINITY, f64::min);
    let rho_max = exec::max_of(dual.samples(), |s| s.z.norm());
    let mut rng = SplitMix64::new(seed);
    let mut points = Vec::with_capacity(n);
    let mut attempts = 0;
    while points.len() < n {
        attempts += 1;
        if attempts > 20 * n {
            return Err(Error::TurningPoint);
        }
        let rho = rho_min + (rho_max - rho_min) * rng.next_f64();
        let ang = std::f64::consts::TAU * rng.next_f64();
        let w = Complex64::from_polar(rho, ang);
        match functional_residual(w, params) {
            Ok(res) => points.push(res),
            // Redraw on turning-point hits; they form a measure-zero ring.
            Err(Error::TurningPoint) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(points.into_iter().fold(0.0, f64::max))
}

/// Small deterministic generator for reproducible probe points.
struct SplitMix64(u64);

impl SplitMix64 {
    fn new(seed: u64) -> Self {
        Self(seed)
    }

    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duality::dual_parameters;
    use crate::dynamics::Sample;
    use crate::potential::PowerLawPotential;
    use std::f64::consts::TAU;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ellipse_chain(t_end: f64) -> (Trajectory, Trajectory, DualityParams) {
        let p = PowerLawPotential::new(0.5, 2.0, 1.0).unwrap();
        let s0 = State::new(0.0, c(2.0, 0.0), c(0.0, 1.0));
        let cfg = IntegratorConfig::rk45(t_end).with_max_dt(2e-3);
        let traj = integrate(&p, &s0, &cfg).unwrap();
        let params = dual_parameters(2.0, 0.5, traj.initial_energy(), 1.0).unwrap();
        let dual = dualize_trajectory(&traj, &params).unwrap();
        (traj, dual, params)
    }

    #[test]
    fn report_status_follows_threshold() {
        let r = VerificationReport::evaluated("x", 1e-9, 1e-8, "");
        assert_eq!(r.status, CheckStatus::Pass);
        let r = VerificationReport::evaluated("x", 2e-8, 1e-8, "");
        assert_eq!(r.status, CheckStatus::Fail);
        assert!(!r.passed());
        assert!(VerificationReport::inapplicable("x", "").passed());
    }

    #[test]
    fn dual_eom_residual_on_the_circular_dual() {
        let p = PowerLawPotential::new(0.5, 2.0, 1.0).unwrap();
        let s0 = State::new(0.0, c(1.0, 0.0), c(0.0, 1.0));
        let cfg = IntegratorConfig::rk45(TAU).with_max_dt(2e-3);
        let traj = integrate(&p, &s0, &cfg).unwrap();
        let params = dual_parameters(2.0, 0.5, 1.0, 1.0).unwrap();
        let dual = dualize_trajectory(&traj, &params).unwrap();
        let rep = dual_eom_residual(&dual, &params, &VerifyConfig::default()).unwrap();
        assert_eq!(rep.status, CheckStatus::Pass);
        assert!(rep.measured < 1e-6, "residual {}", rep.measured);
    }

    #[test]
    fn dual_eom_residual_on_the_ellipse_dual() {
        let (_, dual, params) = ellipse_chain(TAU);
        let rep = dual_eom_residual(&dual, &params, &VerifyConfig::default()).unwrap();
        assert_eq!(rep.status, CheckStatus::Pass);
        assert!(rep.measured < 1e-5, "residual {}", rep.measured);
    }

    #[test]
    fn dual_eom_residual_detects_a_wrong_coupling() {
        let (_, dual, params) = ellipse_chain(TAU);
        let mut wrong = params;
        wrong.k_dual *= 1.8;
        let rep = dual_eom_residual(&dual, &wrong, &VerifyConfig::default()).unwrap();
        assert_eq!(rep.status, CheckStatus::Fail);
        assert!(rep.measured > 1e-2);
    }

    #[test]
    fn too_few_samples_rejected() {
        let p = PowerLawPotential::new(0.5, 2.0, 1.0).unwrap();
        let mk = |t: f64| Sample {
            t,
            s: t,
            z: Complex64::from_polar(1.0, t),
            v: Complex64::i() * Complex64::from_polar(1.0, t),
        };
        let traj =
            Trajectory::from_samples(p, vec![mk(0.0), mk(0.1), mk(0.2)], "synthetic").unwrap();
        let params = dual_parameters(2.0, 0.5, 1.0, 1.0).unwrap();
        assert!(matches!(
            dual_eom_residual(&traj, &params, &VerifyConfig::default()),
            Err(Error::TooFewSamples { got: 3, need: 5 })
        ));
    }

    #[test]
    fn overlay_matches_on_the_ellipse() {
        let (traj, _, params) = ellipse_chain(TAU);
        let cfg = IntegratorConfig::rk45(1.0).with_max_dt(2e-3);
        let rep = overlay_check(&traj, &params, &cfg, &VerifyConfig::default()).unwrap();
        assert_eq!(rep.status, CheckStatus::Pass);
        assert!(rep.measured < 1e-6, "overlay discrepancy {}", rep.measured);
    }

    #[test]
    fn identity_suite_on_the_worked_ellipse() {
        let (traj, dual, params) = ellipse_chain(TAU);
        let reports = identity_suite(&traj, &dual, &params, &VerifyConfig::default()).unwrap();
        for rep in &reports {
            assert_eq!(
                rep.status,
                CheckStatus::Pass,
                "{} failed: measured {} vs {} ({})",
                rep.check,
                rep.measured,
                rep.threshold,
                rep.details
            );
        }
        let lrl = reports.iter().find(|r| r.check == "lrl_constant").unwrap();
        assert!(lrl.details.contains("|A0| = 0.6"));
    }

    #[test]
    fn identity_suite_routes_inapplicable_checks() {
        let p = PowerLawPotential::new(1.0, 4.0, 1.0).unwrap();
        let s0 = State::new(0.0, c(1.0, 0.0), c(0.0, std::f64::consts::SQRT_2));
        let cfg = IntegratorConfig::rk45(3.0).with_max_dt(2e-3);
        let traj = integrate(&p, &s0, &cfg).unwrap();
        let params = dual_parameters(4.0, 1.0, traj.initial_energy(), 1.0).unwrap();
        let dual = dualize_trajectory(&traj, &params).unwrap();
        let reports = identity_suite(&traj, &dual, &params, &VerifyConfig::default()).unwrap();
        let inapplicable: Vec<_> = reports
            .iter()
            .filter(|r| r.status == CheckStatus::Inapplicable)
            .map(|r| r.check.as_str())
            .collect();
        assert_eq!(
            inapplicable,
            vec![
                "fjh_constant",
                "fjh_trace",
                "fjh_structure",
                "lrl_constant",
                "lrl_ratio"
            ]
        );
        for rep in reports
            .iter()
            .filter(|r| r.status != CheckStatus::Inapplicable)
        {
            assert_eq!(
                rep.status,
                CheckStatus::Pass,
                "{}: {}",
                rep.check,
                rep.details
            );
        }
    }

    #[test]
    fn identity_measurements_are_time_reversal_even() {
        let (traj, dual, params) = ellipse_chain(TAU);
        let reverse = |t: &Trajectory| {
            let last = *t.last();
            let samples: Vec<Sample> = t
                .samples()
                .iter()
                .rev()
                .map(|s| Sample {
                    t: last.t - s.t,
                    s: last.s - s.s,
                    z: s.z,
                    v: -s.v,
                })
                .collect();
            Trajectory::from_samples(*t.potential(), samples, "reversed").unwrap()
        };
        let fwd = identity_suite(&traj, &dual, &params, &VerifyConfig::default()).unwrap();
        let bwd = identity_suite(
            &reverse(&traj),
            &reverse(&dual),
            &params,
            &VerifyConfig::default(),
        )
        .unwrap();
        for (f, b) in fwd.iter().zip(&bwd) {
            assert_eq!(f.check, b.check);
            // Identical up to round-off: the reversed suite references the
            // other end sample as its initial value.
            assert!(
                (f.measured - b.measured).abs() <= 1e-13 + 1e-6 * f.measured.abs(),
                "{}: {} vs {}",
                f.check,
                f.measured,
                b.measured
            );
        }
    }

    #[test]
    fn functional_scan_is_tiny_and_deterministic() {
        let (_, dual, params) = ellipse_chain(TAU);
        let a = functional_residual_scan(&dual, &params, 100, 42).unwrap();
        let b = functional_residual_scan(&dual, &params, 100, 42).unwrap();
        assert_eq!(a, b);
        assert!(a < 1e-10, "scan residual {a}");
    }
}
