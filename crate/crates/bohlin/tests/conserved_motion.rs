//! Conservation along integrated motions: drift bounds across the
//! exponent grid, Runge-Lenz constancy against the geometric eccentricity,
//! and per-entry constancy of the oscillator tensor.

use std::f64::consts::TAU;

use bohlin::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn drift_bounds_hold_across_the_exponent_grid() {
    for &nu in &[-1.0f64, 1.0, 2.0, 4.0] {
        let k = if nu > 0.0 { 1.0 } else { -1.0 };
        let v_circ = (nu * k).sqrt();
        for (tag, factor) in [("circular", 1.0), ("eccentric", 0.8)] {
            let p = PowerLawPotential::new(k, nu, 1.0).unwrap();
            let s0 = State::new(0.0, c(1.0, 0.0), c(0.0, factor * v_circ));
            let traj = integrate(&p, &s0, &IntegratorConfig::rk45(10.0)).unwrap();
            let e = drift_report(&traj, ConservedQuantity::Energy).unwrap();
            let l = drift_report(&traj, ConservedQuantity::AngularMomentum).unwrap();
            assert!(
                e.max_rel_drift < 1e-9,
                "nu={nu} {tag}: energy drift {:.3e}",
                e.max_rel_drift
            );
            assert!(
                l.max_rel_drift < 1e-9,
                "nu={nu} {tag}: L drift {:.3e}",
                l.max_rel_drift
            );
        }
    }
}

/// Quadratic-fit vertex value through three uniformly spaced points.
fn refine_extremum(r0: f64, r1: f64, r2: f64) -> f64 {
    let denom = r2 - 2.0 * r1 + r0;
    if denom.abs() < 1e-300 {
        return r1;
    }
    let delta = r2 - r0;
    r1 - delta * delta / (8.0 * denom)
}

#[test]
fn runge_lenz_modulus_matches_geometric_eccentricity() {
    // Kepler orbit launched at perihelion r_p = 0.5 with e = 1/2:
    // vis-viva gives v_p = sqrt(3), aphelion 1.5, period 2 pi.
    let p = PowerLawPotential::new(-1.0, -1.0, 1.0).unwrap();
    let s0 = State::new(0.0, c(0.5, 0.0), c(0.0, 3f64.sqrt()));
    let traj = integrate(&p, &s0, &IntegratorConfig::rk4(1e-3, 1.2 * TAU)).unwrap();

    let lrl = drift_report(&traj, ConservedQuantity::Lrl).unwrap();
    assert!(
        lrl.max_abs_drift < 1e-8,
        "Runge-Lenz drift {:.3e}",
        lrl.max_abs_drift
    );

    let radii: Vec<f64> = traj.samples().iter().map(|s| s.z.norm()).collect();
    let mut r_min = f64::INFINITY;
    let mut r_max = f64::NEG_INFINITY;
    for w in radii.windows(3) {
        let (a, b, z) = (w[0], w[1], w[2]);
        if b <= a && b <= z {
            r_min = r_min.min(refine_extremum(a, b, z));
        }
        if b >= a && b >= z {
            r_max = r_max.max(refine_extremum(a, b, z));
        }
    }
    // Endpoints can also be the extremes.
    r_min = r_min.min(radii[0]).min(*radii.last().unwrap());
    assert!(r_min.is_finite() && r_max.is_finite());

    let geometric = (r_max - r_min) / (r_max + r_min);
    let measured = lrl.initial.norm();
    assert!(
        (measured - geometric).abs() < 1e-6,
        "|A| = {measured}, radii give {geometric}"
    );
    assert!(
        (measured - 0.5).abs() < 1e-6,
        "|A| = {measured}, expected 0.5"
    );
}

#[test]
fn oscillator_tensor_entries_are_individually_constant() {
    let p = PowerLawPotential::new(0.5, 2.0, 1.0).unwrap();
    let s0 = State::new(0.0, c(2.0, 0.0), c(0.0, 1.0));
    let traj = integrate(&p, &s0, &IntegratorConfig::rk45(10.0 * TAU)).unwrap();
    let kappa = p.hooke_stiffness().unwrap();

    let first = fjh_tensor(&traj.first().state(), kappa, 1.0);
    assert!((first.t11 - 2.0).abs() < 1e-14);
    assert!((first.t22 - 0.5).abs() < 1e-14);
    assert!(first.t12.abs() < 1e-14);

    let mut dev = [0.0f64; 3];
    for smp in traj.samples() {
        let t = fjh_tensor(&smp.state(), kappa, 1.0);
        dev[0] = dev[0].max((t.t11 - first.t11).abs());
        dev[1] = dev[1].max((t.t12 - first.t12).abs());
        dev[2] = dev[2].max((t.t22 - first.t22).abs());
    }
    for (i, d) in dev.iter().enumerate() {
        assert!(*d < 1e-9, "tensor entry {i} drifted by {d:.3e}");
    }
}

#[test]
fn overlay_and_residual_agree_under_perturbation() {
    // Both detectors must give the same verdict on the honest parameters
    // and on a 1%-perturbed coupling.
    let p = PowerLawPotential::new(0.5, 2.0, 1.0).unwrap();
    let s0 = State::new(0.0, c(2.0, 0.0), c(0.0, 1.0));
    let cfg = IntegratorConfig::rk45(TAU).with_max_dt(2e-3);
    let traj = integrate(&p, &s0, &cfg).unwrap();
    let params = dual_parameters(2.0, 0.5, traj.initial_energy(), 1.0).unwrap();
    let dual = dualize_trajectory(&traj, &params).unwrap();
    let vcfg = VerifyConfig::default();

    let honest_overlay = overlay_check(&traj, &params, &cfg, &vcfg).unwrap();
    let honest_residual = dual_eom_residual(&dual, &params, &vcfg).unwrap();
    assert_eq!(honest_overlay.status, CheckStatus::Pass);
    assert_eq!(honest_residual.status, CheckStatus::Pass);

    let mut skewed = params;
    skewed.k_dual *= 1.01;
    let bad_overlay = overlay_check(&traj, &skewed, &cfg, &vcfg).unwrap();
    let bad_residual = dual_eom_residual(&dual, &skewed, &vcfg).unwrap();
    assert_eq!(bad_overlay.status, CheckStatus::Fail, "{bad_overlay:?}");
    assert_eq!(bad_residual.status, CheckStatus::Fail, "{bad_residual:?}");
}
