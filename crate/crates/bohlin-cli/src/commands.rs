//! Subcommand implementations.

use std::path::{Path, PathBuf};

use bohlin::{
    drift_report, dual_eom_residual, dual_parameters, dualize_trajectory_tracked, fjh_complex,
    functional_residual_scan, identity_suite, integrate, lrl_affix, overlay_check, CheckStatus,
    ConservedQuantity, IntegratorConfig, PowerLawPotential, State, Trajectory, VerificationReport,
    VerifyConfig,
};

use crate::config::{ParamsOverride, RunConfig};
use crate::csvio::{self, CsvMeta, DualityMeta};
use crate::svg;
use crate::CliError;

pub fn simulate(config_path: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let cfg = RunConfig::load(config_path)?;
    let potential = cfg.potential()?;
    let int_cfg = cfg.integrator_config()?;
    let initial = cfg.initial_state();
    if !initial.is_finite() {
        return Err(CliError::Config("initial state is not finite".into()));
    }

    let traj = integrate(&potential, &initial, &int_cfg).map_err(CliError::from_lib)?;

    let out_path = out
        .map(Path::to_path_buf)
        .or_else(|| cfg.outputs.trajectory.clone())
        .ok_or_else(|| {
            CliError::Config("no output path: pass --out or set outputs.trajectory".into())
        })?;
    csvio::write_trajectory(&out_path, &traj, &csvio::meta_for(&traj))?;
    if let Some(report_path) = &cfg.outputs.report {
        write_drift_reports(report_path, &traj)?;
    }
    if let Some(plot_path) = &cfg.outputs.plot {
        svg::write_orbit(
            plot_path,
            traj.samples(),
            &format!(
                "z(t) in U = k|z|^nu, k = {}, nu = {}",
                potential.k(),
                potential.nu()
            ),
        )?;
    }
    eprintln!(
        "wrote {} ({} samples, E0 = {:.12e}, L0 = {:.12e})",
        out_path.display(),
        traj.samples().len(),
        traj.initial_energy(),
        traj.initial_angular_momentum()
    );
    Ok(())
}

#[derive(serde::Serialize)]
struct DriftSummary {
    quantity: String,
    initial_re: f64,
    initial_im: f64,
    max_abs_drift: f64,
    max_rel_drift: f64,
}

/// JSON drift summary for every quantity the trajectory's exponent admits.
fn write_drift_reports(path: &Path, traj: &Trajectory) -> Result<(), CliError> {
    let mut quantities = vec![
        ConservedQuantity::Energy,
        ConservedQuantity::AngularMomentum,
    ];
    if traj.potential().hooke_stiffness().is_some() {
        quantities.push(ConservedQuantity::Fjh);
    }
    if (traj.potential().nu() + 1.0).abs() < 1e-12 && traj.potential().k() != 0.0 {
        quantities.push(ConservedQuantity::Lrl);
    }
    let mut summaries = Vec::new();
    for q in quantities {
        let rep = drift_report(traj, q).map_err(CliError::from_lib)?;
        summaries.push(DriftSummary {
            quantity: rep.quantity.clone(),
            initial_re: rep.initial.re,
            initial_im: rep.initial.im,
            max_abs_drift: rep.max_abs_drift,
            max_rel_drift: rep.max_rel_drift,
        });
    }
    let json = serde_json::to_string_pretty(&summaries)
        .map_err(|e| CliError::Config(format!("report serialization failed: {e}")))?;
    std::fs::write(path, json)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))
}

pub fn dualize(input: &Path, out: &Path, params_path: Option<&Path>) -> Result<(), CliError> {
    let (traj, meta) = csvio::read_trajectory(input)?;
    let p = traj.potential();
    // A file that is itself a dual image carries the generator coefficient
    // of its side; using it makes this transform the exact inverse of the
    // one that produced the file.
    let coeff = meta.duality.as_ref().map(|d| d.v_coeff).unwrap_or(1.0);
    let mut params = bohlin::DualityParams::for_system_with_coeff(
        p.nu(),
        p.k(),
        traj.initial_energy(),
        p.mass(),
        coeff,
    )
    .map_err(CliError::config)?;
    if let Some(path) = params_path {
        let over = ParamsOverride::load(path)?;
        if let Some(k) = over.k_dual {
            params.k_dual = k;
        }
        if let Some(e) = over.e_dual {
            params.e_dual = e;
        }
    }
    if params.is_free_dual() {
        eprintln!("warning: source energy is zero, dual coupling vanishes (free dual motion)");
    }

    let (dual, windings) =
        dualize_trajectory_tracked(&traj, &params).map_err(CliError::from_lib)?;
    let l0_dual = traj.initial_angular_momentum() / (1.0 + 0.5 * params.nu);
    let meta = CsvMeta {
        mass: params.m,
        k: params.k_dual,
        nu: params.mu,
        e0: params.e_dual,
        l0: l0_dual,
        integrator: dual.integrator().to_string(),
        duality: Some(DualityMeta {
            source_nu: params.nu,
            mu: params.mu,
            k_dual: params.k_dual,
            e_dual: params.e_dual,
            l0_dual,
            v_coeff: params.v_coeff,
            windings,
        }),
    };
    csvio::write_trajectory(out, &dual, &meta)?;
    eprintln!(
        "wrote {} (mu = {:.6}, k_dual = {:.6e}, E_dual = {:.6e}, windings = {windings})",
        out.display(),
        params.mu,
        params.k_dual,
        params.e_dual
    );
    Ok(())
}

/// Rebuild the duality parameters an (original, dual) file pair claims,
/// trusting the dual file's couplings so that the verification suites can
/// adjudicate them.
fn claimed_params(
    original: &Trajectory,
    orig_meta: &CsvMeta,
    dual_meta: &CsvMeta,
) -> Result<bohlin::DualityParams, CliError> {
    let p = original.potential();
    if (orig_meta.mass - dual_meta.mass).abs() > 1e-12 * orig_meta.mass.abs().max(1.0) {
        return Err(CliError::Config(format!(
            "metadata mismatch: masses differ ({} vs {})",
            orig_meta.mass, dual_meta.mass
        )));
    }
    let e0 = original.initial_energy();
    if (orig_meta.e0 - e0).abs() > 1e-6 * e0.abs().max(1e-6) {
        return Err(CliError::Config(format!(
            "metadata mismatch: stored E0 = {} but samples give {}",
            orig_meta.e0, e0
        )));
    }
    let pairing = (1.0 + 0.5 * p.nu()) * (1.0 + 0.5 * dual_meta.nu);
    if (pairing - 1.0).abs() > 1e-9 {
        return Err(CliError::Config(format!(
            "metadata mismatch: exponents are not dual ((1+nu/2)(1+mu/2) = {pairing})"
        )));
    }
    let mut params = dual_parameters(p.nu(), p.k(), e0, p.mass()).map_err(CliError::config)?;
    // The dual file's couplings are a claim under test, not ground truth.
    params.k_dual = dual_meta.k;
    params.e_dual = dual_meta.e0;
    Ok(params)
}

fn run_suites(
    original: &Trajectory,
    dual: &Trajectory,
    params: &bohlin::DualityParams,
) -> Result<Vec<VerificationReport>, CliError> {
    let vcfg = VerifyConfig::default();
    let mut reports = Vec::new();
    reports.push(dual_eom_residual(dual, params, &vcfg).map_err(CliError::from_lib)?);

    let spacing = (dual.last().t - dual.first().t) / dual.samples().len().max(1) as f64;
    let overlay_cfg = IntegratorConfig::rk45(1.0).with_max_dt(spacing.min(2e-3));
    reports.push(overlay_check(original, params, &overlay_cfg, &vcfg).map_err(CliError::from_lib)?);

    reports.extend(identity_suite(original, dual, params, &vcfg).map_err(CliError::from_lib)?);

    let func =
        functional_residual_scan(dual, params, 100, 0x0005_EED5).map_err(CliError::from_lib)?;
    reports.push(VerificationReport::evaluated(
        "functional_equation",
        func,
        1e-10,
        "worst residual of |f'(w)|^2 (E - U) = E_dual - V over 100 annulus probes",
    ));
    Ok(reports)
}

pub fn verify(original: &Path, dual: &Path, report: &Path) -> Result<(), CliError> {
    let (orig_traj, orig_meta) = csvio::read_trajectory(original)?;
    let (dual_traj, dual_meta) = csvio::read_trajectory(dual)?;
    let params = claimed_params(&orig_traj, &orig_meta, &dual_meta)?;
    let reports = run_suites(&orig_traj, &dual_traj, &params)?;

    let json = serde_json::to_string_pretty(&reports)
        .map_err(|e| CliError::Config(format!("report serialization failed: {e}")))?;
    std::fs::write(report, json)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", report.display())))?;

    let mut failed = 0;
    for r in &reports {
        let tag = match r.status {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Inapplicable => "SKIP",
        };
        eprintln!(
            "{tag} {:<20} measured {:.3e} vs threshold {:.3e}",
            r.check, r.measured, r.threshold
        );
        if r.status == CheckStatus::Fail {
            failed += 1;
        }
    }
    if failed > 0 {
        return Err(CliError::Verification(format!(
            "{failed} check(s) failed; report written to {}",
            report.display()
        )));
    }
    eprintln!(
        "all applicable checks passed; report written to {}",
        report.display()
    );
    Ok(())
}

pub fn demo(scenario: &str, nu: f64, ecc: f64, out_dir: &Path) -> Result<(), CliError> {
    if scenario != "hooke-kepler" {
        return Err(CliError::Config(format!(
            "unknown demo scenario {scenario:?} (available: hooke-kepler)"
        )));
    }
    if nu <= -2.0 {
        return Err(CliError::Config(
            "degenerate exponent: demo requires nu > -2".into(),
        ));
    }
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Config(format!("cannot create {}: {e}", out_dir.display())))?;

    let is_hooke = (nu - 2.0).abs() < 1e-12;
    let (potential, initial, t_end) = if is_hooke {
        if !(0.0..1.0).contains(&ecc) {
            return Err(CliError::Config(format!(
                "dual eccentricity must lie in [0, 1), got {ecc}"
            )));
        }
        // Oscillator ellipse with semi-axes chosen so the dual Kepler orbit
        // has eccentricity `ecc`: (a^2 - b^2)/(a^2 + b^2) = ecc.
        let a = 2.0;
        let b = a * ((1.0 - ecc) / (1.0 + ecc)).sqrt();
        let p = PowerLawPotential::new(0.5, 2.0, 1.0).map_err(CliError::config)?;
        (
            p,
            State::from_parts(0.0, a, 0.0, 0.0, b),
            std::f64::consts::TAU,
        )
    } else if nu == 0.0 {
        let p = PowerLawPotential::new(1.0, 0.0, 1.0).map_err(CliError::config)?;
        (p, State::from_parts(0.0, 1.0, 0.0, -0.2, 0.5), 2.0)
    } else {
        // Eccentric bound orbit: sub-circular tangential launch at r = 1.
        let k = if nu > 0.0 { 1.0 } else { -1.0 };
        let v_circ = (nu * k).sqrt();
        let p = PowerLawPotential::new(k, nu, 1.0).map_err(CliError::config)?;
        (
            p,
            State::from_parts(0.0, 1.0, 0.0, 0.0, 0.8 * v_circ),
            6.0 / nu.abs().sqrt().max(1.0),
        )
    };

    // The dual image winds (1 + nu/2) times faster; cap the sample spacing
    // accordingly so the finite-difference checks stay below threshold.
    let fd_cap = 2e-3 / (1.0 + 0.5 * potential.nu()).max(1.0);
    let int_cfg = IntegratorConfig::rk45(t_end).with_max_dt(fd_cap);
    let traj = integrate(&potential, &initial, &int_cfg).map_err(CliError::from_lib)?;
    let traj_path = out_dir.join("trajectory.csv");
    csvio::write_trajectory(&traj_path, &traj, &csvio::meta_for(&traj))?;

    let params = dual_parameters(
        potential.nu(),
        potential.k(),
        traj.initial_energy(),
        potential.mass(),
    )
    .map_err(CliError::config)?;
    let (dual, windings) =
        dualize_trajectory_tracked(&traj, &params).map_err(CliError::from_lib)?;
    let l0_dual = traj.initial_angular_momentum() / (1.0 + 0.5 * params.nu);
    let dual_path = out_dir.join("dual.csv");
    csvio::write_trajectory(
        &dual_path,
        &dual,
        &CsvMeta {
            mass: params.m,
            k: params.k_dual,
            nu: params.mu,
            e0: params.e_dual,
            l0: l0_dual,
            integrator: dual.integrator().to_string(),
            duality: Some(DualityMeta {
                source_nu: params.nu,
                mu: params.mu,
                k_dual: params.k_dual,
                e_dual: params.e_dual,
                l0_dual,
                v_coeff: params.v_coeff,
                windings,
            }),
        },
    )?;

    let reports = run_suites(&traj, &dual, &params)?;
    let report_path = out_dir.join("report.json");
    let json = serde_json::to_string_pretty(&reports)
        .map_err(|e| CliError::Config(format!("report serialization failed: {e}")))?;
    std::fs::write(&report_path, json)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", report_path.display())))?;

    let e0 = traj.initial_energy();
    let l0 = traj.initial_angular_momentum();
    let mut summary = vec![
        format!("demo hooke-kepler (nu = {})", potential.nu()),
        format!("  E = {e0:.9}"),
        format!("  L = {l0:.9}"),
    ];
    let mut caption = vec![
        format!(
            "source: k = {} nu = {} E = {e0:.6}",
            potential.k(),
            potential.nu()
        ),
        format!(
            "dual:   k = {:.6} mu = {:.6} E = {:.6}",
            params.k_dual, params.mu, params.e_dual
        ),
    ];
    if let Some(kappa) = potential.hooke_stiffness() {
        let t0 = fjh_complex(&traj.first().state(), kappa, params.m);
        let a0 = lrl_affix(dual.first().z, dual.first().v, params.k_dual, params.m)
            .map_err(CliError::from_lib)?;
        summary.push(format!("  T = {:.9} + {:.9}i", t0.re, t0.im));
        summary.push(format!("  A = {:.9} + {:.9}i", a0.re, a0.im));
        summary.push(format!("  dual eccentricity |A| = {:.9}", a0.norm()));
        caption.push(format!(
            "T = {:.6}  A = {:.6}  ecc = {:.6}",
            t0.re,
            a0.re,
            a0.norm()
        ));
    } else {
        summary.push("  T, A: inapplicable (nu != 2)".to_string());
    }
    let drift_e = drift_report(&traj, ConservedQuantity::Energy).map_err(CliError::from_lib)?;
    summary.push(format!(
        "  energy drift (rel) = {:.3e}",
        drift_e.max_rel_drift
    ));

    let svg_path = out_dir.join("overlay.svg");
    svg::write_overlay(
        &svg_path,
        traj.samples(),
        &format!("z(t) in U = k|z|^nu, nu = {}", potential.nu()),
        dual.samples(),
        &format!("w(s) in V = k|w|^mu, mu = {:.4}", params.mu),
        &caption,
    )?;

    let (mut pass, mut fail, mut skip) = (0, 0, 0);
    for r in &reports {
        match r.status {
            CheckStatus::Pass => pass += 1,
            CheckStatus::Fail => fail += 1,
            CheckStatus::Inapplicable => skip += 1,
        }
    }
    summary.push(format!(
        "  checks: {pass} passed, {fail} failed, {skip} inapplicable"
    ));
    summary.push(format!(
        "  wrote {}, {}, {}, {}",
        traj_path.display(),
        dual_path.display(),
        report_path.display(),
        svg_path.display()
    ));
    for line in &summary {
        println!("{line}");
    }

    if fail > 0 {
        return Err(CliError::Verification(format!(
            "{fail} verification check(s) failed"
        )));
    }
    Ok(())
}

pub fn demo_default_out_dir() -> PathBuf {
    PathBuf::from("demo_out")
}
