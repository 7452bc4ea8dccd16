//! Trajectory CSV persistence.
//!
//! Format: comment lines starting with `#` carry a single JSON metadata
//! object, then the header row `t,s,x,y,vx,vy`, then data rows with
//! 17-significant-digit decimals (lossless for f64, so write/read
//! round-trips are bit-identical).

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use bohlin::{PowerLawPotential, Sample, Trajectory};

use crate::CliError;

pub const MIN_ROWS: usize = 5;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CsvMeta {
    pub mass: f64,
    pub k: f64,
    pub nu: f64,
    pub e0: f64,
    pub l0: f64,
    pub integrator: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duality: Option<DualityMeta>,
}

/// Extra header block on dualized trajectories.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DualityMeta {
    /// Exponent of the source trajectory this file was mapped from.
    pub source_nu: f64,
    pub mu: f64,
    pub k_dual: f64,
    pub e_dual: f64,
    pub l0_dual: f64,
    /// Generator coefficient induced on this (dual) side; dualizing this
    /// file again must use it for the map to invert exactly.
    pub v_coeff: f64,
    /// Net turns of the source position around the origin.
    pub windings: i64,
}

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_trajectory(path: &Path, traj: &Trajectory, meta: &CsvMeta) -> Result<(), CliError> {
    let mut out = String::new();
    let json = serde_json::to_string(meta)
        .map_err(|e| CliError::Config(format!("metadata serialization failed: {e}")))?;
    out.push_str("# ");
    out.push_str(&json);
    out.push('\n');
    out.push_str("t,s,x,y,vx,vy\n");
    for smp in traj.samples() {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt(smp.t),
            fmt(smp.s),
            fmt(smp.z.re),
            fmt(smp.z.im),
            fmt(smp.v.re),
            fmt(smp.v.im)
        ));
    }
    std::fs::write(path, out)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))
}

pub fn read_trajectory(path: &Path) -> Result<(Trajectory, CsvMeta), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut meta: Option<CsvMeta> = None;
    let mut header_seen = false;
    let mut samples = Vec::new();

    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            if meta.is_none() && rest.starts_with('{') {
                meta = Some(serde_json::from_str(rest).map_err(|e| {
                    CliError::Config(format!("{}: bad metadata header: {e}", path.display()))
                })?);
            }
            continue;
        }
        if !header_seen {
            if line != "t,s,x,y,vx,vy" {
                return Err(CliError::Config(format!(
                    "{}: unexpected column header {line:?}",
                    path.display()
                )));
            }
            header_seen = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(CliError::Config(format!(
                "{}: line {}: expected 6 fields, got {}",
                path.display(),
                lineno + 1,
                fields.len()
            )));
        }
        let mut vals = [0.0f64; 6];
        for (i, f) in fields.iter().enumerate() {
            vals[i] = f.trim().parse().map_err(|e| {
                CliError::Config(format!(
                    "{}: line {}: bad number {f:?}: {e}",
                    path.display(),
                    lineno + 1
                ))
            })?;
        }
        samples.push(Sample {
            t: vals[0],
            s: vals[1],
            z: Complex64::new(vals[2], vals[3]),
            v: Complex64::new(vals[4], vals[5]),
        });
    }

    let meta = meta.ok_or_else(|| {
        CliError::Config(format!("{}: missing JSON metadata header", path.display()))
    })?;
    if samples.len() < MIN_ROWS {
        return Err(CliError::Config(format!(
            "{}: truncated trajectory: {} rows (need at least {MIN_ROWS})",
            path.display(),
            samples.len()
        )));
    }
    let potential = PowerLawPotential::new(meta.k, meta.nu, meta.mass).map_err(CliError::config)?;
    let traj = Trajectory::from_samples(potential, samples, meta.integrator.clone())
        .map_err(CliError::config)?;
    Ok((traj, meta))
}

pub fn meta_for(traj: &Trajectory) -> CsvMeta {
    let p = traj.potential();
    CsvMeta {
        mass: p.mass(),
        k: p.k(),
        nu: p.nu(),
        e0: traj.initial_energy(),
        l0: traj.initial_angular_momentum(),
        integrator: traj.integrator().to_string(),
        duality: None,
    }
}
