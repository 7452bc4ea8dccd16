//! JSON run configuration for the `simulate` subcommand.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use bohlin::{IntegratorConfig, Method, PowerLawPotential, State, DEFAULT_R_MIN};

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub mass: f64,
    pub potential: PotentialConfig,
    pub initial: InitialConfig,
    #[serde(default)]
    pub integrator: IntegratorSection,
    #[serde(default)]
    pub outputs: OutputsConfig,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialConfig {
    pub k: f64,
    pub nu: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialConfig {
    pub x: f64,
    pub y: f64,
    pub vx: f64,
    pub vy: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorSection {
    #[serde(default = "default_method")]
    pub method: String,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_t_end")]
    pub t_end: f64,
    #[serde(default = "default_tol")]
    pub rtol: f64,
    #[serde(default = "default_tol")]
    pub atol: f64,
    #[serde(default = "default_r_min")]
    pub r_min: f64,
    #[serde(default)]
    pub max_dt: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputsConfig {
    #[serde(default)]
    pub trajectory: Option<PathBuf>,
    #[serde(default)]
    pub report: Option<PathBuf>,
    #[serde(default)]
    pub plot: Option<PathBuf>,
}

fn default_method() -> String {
    "rk45".into()
}
fn default_dt() -> f64 {
    1e-3
}
fn default_t_end() -> f64 {
    std::f64::consts::TAU
}
fn default_tol() -> f64 {
    bohlin::dynamics::DEFAULT_TOL
}
fn default_r_min() -> f64 {
    DEFAULT_R_MIN
}

impl Default for IntegratorSection {
    fn default() -> Self {
        Self {
            method: default_method(),
            dt: default_dt(),
            t_end: default_t_end(),
            rtol: default_tol(),
            atol: default_tol(),
            r_min: default_r_min(),
            max_dt: None,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("invalid config {}: {e}", path.display())))
    }

    pub fn potential(&self) -> Result<PowerLawPotential, CliError> {
        PowerLawPotential::new(self.potential.k, self.potential.nu, self.mass)
            .and_then(|p| p.with_r_min(self.integrator.r_min))
            .map_err(CliError::config)
    }

    pub fn initial_state(&self) -> State {
        State::from_parts(
            0.0,
            self.initial.x,
            self.initial.y,
            self.initial.vx,
            self.initial.vy,
        )
    }

    pub fn integrator_config(&self) -> Result<IntegratorConfig, CliError> {
        let method = match self.integrator.method.as_str() {
            "rk4" => Method::Rk4,
            "rk45" => Method::Rk45,
            other => {
                return Err(CliError::Config(format!(
                    "unknown integrator method {other:?} (expected \"rk4\" or \"rk45\")"
                )))
            }
        };
        Ok(IntegratorConfig {
            method,
            dt: self.integrator.dt,
            t_end: self.integrator.t_end,
            rtol: self.integrator.rtol,
            atol: self.integrator.atol,
            r_min: self.integrator.r_min,
            max_dt: self.integrator.max_dt,
        })
    }
}

/// Partial override of the computed duality parameters, for `dualize
/// --params`: any field present replaces the derived value in the output
/// metadata (the mapped samples themselves do not depend on the couplings).
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsOverride {
    #[serde(default)]
    pub k_dual: Option<f64>,
    #[serde(default)]
    pub e_dual: Option<f64>,
}

impl ParamsOverride {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("invalid params override: {e}")))
    }
}
