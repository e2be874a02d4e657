//! JSON run configuration shared by all CLI commands.
//!
//! A single document carries the economy parameters, solver knobs, and one
//! optional block per command. CLI flags override the top-level fields.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::params::{ModelParams, ParamSpec};
use crate::strategy::StrategyProfile;

fn default_dt() -> f64 {
    0.01
}

fn default_tol() -> f64 {
    1e-4
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub params: ParamSpec,
    /// Integration step for forward and backward passes.
    #[serde(default = "default_dt")]
    pub dt: f64,
    /// Outer-loop switching-time tolerance.
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Worker threads; 0 means all available cores.
    #[serde(default)]
    pub threads: usize,
    /// Output directory for result files.
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub steady: Option<SteadyBlock>,
    #[serde(default)]
    pub nash: Option<NashBlock>,
    #[serde(default)]
    pub sweep: Option<SweepBlock>,
    #[serde(default)]
    pub welfare: Option<WelfareBlock>,
}

/// Options for the steady-state enumeration command.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SteadyBlock {
    /// Restrict the enumeration to these profiles (display matrices);
    /// omitted means all 216.
    #[serde(default)]
    pub profiles: Option<Vec<[[u8; 3]; 3]>>,
}

/// Options for the dynamic-equilibrium command.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NashBlock {
    /// Target steady-state profile (display matrix).
    pub target_profile: [[u8; 3]; 3],
    /// Initial inventory, as the 5 independent shares.
    #[serde(default)]
    pub p0: Option<[f64; 5]>,
    /// Alternative to `p0`: start from the fixed point of a pre-shock
    /// economy (same parameters except the fields below).
    #[serde(default)]
    pub pre_shock: Option<PreShock>,
    #[serde(default)]
    pub max_iter: Option<usize>,
    /// Keep every n-th sample when writing the trajectory (default 1).
    #[serde(default)]
    pub sample_stride: Option<usize>,
}

/// Pre-shock economy overrides and the profile whose fixed point becomes
/// the initial condition.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PreShock {
    pub profile: [[u8; 3]; 3],
    #[serde(default)]
    pub seignorage_rate: Option<f64>,
    #[serde(default)]
    pub money_stock: Option<f64>,
}

/// Options for region-map sweeps over (M, delta_m) or population shares.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    #[serde(default)]
    pub money_values: Option<GridSpec>,
    #[serde(default)]
    pub seignorage_values: Option<GridSpec>,
    /// Alternative axis: explicit population-share triples.
    #[serde(default)]
    pub theta_values: Option<Vec<[f64; 3]>>,
    /// Restrict Nash classification to these profiles; omitted means all.
    #[serde(default)]
    pub profiles: Option<Vec<[[u8; 3]; 3]>>,
}

/// Options for welfare curves over a one-dimensional grid.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WelfareBlock {
    /// Which parameter the grid varies.
    pub vary: VaryParam,
    pub values: GridSpec,
    /// Profile whose steady state is evaluated at each grid point.
    pub profile: [[u8; 3]; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VaryParam {
    MoneyStock,
    SeignorageRate,
}

/// A one-dimensional grid: explicit values or an inclusive range.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    List(Vec<f64>),
    Range { start: f64, stop: f64, step: f64 },
}

impl GridSpec {
    pub fn values(&self) -> Result<Vec<f64>> {
        let vals = match self {
            GridSpec::List(v) => v.clone(),
            GridSpec::Range { start, stop, step } => {
                if !(*step > 0.0) {
                    return Err(Error::Config(format!("grid step {step} must be positive")));
                }
                let n = ((stop - start) / step + 0.5).floor() as i64;
                (0..=n.max(-1)).map(|k| start + k as f64 * step).collect()
            }
        };
        if vals.is_empty() {
            return Err(Error::Config("grid is empty".into()));
        }
        Ok(vals)
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let cfg: RunConfig = serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        if !(cfg.dt > 0.0) {
            return Err(Error::Config(format!("dt = {} must be positive", cfg.dt)));
        }
        if !(cfg.tol > 0.0) {
            return Err(Error::Config(format!("tol = {} must be positive", cfg.tol)));
        }
        Ok(cfg)
    }

    pub fn model_params(&self) -> Result<ModelParams> {
        self.params
            .validate()
            .map_err(|e| Error::Config(e.to_string()))
    }
}

/// Parses a display-form profile matrix from configuration.
pub fn profile_from_config(m: [[u8; 3]; 3]) -> Result<StrategyProfile> {
    StrategyProfile::from_display_matrix(m).map_err(|e| Error::Config(e.to_string()))
}
