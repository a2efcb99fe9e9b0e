//! Experiment configuration files.

use serde::{Deserialize, Serialize};

use colldyn_core::{FamilySpec, Point};

use crate::catalog::SystemSpec;
use crate::CliError;

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default, rename = "analysis")]
    pub analyses: Vec<AnalysisSpec>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    /// Base name of the report files inside the output directory.
    #[serde(default = "default_name")]
    pub name: String,
    #[serde(default = "yes")]
    pub csv: bool,
    #[serde(default)]
    pub svg: bool,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec { name: default_name(), csv: true, svg: false }
    }
}

fn default_name() -> String {
    "report".into()
}

fn yes() -> bool {
    true
}

fn default_horizon() -> usize {
    colldyn_core::recurrence::DEFAULT_HORIZON
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
pub struct AnalysisSpec {
    pub name: String,
    #[serde(flatten)]
    pub op: Operation,
}

/// A point given as a circle angle, a finite index, or a tuple of those.
#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(untagged)]
pub enum PointSpec {
    Index(usize),
    Angle(f64),
    Tuple(Vec<PointSpec>),
}

impl PointSpec {
    pub fn to_point(&self) -> Point {
        match self {
            PointSpec::Index(i) => Point::Index(*i),
            PointSpec::Angle(a) => Point::angle(*a),
            PointSpec::Tuple(xs) => Point::Tuple(xs.iter().map(PointSpec::to_point).collect()),
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OpenSpec {
    Subset { points: Vec<usize> },
    Ball { center: PointSpec, radius: f64 },
    Arc { center: f64, radius: f64 },
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
#[derive(Default)]
pub enum FamilyConfig {
    #[default]
    Infinite,
    InfiniteWindow { min_count: usize },
    Cofinite,
    Thick { run: usize },
    Syndetic { max_gap: usize },
    ContainsAp { len: usize },
}


impl FamilyConfig {
    pub fn to_spec(self) -> FamilySpec {
        match self {
            FamilyConfig::Infinite => FamilySpec::InfiniteExact,
            FamilyConfig::InfiniteWindow { min_count } => FamilySpec::InfiniteWindow { min_count },
            FamilyConfig::Cofinite => FamilySpec::CofiniteExact,
            FamilyConfig::Thick { run } => FamilySpec::Thick { run },
            FamilyConfig::Syndetic { max_gap } => FamilySpec::Syndetic { max_gap },
            FamilyConfig::ContainsAp { len } => FamilySpec::ContainsAp { len },
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum DescentModeConfig {
    Point,
    Ap,
    QuasiRigid,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum Operation {
    PointRecurrence {
        system: SystemSpec,
        point: PointSpec,
        eps: f64,
        #[serde(default = "default_horizon")]
        horizon: usize,
    },
    EllReturnSet {
        system: SystemSpec,
        open: OpenSpec,
        #[serde(default = "one")]
        ell: usize,
        #[serde(default = "default_horizon")]
        horizon: usize,
        #[serde(default)]
        family: Option<FamilyConfig>,
    },
    /// Recurrence over a probe family, singletons of a finite space by
    /// default.
    IsRecSystem {
        system: SystemSpec,
        #[serde(default)]
        probes: Option<Vec<OpenSpec>>,
        #[serde(default = "one")]
        ell: usize,
        #[serde(default)]
        family: FamilyConfig,
        #[serde(default = "default_horizon")]
        horizon: usize,
    },
    QuasiRigidity {
        system: SystemSpec,
        /// Sample points; defaults to an even grid of `grid` angles.
        #[serde(default)]
        sample: Option<Vec<PointSpec>>,
        #[serde(default = "default_grid")]
        grid: usize,
        #[serde(default)]
        schedule: Option<Vec<f64>>,
        #[serde(default = "default_horizon")]
        horizon: usize,
    },
    /// Base products against the hyperextension on random finite systems.
    KSweep {
        systems: usize,
        #[serde(default = "default_k_points")]
        max_points: usize,
        #[serde(default = "one")]
        ell: usize,
        #[serde(default)]
        family: FamilyConfig,
        #[serde(default = "default_n_max")]
        n_max: usize,
        #[serde(default)]
        metric: bool,
    },
    /// Hyperextension against the Zadeh extension on random finite systems.
    FSweep {
        systems: usize,
        #[serde(default = "default_f_points")]
        max_points: usize,
        #[serde(default = "one")]
        ell: usize,
        #[serde(default)]
        family: FamilyConfig,
        #[serde(default = "default_grid_m")]
        m: usize,
        #[serde(default)]
        metric: bool,
    },
    Descent {
        system: SystemSpec,
        mode: DescentModeConfig,
        #[serde(default = "default_ap_len")]
        len: usize,
        #[serde(default)]
        schedule: Option<Vec<f64>>,
        #[serde(default = "default_horizon")]
        horizon: usize,
        #[serde(default = "default_eps")]
        eps: f64,
        #[serde(default = "default_probes")]
        probes: usize,
    },
}

fn default_grid() -> usize {
    20
}
fn default_k_points() -> usize {
    4
}
fn default_n_max() -> usize {
    4
}
fn default_f_points() -> usize {
    3
}
fn default_grid_m() -> usize {
    2
}
fn default_ap_len() -> usize {
    3
}
fn default_eps() -> f64 {
    0.05
}
fn default_probes() -> usize {
    4
}

impl Operation {
    pub fn name(&self) -> &'static str {
        match self {
            Operation::PointRecurrence { .. } => "point_recurrence",
            Operation::EllReturnSet { .. } => "ell_return_set",
            Operation::IsRecSystem { .. } => "is_rec_system",
            Operation::QuasiRigidity { .. } => "quasi_rigidity",
            Operation::KSweep { .. } => "k_sweep",
            Operation::FSweep { .. } => "f_sweep",
            Operation::Descent { .. } => "descent",
        }
    }

    fn horizon(&self) -> Option<usize> {
        match self {
            Operation::PointRecurrence { horizon, .. }
            | Operation::EllReturnSet { horizon, .. }
            | Operation::IsRecSystem { horizon, .. }
            | Operation::QuasiRigidity { horizon, .. }
            | Operation::Descent { horizon, .. } => Some(*horizon),
            _ => None,
        }
    }
}

impl ExperimentConfig {
    /// Parses and validates a config; errors carry the offending line.
    pub fn parse(text: &str) -> Result<ExperimentConfig, CliError> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| CliError::Validation(anchor_toml_error(text, &e)))?;
        for (i, a) in cfg.analyses.iter().enumerate() {
            if let Err(msg) = a.validate() {
                let line = analysis_line(text, i)
                    .map(|l| format!("line {l}: "))
                    .unwrap_or_default();
                return Err(CliError::Validation(format!(
                    "{line}analysis '{}': {msg}",
                    a.name
                )));
            }
        }
        Ok(cfg)
    }
}

impl AnalysisSpec {
    fn validate(&self) -> Result<(), String> {
        if let Some(h) = self.op.horizon() {
            if h == 0 {
                return Err("horizon must be at least 1".into());
            }
        }
        match &self.op {
            Operation::PointRecurrence { system, .. }
            | Operation::EllReturnSet { system, .. }
            | Operation::IsRecSystem { system, .. }
            | Operation::QuasiRigidity { system, .. }
            | Operation::Descent { system, .. } => {
                system.build().map(|_| ()).map_err(|e| e.to_string())
            }
            Operation::KSweep { systems, .. } | Operation::FSweep { systems, .. } => {
                if *systems == 0 {
                    Err("systems must be at least 1".into())
                } else {
                    Ok(())
                }
            }
        }
    }
}

fn anchor_toml_error(text: &str, e: &toml::de::Error) -> String {
    let msg = e.message();
    match e.span() {
        Some(span) => {
            let line = text[..span.start.min(text.len())].matches('\n').count() + 1;
            format!("line {line}: {msg}")
        }
        None => msg.to_string(),
    }
}

/// Line of the `i`-th `[[analysis]]` header.
fn analysis_line(text: &str, i: usize) -> Option<usize> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| l.trim() == "[[analysis]]")
        .nth(i)
        .map(|(n, _)| n + 1)
}
