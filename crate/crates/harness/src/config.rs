//! Experiment configuration: JSON schema v1.
//!
//! Unknown fields anywhere in a config are rejected. Errors carry the JSON
//! path of the offending field.

use std::path::{Path, PathBuf};

use qaoa_core::{DdSequence, MaxCutInstance, Method, Mitigation, NoiseConfig, SchedulePolicy};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{read_to_string, HarnessError, Result};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_SHOTS: u64 = 1000;

/// The published depth-5 starting point (β₁..β₅, γ₁..γ₅).
pub const PRESET_P5: [f64; 10] = [2.083, 2.048, 1.792, 1.564, 1.387, 2.281, 5.962, 1.789, 3.563, 5.646];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "schema_version")]
    pub version: u32,
    #[serde(default)]
    pub graph: GraphSource,
    pub p: usize,
    #[serde(default = "default_method")]
    pub method: String,
    #[serde(default)]
    pub init: InitSpec,
    #[serde(default = "default_shots")]
    pub shots: u64,
    /// How the objective is evaluated during optimization.
    #[serde(default)]
    pub mode: ModeSpec,
    /// Noise for every sampled execution (noisy-mode objective and final run).
    #[serde(default)]
    pub noise: NoiseSpec,
    #[serde(default)]
    pub mitigation: MitigationSpec,
    /// Output directory; not part of the config hash.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_evals: Option<usize>,
}

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

fn default_method() -> String {
    "cobyla".into()
}

fn default_shots() -> u64 {
    DEFAULT_SHOTS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphSource {
    /// Only `"canonical"` is recognized.
    Named(String),
    File(GraphFile),
    Inline(InlineGraph),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub file: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InlineGraph {
    pub n: usize,
    /// `[u, v]` or `[u, v, w]`.
    pub edges: Vec<Vec<f64>>,
}

impl Default for GraphSource {
    fn default() -> Self {
        GraphSource::Named("canonical".into())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitSpec {
    /// Only `"paper-p5"` is recognized.
    Preset(String),
    Explicit(ExplicitInit),
    Random(RandomStarts),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitInit {
    pub theta: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomStarts {
    pub random: RandomInit,
}

impl Default for InitSpec {
    fn default() -> Self {
        InitSpec::Random(RandomStarts {
            random: RandomInit { restarts: 1 },
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomInit {
    pub restarts: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeSpec {
    #[default]
    Exact,
    Sampled,
    Noisy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NoiseSpec {
    /// `"none"`, `"ibm-bounds"`, `"coherent-only"` or `"dephase-only"`.
    Preset(String),
    Explicit(NoiseValues),
}

impl Default for NoiseSpec {
    fn default() -> Self {
        NoiseSpec::Preset("none".into())
    }
}

impl NoiseSpec {
    pub fn label(&self) -> String {
        match self {
            NoiseSpec::Preset(name) => name.clone(),
            NoiseSpec::Explicit(_) => "custom".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseValues {
    pub p1q: f64,
    pub p2q: f64,
    pub p_readout: f64,
    pub epsilon_coherent: f64,
    pub sigma_dephase: f64,
}

/// Coherent over-rotation of the `"coherent-only"` preset, radians.
pub const COHERENT_ONLY_EPSILON: f64 = 0.05;
/// Dephasing rate std-dev of the `"dephase-only"` preset.
pub const DEPHASE_ONLY_SIGMA: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MitigationSpec {
    #[serde(default)]
    pub twirling: bool,
    /// `"XpXm"` or `"XY4"`.
    #[serde(default)]
    pub dd: Option<String>,
    #[serde(default = "default_schedule")]
    pub schedule: String,
}

fn default_schedule() -> String {
    "alap".into()
}

impl Default for MitigationSpec {
    fn default() -> Self {
        Self {
            twirling: false,
            dd: None,
            schedule: default_schedule(),
        }
    }
}

impl MitigationSpec {
    pub fn label(&self) -> String {
        let mut parts = Vec::new();
        if self.twirling {
            parts.push("twirl".to_string());
        }
        if let Some(dd) = &self.dd {
            parts.push(format!("dd-{dd}-{}", self.schedule));
        }
        if parts.is_empty() {
            "none".into()
        } else {
            parts.join("+")
        }
    }
}

/// How θ is initialized, after validation.
#[derive(Debug, Clone, PartialEq)]
pub enum Init {
    Explicit(Vec<f64>),
    Random { restarts: usize },
}

/// A validated experiment, ready to run.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub instance: MaxCutInstance,
    pub p: usize,
    pub method: Method,
    pub init: Init,
    pub shots: u64,
    pub mode: ModeSpec,
    pub noise: NoiseConfig,
    pub seed: u64,
    pub max_evals: Option<usize>,
    pub config_hash: String,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> std::result::Result<Self, String> {
        parse_json(text)
    }

    /// Load from a file. Relative graph paths resolve against the config's
    /// directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = read_to_string(path)?;
        let mut config = Self::from_json(&text).map_err(|msg| HarnessError::Parse {
            path: path.to_path_buf(),
            msg,
        })?;
        if let GraphSource::File(GraphFile { file }) = &mut config.graph {
            if file.is_relative() {
                if let Some(dir) = path.parent() {
                    *file = dir.join(&*file);
                }
            }
        }
        Ok(config)
    }

    /// SHA-256 of the canonical JSON encoding, excluding the output directory.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.out_dir = None;
        let bytes = serde_json::to_vec(&c).expect("config serializes");
        hex::encode(Sha256::digest(&bytes))
    }

    pub fn resolve(&self) -> Result<Experiment> {
        if self.version != SCHEMA_VERSION {
            return Err(HarnessError::config(
                "version",
                format!("unsupported schema version {} (expected {SCHEMA_VERSION})", self.version),
            ));
        }
        let instance = self.graph.load()?;
        let method: Method = self
            .method
            .parse()
            .map_err(|_| HarnessError::config("method", format!("unknown method {:?}", self.method)))?;
        let init = match &self.init {
            InitSpec::Preset(name) if name == "paper-p5" => {
                if self.p != 5 {
                    return Err(HarnessError::config("init", "preset \"paper-p5\" requires p = 5"));
                }
                Init::Explicit(PRESET_P5.to_vec())
            }
            InitSpec::Preset(name) => {
                return Err(HarnessError::config("init", format!("unknown preset {name:?}")))
            }
            InitSpec::Explicit(ExplicitInit { theta }) => {
                if theta.len() != 2 * self.p {
                    return Err(HarnessError::config(
                        "init.theta",
                        format!("expected {} values for p = {}, got {}", 2 * self.p, self.p, theta.len()),
                    ));
                }
                if theta.iter().any(|t| !t.is_finite()) {
                    return Err(HarnessError::config("init.theta", "values must be finite"));
                }
                Init::Explicit(theta.clone())
            }
            InitSpec::Random(RandomStarts { random }) => {
                if random.restarts == 0 {
                    return Err(HarnessError::config("init.random.restarts", "must be at least 1"));
                }
                Init::Random {
                    restarts: random.restarts,
                }
            }
        };
        if self.shots == 0 {
            return Err(HarnessError::config("shots", "must be at least 1"));
        }
        if let Some(m) = self.max_evals {
            if self.p > 0 && m < 2 * self.p {
                return Err(HarnessError::config(
                    "max_evals",
                    format!("budget {m} is smaller than the parameter count {}", 2 * self.p),
                ));
            }
        }
        let mut noise = self.noise.resolve()?;
        noise.mitigation = self.mitigation.resolve()?;
        Ok(Experiment {
            instance,
            p: self.p,
            method,
            init,
            shots: self.shots,
            mode: self.mode,
            noise,
            seed: self.seed,
            max_evals: self.max_evals,
            config_hash: self.hash(),
        })
    }
}

impl GraphSource {
    pub fn load(&self) -> Result<MaxCutInstance> {
        match self {
            GraphSource::Named(name) if name == "canonical" => Ok(MaxCutInstance::canonical()),
            GraphSource::Named(name) => Err(HarnessError::config(
                "graph",
                format!("unknown graph {name:?}; use \"canonical\", {{\"file\": ...}} or {{\"n\": ..., \"edges\": ...}}"),
            )),
            GraphSource::File(GraphFile { file }) => {
                let text = read_to_string(file)?;
                MaxCutInstance::parse_edge_list(&text).map_err(|e| HarnessError::Parse {
                    path: file.clone(),
                    msg: e.to_string(),
                })
            }
            GraphSource::Inline(InlineGraph { n, edges }) => {
                let mut pairs = Vec::with_capacity(edges.len());
                let mut weights = Vec::with_capacity(edges.len());
                for (i, e) in edges.iter().enumerate() {
                    let field = || format!("graph.edges[{i}]");
                    let index = |x: f64| {
                        (x >= 0.0 && x.fract() == 0.0)
                            .then_some(x as usize)
                            .ok_or_else(|| HarnessError::config(field(), "node indices must be non-negative integers"))
                    };
                    match e.as_slice() {
                        [u, v] => {
                            pairs.push((index(*u)?, index(*v)?));
                            weights.push(1.0);
                        }
                        [u, v, w] => {
                            pairs.push((index(*u)?, index(*v)?));
                            weights.push(*w);
                        }
                        _ => return Err(HarnessError::config(field(), "expected [u, v] or [u, v, w]")),
                    }
                }
                MaxCutInstance::new(*n, pairs, weights).map_err(|e| HarnessError::config("graph", e.to_string()))
            }
        }
    }
}

impl NoiseSpec {
    pub fn resolve(&self) -> Result<NoiseConfig> {
        let config = match self {
            NoiseSpec::Preset(name) => match name.as_str() {
                "none" => NoiseConfig::default(),
                "ibm-bounds" => NoiseConfig::ibm_bounds(),
                "coherent-only" => NoiseConfig::coherent_only(COHERENT_ONLY_EPSILON),
                "dephase-only" => NoiseConfig::dephase_only(DEPHASE_ONLY_SIGMA),
                other => {
                    return Err(HarnessError::config(
                        "noise",
                        format!("unknown preset {other:?}; expected none, ibm-bounds, coherent-only or dephase-only"),
                    ))
                }
            },
            NoiseSpec::Explicit(v) => NoiseConfig {
                p1q: v.p1q,
                p2q: v.p2q,
                p_readout: v.p_readout,
                epsilon_coherent: v.epsilon_coherent,
                sigma_dephase: v.sigma_dephase,
                ..NoiseConfig::default()
            },
        };
        config
            .validate()
            .map_err(|e| HarnessError::config("noise", e.to_string()))?;
        Ok(config)
    }
}

impl MitigationSpec {
    pub fn resolve(&self) -> Result<Mitigation> {
        let dd = match &self.dd {
            None => None,
            Some(s) => Some(
                s.parse::<DdSequence>()
                    .map_err(|e| HarnessError::config("mitigation.dd", e.to_string()))?,
            ),
        };
        let schedule: SchedulePolicy = self
            .schedule
            .parse()
            .map_err(|e: qaoa_core::Error| HarnessError::config("mitigation.schedule", e.to_string()))?;
        Ok(Mitigation {
            twirling: self.twirling,
            dd,
            schedule,
        })
    }
}

/// Axes of a sweep; an empty axis keeps the base value.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepAxes {
    pub p: Vec<usize>,
    pub method: Vec<String>,
    pub noise: Vec<NoiseSpec>,
    pub mitigation: Vec<MitigationSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub base: ExperimentConfig,
    #[serde(default)]
    pub axes: SweepAxes,
}

impl SweepConfig {
    pub fn from_json(text: &str) -> std::result::Result<Self, String> {
        parse_json(text)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = read_to_string(path)?;
        let mut config = Self::from_json(&text).map_err(|msg| HarnessError::Parse {
            path: path.to_path_buf(),
            msg,
        })?;
        if let GraphSource::File(GraphFile { file }) = &mut config.base.graph {
            if file.is_relative() {
                if let Some(dir) = path.parent() {
                    *file = dir.join(&*file);
                }
            }
        }
        Ok(config)
    }
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str) -> std::result::Result<T, String> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        if path == "." {
            e.inner().to_string()
        } else {
            format!("field `{path}`: {}", e.inner())
        }
    })
}
