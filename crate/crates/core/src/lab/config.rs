//! Experiment configuration: JSON ingestion and validation.

use std::fmt;
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::identifiability::{gamma_pathological_direction, Basis, Direction, GridSpec};
use crate::kernels::{Divergence, Kernel};
use crate::measures::MixingMeasure;
use crate::posterior::{LengthLaw, McmcConfig, PriorSpec};
use crate::probes::DEFAULT_ELL_GRID;
use crate::products::Method;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Subcommand {
    Distance,
    Divergence,
    Identify,
    Witness,
    Probe,
    Minimax,
    PosteriorSim,
}

impl Subcommand {
    pub const ALL: [Subcommand; 7] = [
        Subcommand::Distance,
        Subcommand::Divergence,
        Subcommand::Identify,
        Subcommand::Witness,
        Subcommand::Probe,
        Subcommand::Minimax,
        Subcommand::PosteriorSim,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Subcommand::Distance => "distance",
            Subcommand::Divergence => "divergence",
            Subcommand::Identify => "identify",
            Subcommand::Witness => "witness",
            Subcommand::Probe => "probe",
            Subcommand::Minimax => "minimax",
            Subcommand::PosteriorSim => "posterior-sim",
        }
    }
}

impl fmt::Display for Subcommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Subcommand {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Subcommand::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::schema("subcommand", format!("unknown subcommand `{s}`")))
    }
}

fn default_ell_grid() -> Vec<f64> {
    DEFAULT_ELL_GRID.to_vec()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistanceParams {
    #[serde(default = "DistanceParams::default_n")]
    pub n_values: Vec<f64>,
    #[serde(default = "DistanceParams::default_p")]
    pub wasserstein_p: Vec<f64>,
    #[serde(default)]
    pub r_pairs: Vec<(f64, f64)>,
}

impl DistanceParams {
    fn default_n() -> Vec<f64> {
        vec![1.0]
    }
    fn default_p() -> Vec<f64> {
        vec![1.0]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivergenceParams {
    pub n_values: Vec<usize>,
    #[serde(default = "DivergenceParams::default_which")]
    pub divergences: Vec<Divergence>,
    #[serde(default)]
    pub mc_samples: Option<usize>,
    #[serde(default)]
    pub method: Option<Method>,
    /// Sequence lengths for `d_{m,h}`.
    #[serde(default)]
    pub lengths: Option<Vec<usize>>,
}

impl DivergenceParams {
    fn default_which() -> Vec<Divergence> {
        vec![Divergence::Tv, Divergence::Hellinger]
    }
}

/// A perturbation direction given explicitly or by name.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DirectionSpec {
    Explicit(Direction),
    Preset { preset: DirectionPreset },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DirectionPreset {
    /// `a₁ = (0, β/α)`, `b = (−1, 1)` for a gamma pair differing by `(1, 0)`.
    GammaPathological,
}

impl DirectionSpec {
    pub fn resolve(&self, g0: &MixingMeasure) -> Result<Direction> {
        match self {
            DirectionSpec::Explicit(d) => Ok(d.clone()),
            DirectionSpec::Preset { preset: DirectionPreset::GammaPathological } => {
                let a = g0.atom(0);
                if a.len() != 2 {
                    return Err(Error::InvalidDirection("the gamma preset needs (α, β) atoms".into()));
                }
                Ok(gamma_pathological_direction(a[0], a[1]))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case", deny_unknown_fields)]
pub enum IdentifyCheck {
    Vandermonde { points: Vec<f64>, basis: Basis },
    BernoulliSystem { n_values: Vec<usize> },
    Gram {
        #[serde(default = "auto_grid")]
        grid: GridSpec,
    },
    Direction {
        direction: DirectionSpec,
        #[serde(default = "auto_grid")]
        grid: GridSpec,
    },
    MomentMap { theta: Vec<f64> },
}

fn auto_grid() -> GridSpec {
    GridSpec::Auto
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentifyParams {
    pub checks: Vec<IdentifyCheck>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessParams {
    #[serde(default = "WitnessParams::default_a")]
    pub a_values: Vec<f64>,
}

impl WitnessParams {
    fn default_a() -> Vec<f64> {
        vec![1.0, 2.0]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "probe", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProbeParams {
    InverseRatio {
        n: usize,
        direction: DirectionSpec,
        #[serde(default = "default_ell_grid")]
        ell_grid: Vec<f64>,
        #[serde(default = "default_tv")]
        divergence: Divergence,
        #[serde(default)]
        mc_samples: Option<usize>,
    },
    CurvatureLocscale {
        #[serde(default = "default_ell_grid")]
        ell_grid: Vec<f64>,
        #[serde(default)]
        mc_samples: Option<usize>,
    },
    SqrtN {
        psi_exponent: f64,
        n_grid: Vec<usize>,
        eps_grid: Vec<f64>,
    },
    ImpactDr {
        direction: DirectionSpec,
        r: f64,
        n: usize,
        #[serde(default = "default_ell_grid")]
        ell_grid: Vec<f64>,
        #[serde(default = "default_tv")]
        divergence: Divergence,
        #[serde(default)]
        mc_samples: Option<usize>,
    },
    WeightOnly {
        n: usize,
        #[serde(default = "default_ell_grid")]
        ell_grid: Vec<f64>,
        #[serde(default)]
        mc_samples: Option<usize>,
    },
}

fn default_tv() -> Divergence {
    Divergence::Tv
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LeCamCase {
    pub m: f64,
    pub n: f64,
    pub gamma: f64,
    pub beta0: f64,
    pub a: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MinimaxParams {
    pub cases: Vec<LeCamCase>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosteriorParams {
    pub m_grid: Vec<usize>,
    pub length_law: LengthLaw,
    pub replicates: usize,
    pub prior: PriorSpec,
    #[serde(default)]
    pub mcmc: McmcConfig,
    #[serde(default)]
    pub identifiable_length: Option<usize>,
}

/// Subcommand-specific parameters.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Task {
    Distance(DistanceParams),
    Divergence(DivergenceParams),
    Identify(IdentifyParams),
    Witness(WitnessParams),
    Probe(ProbeParams),
    Minimax(MinimaxParams),
    PosteriorSim(PosteriorParams),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub subcommand: Subcommand,
    pub seed: u64,
    /// Worker threads; never changes results.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel: Option<Kernel>,
    pub measures: Vec<MixingMeasure>,
    pub params: Task,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope {
    #[serde(default)]
    subcommand: Option<String>,
    seed: u64,
    #[serde(default)]
    workers: Option<usize>,
    #[serde(default)]
    kernel: Option<Kernel>,
    #[serde(default)]
    params: Option<Value>,
}

fn at<T: DeserializeOwned>(value: Value, prefix: &str) -> Result<T> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let inner = e.path().to_string();
        let path = match (prefix.is_empty(), inner.as_str()) {
            (true, p) => p.to_string(),
            (false, ".") => prefix.to_string(),
            (false, p) => format!("{prefix}.{p}"),
        };
        let path = if path.is_empty() { ".".into() } else { path };
        Error::schema(path, e.into_inner().to_string())
    })
}

/// Parses a configuration whose `subcommand` field names the task.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    parse_config_for(text, None)
}

/// Parses a configuration for `subcommand`. A `subcommand` field in the text,
/// if present, must agree.
pub fn parse_config_for(text: &str, subcommand: Option<Subcommand>) -> Result<ExperimentConfig> {
    let root: Value = serde_json::from_str(text).map_err(|e| Error::schema(".", e.to_string()))?;
    let Some(obj) = root.as_object() else {
        return Err(Error::schema(".", "configuration must be a JSON object"));
    };
    match obj.get("seed") {
        None => return Err(Error::schema("seed", "a 64-bit master seed is required")),
        Some(v) if v.as_u64().is_none() => {
            return Err(Error::schema("seed", "seed must be an unsigned 64-bit integer"))
        }
        _ => {}
    }
    // Measures are checked one by one so that errors carry their index.
    let mut stripped = obj.clone();
    let raw_measures = stripped.remove("measures");
    let env: Envelope = at(Value::Object(stripped), "")?;

    let named = env.subcommand.as_deref().map(Subcommand::from_str).transpose()?;
    let subcommand = match (subcommand, named) {
        (Some(a), Some(b)) if a != b => {
            return Err(Error::schema("subcommand", format!("config is for `{b}`, invoked as `{a}`")))
        }
        (Some(a), _) => a,
        (None, Some(b)) => b,
        (None, None) => return Err(Error::schema("subcommand", "subcommand is required")),
    };
    if env.workers == Some(0) {
        return Err(Error::schema("workers", "worker count must be ≥ 1"));
    }
    if let Some(k) = &env.kernel {
        k.validate_spec().map_err(|e| Error::schema("kernel", e.to_string()))?;
    }

    let mut measures = Vec::new();
    match raw_measures {
        None | Some(Value::Null) => {}
        Some(Value::Array(items)) => {
            for (i, item) in items.into_iter().enumerate() {
                let g: MixingMeasure = at(item, &format!("measures[{i}]"))?;
                if let Some(kernel) = &env.kernel {
                    for (j, a) in g.atoms().iter().enumerate() {
                        kernel
                            .validate(a)
                            .map_err(|e| Error::schema(format!("measures[{i}].atoms[{j}]"), e.to_string()))?;
                    }
                }
                measures.push(g);
            }
        }
        Some(_) => return Err(Error::schema("measures", "expected an array of mixing measures")),
    }

    let params = env.params.unwrap_or(Value::Object(Default::default()));
    let task = match subcommand {
        Subcommand::Distance => Task::Distance(at(params, "params")?),
        Subcommand::Divergence => Task::Divergence(at(params, "params")?),
        Subcommand::Identify => Task::Identify(at(params, "params")?),
        Subcommand::Witness => Task::Witness(at(params, "params")?),
        Subcommand::Probe => Task::Probe(at(params, "params")?),
        Subcommand::Minimax => Task::Minimax(at(params, "params")?),
        Subcommand::PosteriorSim => Task::PosteriorSim(at(params, "params")?),
    };
    let config = ExperimentConfig {
        subcommand,
        seed: env.seed,
        workers: env.workers,
        kernel: env.kernel,
        measures,
        params: task,
    };
    config.check_requirements()?;
    Ok(config)
}

impl ExperimentConfig {
    /// Canonical JSON text; parsing it back yields an equal config.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn kernel(&self) -> Result<&Kernel> {
        self.kernel.as_ref().ok_or_else(|| Error::schema("kernel", format!("`{}` needs a kernel", self.subcommand)))
    }

    fn need_measures(&self, count: usize) -> Result<()> {
        if self.measures.len() < count {
            return Err(Error::schema(
                "measures",
                format!("`{}` needs at least {count} measure(s), got {}", self.subcommand, self.measures.len()),
            ));
        }
        Ok(())
    }

    fn check_requirements(&self) -> Result<()> {
        match &self.params {
            Task::Distance(_) => self.need_measures(2),
            Task::Divergence(p) => {
                self.kernel()?;
                if p.n_values.is_empty() || p.n_values.contains(&0) {
                    return Err(Error::schema("params.n_values", "need positive sequence lengths"));
                }
                self.need_measures(2)
            }
            Task::Identify(p) => {
                for (i, c) in p.checks.iter().enumerate() {
                    match c {
                        IdentifyCheck::Vandermonde { .. } => {}
                        IdentifyCheck::BernoulliSystem { .. } => self.need_measures(1)?,
                        IdentifyCheck::Gram { .. } | IdentifyCheck::Direction { .. } => {
                            self.kernel()?;
                            self.need_measures(1)?;
                        }
                        IdentifyCheck::MomentMap { .. } => {
                            self.kernel().map_err(|_| {
                                Error::schema(format!("params.checks[{i}]"), "moment maps need a composite kernel")
                            })?;
                        }
                    }
                }
                Ok(())
            }
            Task::Witness(_) => {
                if !matches!(self.kernel, None | Some(Kernel::Bernoulli)) {
                    return Err(Error::schema("kernel", "the witness construction is for Bernoulli kernels"));
                }
                self.need_measures(1)
            }
            Task::Probe(p) => {
                if !matches!(p, ProbeParams::CurvatureLocscale { .. }) {
                    self.kernel()?;
                }
                self.need_measures(1)
            }
            Task::Minimax(p) => {
                if p.cases.is_empty() {
                    return Err(Error::schema("params.cases", "at least one case is required"));
                }
                Ok(())
            }
            Task::PosteriorSim(_) => {
                self.kernel()?;
                self.need_measures(1)
            }
        }
    }
}
