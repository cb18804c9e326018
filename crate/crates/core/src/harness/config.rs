use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::asymptotics::AcceptabilityParams;
use crate::error::{Error, Result};
use crate::models::CountProvider;
use crate::sampling::{Family, ModelParam, ModelSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Ratio,
    TvExact,
    Concentration,
    #[serde(rename = "expectation_R")]
    ExpectationR,
    EnumAccuracy,
    Normalization,
}

impl Experiment {
    pub const ALL: [Experiment; 6] = [
        Experiment::Ratio,
        Experiment::TvExact,
        Experiment::Concentration,
        Experiment::ExpectationR,
        Experiment::EnumAccuracy,
        Experiment::Normalization,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Ratio => "ratio",
            Experiment::TvExact => "tv_exact",
            Experiment::Concentration => "concentration",
            Experiment::ExpectationR => "expectation_R",
            Experiment::EnumAccuracy => "enum_accuracy",
            Experiment::Normalization => "normalization",
        }
    }
}

impl std::str::FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::config(format!("unknown experiment '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Jsonl,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "jsonl" => Ok(OutputFormat::Jsonl),
            other => Err(Error::config(format!("unknown format '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub model: Option<ModelSpec>,
    pub model_prime: Option<ModelSpec>,
    pub trials: usize,
    pub seed: u64,
    pub count_mode: CountProvider,
    pub regularity: AcceptabilityParams,
    /// Side lengths for the trend experiments; empty means the model's own shape.
    pub sizes: Vec<usize>,
    /// Loop-free shapes for enum_accuracy, which has no model.
    pub digraph: bool,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        ExperimentConfig {
            experiment,
            model: None,
            model_prime: None,
            trials: 1000,
            seed: 0,
            count_mode: CountProvider::Exact,
            regularity: AcceptabilityParams::default(),
            sizes: Vec::new(),
            digraph: false,
            output: None,
            format: OutputFormat::Json,
        }
    }

    pub fn model(mut self, model: ModelSpec) -> Self {
        self.model = Some(model);
        self
    }

    pub fn model_prime(mut self, model: ModelSpec) -> Self {
        self.model_prime = Some(model);
        self
    }

    pub fn trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn count_mode(mut self, mode: CountProvider) -> Self {
        self.count_mode = mode;
        self
    }

    pub fn regularity(mut self, params: AcceptabilityParams) -> Self {
        self.regularity = params;
        self
    }

    pub fn sizes(mut self, sizes: Vec<usize>) -> Self {
        self.sizes = sizes;
        self
    }

    pub fn digraph(mut self, digraph: bool) -> Self {
        self.digraph = digraph;
        self
    }

    pub(crate) fn require_model(&self) -> Result<&ModelSpec> {
        self.model
            .as_ref()
            .ok_or_else(|| Error::config(format!("{} needs a model", self.experiment.name())))
    }

    pub(crate) fn require_trials(&self) -> Result<usize> {
        if self.trials == 0 {
            return Err(Error::config("trials must be at least 1"));
        }
        Ok(self.trials)
    }
}

/// The approximating model paired with each graph model: G_p with V_p, G_k
/// with B_k and G_t with B_t, on the same shape and parameter.
pub fn paired_model(model: &ModelSpec) -> Result<ModelSpec> {
    let partner = match model.family() {
        Family::Gp => Family::Vp,
        Family::Gk => Family::Bk,
        Family::Gt => Family::Bt,
        other => {
            return Err(Error::config(format!(
                "{other} is not a graph model with an approximating partner"
            )))
        }
    };
    ModelSpec::new(partner, model.shape(), model.param().clone())
}

/// Accepts exactly the three graph/approximation pairs with matching shape and parameter.
pub fn validate_pair(model: &ModelSpec, prime: &ModelSpec) -> Result<()> {
    let expected = paired_model(model)?;
    if &expected != prime {
        return Err(Error::config(format!(
            "({model}, {prime}) is not one of the compared pairs; expected ({model}, {expected})"
        )));
    }
    Ok(())
}

/// Same model family and parameter kind on an n×n (or n-vertex loop-free) shape.
///
/// k keeps its density (rounded down) and t becomes the regular column
/// vector nearest the original column density.
pub fn rescale(model: &ModelSpec, n: usize) -> Result<ModelSpec> {
    let old = model.shape();
    let shape = if old.loops_forbidden() {
        crate::domain::Shape::digraph(n)?
    } else {
        crate::domain::Shape::new(n, n)?
    };
    let param = match model.param() {
        ModelParam::P(p) => ModelParam::P(p.clone()),
        ModelParam::K(k) => ModelParam::K(k * shape.cell_count() as u64 / old.cell_count() as u64),
        ModelParam::T(t) => {
            let total: u64 = t.iter().map(|&x| x as u64).sum();
            let density = total as f64 / old.cell_count() as f64;
            let d = (density * shape.col_capacity() as f64).round() as u32;
            ModelParam::T(vec![d; shape.n()])
        }
    };
    ModelSpec::new(model.family(), shape, param)
}
