//! Declarative pipeline configuration read from TOML.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::EvalConfig;
use crate::predictors::{AtilpSampling, DeepWalkParams, Method, Mode};
use crate::text::DEFAULT_DIMENSION;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub dump: Option<PathBuf>,
    pub dataset: Option<PathBuf>,
    pub out: Option<PathBuf>,
    /// Label used in reports; defaults to the dataset directory name.
    pub name: Option<String>,
    pub seed_articles: Vec<String>,
    pub k: usize,
    pub damping: f64,
    pub eval: EvalSection,
    pub deepwalk: DeepWalkParams,
    pub atilp: AtilpSampling,
    pub external: Vec<ExternalMethod>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalSection {
    pub methods: Vec<String>,
    pub modes: Vec<Mode>,
    pub runs: usize,
    pub base_seed: u64,
    pub transductive_ratio: f64,
    pub inductive_ratio: f64,
    pub lsa_dimension: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExternalMethod {
    pub name: String,
    /// Prediction file path; `{run}` and `{mode}` are substituted per run.
    pub path: String,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            dump: None,
            dataset: None,
            out: None,
            name: None,
            seed_articles: Vec::new(),
            k: 1000,
            damping: 0.85,
            eval: EvalSection::default(),
            deepwalk: DeepWalkParams::default(),
            atilp: AtilpSampling::default(),
            external: Vec::new(),
        }
    }
}

impl Default for EvalSection {
    fn default() -> Self {
        EvalSection {
            methods: Method::BUILTIN.iter().map(|m| m.name().to_string()).collect(),
            modes: vec![Mode::Transductive, Mode::Inductive],
            runs: 5,
            base_seed: 0,
            transductive_ratio: 0.1,
            inductive_ratio: 0.1,
            lsa_dimension: DEFAULT_DIMENSION,
        }
    }
}

impl PipelineConfig {
    /// Parses and validates a config file. Relative paths are resolved
    /// against the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg: PipelineConfig =
            toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [&mut cfg.dump, &mut cfg.dataset, &mut cfg.out].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        for p in [&self.dump, &self.dataset].into_iter().flatten() {
            if !p.exists() {
                return bad(format!("path {} does not exist", p.display()));
            }
        }
        if self.k < 1 {
            return bad("k must be at least 1".into());
        }
        if !(self.damping > 0.0 && self.damping < 1.0) {
            return bad(format!("damping must lie in (0, 1), got {}", self.damping));
        }
        let e = &self.eval;
        for (name, r) in [("transductive_ratio", e.transductive_ratio), ("inductive_ratio", e.inductive_ratio)] {
            if !(r > 0.0 && r < 1.0) {
                return bad(format!("{name} must lie in (0, 1), got {r}"));
            }
        }
        if e.runs < 1 {
            return bad("runs must be at least 1".into());
        }
        if e.lsa_dimension < 1 || self.deepwalk.dimension < 1 {
            return bad("embedding dimensions must be at least 1".into());
        }
        if e.modes.is_empty() {
            return bad("at least one evaluation mode is required".into());
        }
        self.methods()?;
        Ok(())
    }

    pub fn methods(&self) -> Result<Vec<Method>> {
        let mut out: Vec<Method> = Vec::new();
        for name in &self.eval.methods {
            out.push(name.parse().map_err(|e: Error| Error::Config(e.to_string()))?);
        }
        for x in &self.external {
            if out.iter().any(|m| m.name() == x.name) {
                return Err(Error::Config(format!("method name {:?} used twice", x.name)));
            }
            out.push(Method::External {
                name: x.name.clone(),
                path: x.path.clone(),
            });
        }
        if out.is_empty() {
            return Err(Error::Config("no methods configured".into()));
        }
        Ok(out)
    }

    pub fn eval_config(&self) -> Result<EvalConfig> {
        Ok(EvalConfig {
            methods: self.methods()?,
            modes: self.eval.modes.clone(),
            runs: self.eval.runs,
            base_seed: self.eval.base_seed,
            transductive_ratio: self.eval.transductive_ratio,
            inductive_ratio: self.eval.inductive_ratio,
            lsa_dimension: self.eval.lsa_dimension,
            deepwalk: self.deepwalk,
            atilp: self.atilp,
            ..EvalConfig::default()
        })
    }
}
