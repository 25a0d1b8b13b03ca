//! Link scoring models and the prediction file format.

mod atilp;
mod deepwalk;
mod lsa;

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use atilp::{atilp_features, compute_atilp_scores, fit_atilp, fit_ols, score_atilp, AtilpModel, AtilpSampling};
pub use deepwalk::{
    fit_deepwalk, generate_walks, score_deepwalk, sgns_gradient, sgns_loss, DeepWalkModel, DeepWalkParams, SgnsGradient,
};
pub use lsa::{score_lsa, LsaScorer};

use crate::anchors::AnchorMap;
use crate::dataset::Article;
use crate::error::{Error, Result};
use crate::graph::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Transductive,
    Inductive,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Transductive => "transductive",
            Mode::Inductive => "inductive",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "transductive" => Ok(Mode::Transductive),
            "inductive" => Ok(Mode::Inductive),
            other => Err(Error::invalid(format!("unknown mode {other:?}"))),
        }
    }
}

/// A scoring method known to the evaluation harness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Method {
    Random,
    AtTitle,
    AtAnchor,
    Lsa,
    DeepWalk,
    Atilp,
    /// Scores read from `predictions.tsv` files. `{run}` and `{mode}` in the
    /// path are replaced per evaluation run.
    External { name: String, path: String },
}

impl Method {
    pub const BUILTIN: [Method; 6] = [
        Method::Random,
        Method::AtTitle,
        Method::AtAnchor,
        Method::Lsa,
        Method::DeepWalk,
        Method::Atilp,
    ];

    pub fn name(&self) -> &str {
        match self {
            Method::Random => "random",
            Method::AtTitle => "at_title",
            Method::AtAnchor => "at_anchor",
            Method::Lsa => "lsa",
            Method::DeepWalk => "deepwalk",
            Method::Atilp => "atilp",
            Method::External { name, .. } => name,
        }
    }

    /// Row label for report tables.
    pub fn label(&self) -> &str {
        match self {
            Method::Random => "Random",
            Method::AtTitle => "AT (title)",
            Method::AtAnchor => "AT (anchor)",
            Method::Lsa => "LSA",
            Method::DeepWalk => "DW",
            Method::Atilp => "ATILP",
            Method::External { name, .. } => name,
        }
    }

    /// Binary predictors emit 0/1 and are not thresholded.
    pub fn is_binary(&self) -> bool {
        matches!(self, Method::AtTitle | Method::AtAnchor)
    }

    pub fn supports(&self, mode: Mode) -> bool {
        !(matches!(self, Method::DeepWalk) && mode == Mode::Inductive)
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::BUILTIN
            .iter()
            .find(|m| m.name() == s)
            .cloned()
            .ok_or_else(|| Error::invalid(format!("unknown method {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub source: NodeId,
    pub target: NodeId,
    pub score: f64,
}

/// 1 iff some pattern of `target` occurs in the source abstract.
pub fn predict_at(map: &AnchorMap, source: &Article, target: NodeId) -> Result<bool> {
    if target >= map.article_count() {
        return Err(Error::invalid(format!("unknown target id {target}")));
    }
    Ok(map.scan_candidates(source).iter().any(|c| c.target == target))
}

/// Uniform score in `[0, 1)` determined by `(seed, index)` alone.
pub fn score_random(seed: u64, index: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_word_pos(u128::from(index) * 2);
    rng.gen()
}

pub fn write_predictions(path: &Path, predictions: &[Prediction]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for p in predictions {
        writeln!(w, "{}\t{}\t{}", p.source, p.target, p.score)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_predictions(path: &Path) -> Result<Vec<Prediction>> {
    let mut out = Vec::new();
    for (i, line) in BufReader::new(File::open(path)?).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let bad = |msg: String| Error::format(path, i + 1, msg);
        let fields: Vec<&str> = line.split('\t').collect();
        let [s, t, score] = fields[..] else {
            return Err(bad(format!("expected 3 fields, found {}", fields.len())));
        };
        let source = s.trim().parse().map_err(|e| bad(format!("source: {e}")))?;
        let target = t.trim().parse().map_err(|e| bad(format!("target: {e}")))?;
        let score: f64 = score.trim().parse().map_err(|e| bad(format!("score: {e}")))?;
        if !(0.0..=1.0).contains(&score) {
            return Err(bad(format!("score {score} outside [0, 1]")));
        }
        out.push(Prediction { source, target, score });
    }
    Ok(out)
}
