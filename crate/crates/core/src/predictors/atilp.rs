//! Anchor-text informed link prediction: a linear model over three LSA
//! cosines between the anchor text, the source and the target.

use nalgebra::{DMatrix, DVector};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::lsa::LsaScorer;
use crate::anchors::{AnchorMap, CandidatePair};
use crate::dataset::Article;
use crate::error::{Error, Result};
use crate::graph::{DocumentNetwork, NodeId};
use crate::text::cosine;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtilpModel {
    /// Weights of `(s1, s2, s3)`.
    pub coefficients: [f64; 3],
    pub intercept: f64,
    pub positives_used: usize,
    pub negatives_used: usize,
    /// How many samples each class fell short of the requested count.
    pub shortfall: (usize, usize),
}

impl AtilpModel {
    pub fn new(coefficients: [f64; 3], intercept: f64) -> Self {
        AtilpModel {
            coefficients,
            intercept,
            positives_used: 0,
            negatives_used: 0,
            shortfall: (0, 0),
        }
    }

    pub fn linear(&self, s: [f64; 3]) -> f64 {
        self.intercept + self.coefficients.iter().zip(s).map(|(c, x)| c * x).sum::<f64>()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct AtilpSampling {
    pub positives: usize,
    pub negatives: usize,
}

impl Default for AtilpSampling {
    fn default() -> Self {
        AtilpSampling {
            positives: 1000,
            negatives: 1000,
        }
    }
}

/// `(cos(anchor, source), cos(anchor, target), cos(source, target))`.
pub fn atilp_features(lsa: &LsaScorer, source: NodeId, target: NodeId, anchor: &str) -> [f64; 3] {
    let x_at = lsa.embed_text(anchor);
    let (x_s, x_t) = (lsa.doc(source), lsa.doc(target));
    [cosine(&x_at, x_s), cosine(&x_at, x_t), cosine(x_s, x_t)]
}

/// One feature triple per distinct matched string of the pair.
pub fn compute_atilp_scores(lsa: &LsaScorer, pair: &CandidatePair) -> Vec<[f64; 3]> {
    pair.patterns()
        .into_iter()
        .map(|p| atilp_features(lsa, pair.source, pair.target, p))
        .collect()
}

/// Least squares `argmin |X b - y|` with the minimum-norm solution when `X`
/// is rank deficient.
pub fn fit_ols(rows: &[Vec<f64>], y: &[f64]) -> Result<Vec<f64>> {
    if rows.is_empty() || rows.len() != y.len() {
        return Err(Error::invalid("least squares needs one target per non-empty design row"));
    }
    let p = rows[0].len();
    if rows.iter().any(|r| r.len() != p) {
        return Err(Error::invalid("design rows differ in length"));
    }
    let x = DMatrix::from_fn(rows.len(), p, |i, j| rows[i][j]);
    let y = DVector::from_column_slice(y);
    let svd = x.svd(true, true);
    let smax = svd.singular_values.max();
    let eps = smax * (rows.len().max(p) as f64) * f64::EPSILON;
    let b = svd.solve(&y, eps).map_err(|e| Error::invalid(e.to_string()))?;
    Ok(b.iter().copied().collect())
}

/// Samples labelled anchor candidates among `visible` documents, labels them
/// against `train`, and regresses `y ∈ {0, 1}` on the feature triple of each
/// pair's longest matched string plus an intercept.
pub fn fit_atilp(
    train: &DocumentNetwork,
    lsa: &LsaScorer,
    map: &AnchorMap,
    articles: &[Article],
    visible: &[bool],
    sampling: &AtilpSampling,
    seed: u64,
) -> Result<AtilpModel> {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for a in articles.iter().filter(|a| visible[a.id]) {
        for c in map.scan_candidates(a) {
            if !visible[c.target] {
                continue;
            }
            if train.has_edge(c.source, c.target) {
                pos.push(c);
            } else {
                neg.push(c);
            }
        }
    }
    if pos.is_empty() || neg.is_empty() {
        return Err(Error::EmptyInput(format!(
            "ATILP needs both classes; found {} positive and {} negative candidates",
            pos.len(),
            neg.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pick = |pool: &[CandidatePair], want: usize| -> Vec<usize> {
        let mut idx = sample(&mut rng, pool.len(), want.min(pool.len())).into_vec();
        idx.sort_unstable();
        idx
    };
    let pos_idx = pick(&pos, sampling.positives);
    let neg_idx = pick(&neg, sampling.negatives);

    let mut rows = Vec::with_capacity(pos_idx.len() + neg_idx.len());
    let mut y = Vec::with_capacity(rows.capacity());
    for (pool, idx, label) in [(&pos, &pos_idx, 1.0), (&neg, &neg_idx, 0.0)] {
        for &i in idx {
            let c = &pool[i];
            let s = atilp_features(lsa, c.source, c.target, longest_pattern(c));
            rows.push(vec![s[0], s[1], s[2], 1.0]);
            y.push(label);
        }
    }
    let b = fit_ols(&rows, &y)?;
    Ok(AtilpModel {
        coefficients: [b[0], b[1], b[2]],
        intercept: b[3],
        positives_used: pos_idx.len(),
        negatives_used: neg_idx.len(),
        shortfall: (
            sampling.positives.saturating_sub(pos_idx.len()),
            sampling.negatives.saturating_sub(neg_idx.len()),
        ),
    })
}

/// Longest matched string, first on ties. Nested matches share a span start,
/// and the longest is the full anchor.
fn longest_pattern(pair: &CandidatePair) -> &str {
    pair.patterns()
        .into_iter()
        .fold("", |best, p| if p.len() > best.len() { p } else { best })
}

/// Max over matched strings of the linear prediction, clamped to `[0, 1]`.
/// Pairs without matched strings are not anchor candidates and score 0.
pub fn score_atilp(model: &AtilpModel, lsa: &LsaScorer, pair: &CandidatePair) -> f64 {
    compute_atilp_scores(lsa, pair)
        .into_iter()
        .map(|s| model.linear(s))
        .fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.max(v))))
        .map_or(0.0, |v| v.clamp(0.0, 1.0))
}
