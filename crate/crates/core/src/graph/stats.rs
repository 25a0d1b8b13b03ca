use std::collections::HashSet;

use serde::Serialize;

use super::DocumentNetwork;
use crate::anchors::DocSamples;
use crate::dataset::Article;
use crate::text::tokenize;

/// Dataset summary; `density_pct` is `n_E / (n_V (n_V - 1))` in percent.
/// Standard deviations are population deviations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NetworkStats {
    pub n_v: usize,
    pub n_e: usize,
    pub density_pct: f64,
    pub n_w: usize,
    pub doc_len_mean: f64,
    pub doc_len_std: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub positives: Option<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub negatives: Option<(f64, f64)>,
}

pub(crate) fn mean_std(values: impl IntoIterator<Item = f64>) -> (f64, f64) {
    let v: Vec<f64> = values.into_iter().collect();
    if v.is_empty() {
        return (0.0, 0.0);
    }
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

pub fn network_stats(network: &DocumentNetwork, articles: &[Article], samples: Option<&[DocSamples]>) -> NetworkStats {
    let n_v = network.node_count();
    let n_e = network.edge_count();
    let density_pct = if n_v > 1 {
        100.0 * n_e as f64 / (n_v as f64 * (n_v as f64 - 1.0))
    } else {
        0.0
    };
    let mut vocab = HashSet::new();
    let mut lengths = Vec::with_capacity(articles.len());
    for a in articles {
        let tokens = tokenize(&a.text);
        lengths.push(tokens.len() as f64);
        vocab.extend(tokens);
    }
    let (doc_len_mean, doc_len_std) = mean_std(lengths);
    let positives = samples.map(|s| mean_std(s.iter().map(|d| d.positives.len() as f64)));
    let negatives = samples.map(|s| mean_std(s.iter().map(|d| d.negatives.len() as f64)));
    NetworkStats {
        n_v,
        n_e,
        density_pct,
        n_w: vocab.len(),
        doc_len_mean,
        doc_len_std,
        positives,
        negatives,
    }
}
