use std::cmp::Ordering;

use super::{DocumentNetwork, NodeId, PprScores};
use crate::error::{Error, Result};

/// A top-k extraction. `kept[new] == old`; new ids follow ascending old ids.
#[derive(Debug, Clone, PartialEq)]
pub struct Subgraph {
    pub network: DocumentNetwork,
    pub kept: Vec<NodeId>,
}

impl Subgraph {
    pub fn remap(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.kept.iter().enumerate().map(|(new, &old)| (old, new))
    }
}

/// Keeps the `k` best-scored nodes (ties broken by ascending title, then id)
/// and every edge between them.
pub fn topk_subgraph(network: &DocumentNetwork, scores: &PprScores, titles: &[String], k: usize) -> Result<Subgraph> {
    let n = network.node_count();
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    if k > n {
        return Err(Error::invalid(format!("k = {k} exceeds the {n} nodes of the network")));
    }
    if scores.scores.len() != n || titles.len() != n {
        return Err(Error::invalid("scores and titles must cover every node"));
    }
    let mut order: Vec<NodeId> = (0..n).collect();
    order.sort_by(|&a, &b| {
        scores.scores[b]
            .partial_cmp(&scores.scores[a])
            .unwrap_or(Ordering::Equal)
            .then_with(|| titles[a].cmp(&titles[b]))
            .then(a.cmp(&b))
    });
    let mut kept = order[..k].to_vec();
    kept.sort_unstable();
    Ok(Subgraph {
        network: network.induced(&kept),
        kept,
    })
}
