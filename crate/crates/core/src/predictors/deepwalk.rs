//! DeepWalk: truncated random walks fed to skip-gram with negative sampling.

use rand::distributions::{Distribution, Uniform, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Mode;
use crate::error::{Error, Result};
use crate::graph::{DocumentNetwork, NodeId};
use crate::text::cosine;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DeepWalkParams {
    pub walks_per_node: usize,
    pub walk_length: usize,
    pub window: usize,
    pub negatives: usize,
    pub dimension: usize,
    pub learning_rate: f64,
    /// Walk over edges in both directions; directed walks stop at sinks.
    pub undirected: bool,
}

impl Default for DeepWalkParams {
    fn default() -> Self {
        DeepWalkParams {
            walks_per_node: 80,
            walk_length: 40,
            window: 10,
            negatives: 10,
            dimension: 512,
            learning_rate: 0.025,
            undirected: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeepWalkModel {
    params: DeepWalkParams,
    nodes: usize,
    node_emb: Vec<f64>,
    context_emb: Vec<f64>,
}

impl DeepWalkModel {
    pub fn params(&self) -> &DeepWalkParams {
        &self.params
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn embedding(&self, node: NodeId) -> &[f64] {
        let d = self.params.dimension;
        &self.node_emb[node * d..(node + 1) * d]
    }

    pub fn context_embedding(&self, node: NodeId) -> &[f64] {
        let d = self.params.dimension;
        &self.context_emb[node * d..(node + 1) * d]
    }
}

/// `walks_per_node` rounds; each round visits every node once in a shuffled
/// order and starts one walk there.
pub fn generate_walks(network: &DocumentNetwork, params: &DeepWalkParams, rng: &mut impl Rng) -> Vec<Vec<NodeId>> {
    let adj: Vec<Vec<NodeId>> = if params.undirected {
        network.undirected_neighbors()
    } else {
        (0..network.node_count())
            .map(|s| network.out_edges(s).iter().map(|e| e.target).collect())
            .collect()
    };
    let mut order: Vec<NodeId> = (0..network.node_count()).collect();
    let mut walks = Vec::with_capacity(order.len() * params.walks_per_node);
    for _ in 0..params.walks_per_node {
        order.shuffle(rng);
        for &start in &order {
            let mut walk = Vec::with_capacity(params.walk_length);
            walk.push(start);
            while walk.len() < params.walk_length {
                let Some(&next) = adj[*walk.last().unwrap()].choose(rng) else {
                    break;
                };
                walk.push(next);
            }
            walks.push(walk);
        }
    }
    walks
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `-ln σ(c·o) - Σ ln σ(-c·n)`.
pub fn sgns_loss(center: &[f64], context: &[f64], negatives: &[&[f64]]) -> f64 {
    let pos = -sigmoid(dot(center, context)).ln();
    pos - negatives.iter().map(|n| sigmoid(-dot(center, n)).ln()).sum::<f64>()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SgnsGradient {
    pub center: Vec<f64>,
    pub context: Vec<f64>,
    pub negatives: Vec<Vec<f64>>,
}

pub fn sgns_gradient(center: &[f64], context: &[f64], negatives: &[&[f64]]) -> SgnsGradient {
    let gp = sigmoid(dot(center, context)) - 1.0;
    let mut g_center: Vec<f64> = context.iter().map(|o| gp * o).collect();
    let g_context = center.iter().map(|c| gp * c).collect();
    let mut g_neg = Vec::with_capacity(negatives.len());
    for n in negatives {
        let gn = sigmoid(dot(center, n));
        for (g, x) in g_center.iter_mut().zip(n.iter()) {
            *g += gn * x;
        }
        g_neg.push(center.iter().map(|c| gn * c).collect());
    }
    SgnsGradient {
        center: g_center,
        context: g_context,
        negatives: g_neg,
    }
}

/// One stochastic step on `(center, context)` against the given negatives.
/// Output vectors are updated in place one after another; the input vector
/// receives the accumulated step at the end.
fn sgns_step(
    node_emb: &mut [f64],
    context_emb: &mut [f64],
    d: usize,
    center: NodeId,
    targets: &[(NodeId, f64)],
    lr: f64,
    acc: &mut [f64],
) {
    acc.iter_mut().for_each(|a| *a = 0.0);
    let c = &mut node_emb[center * d..(center + 1) * d];
    for &(t, label) in targets {
        let o = &mut context_emb[t * d..(t + 1) * d];
        let g = lr * (label - sigmoid(dot(c, o)));
        for j in 0..d {
            acc[j] += g * o[j];
            o[j] += g * c[j];
        }
    }
    for (x, a) in c.iter_mut().zip(acc.iter()) {
        *x += a;
    }
}

pub fn fit_deepwalk(network: &DocumentNetwork, params: &DeepWalkParams, seed: u64) -> Result<DeepWalkModel> {
    let n = network.node_count();
    if n == 0 {
        return Err(Error::EmptyInput("DeepWalk needs at least one node".into()));
    }
    let d = params.dimension;
    if d == 0 || params.walk_length == 0 || params.walks_per_node == 0 {
        return Err(Error::invalid("DeepWalk dimension, walk length and walk count must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let walks = generate_walks(network, params, &mut rng);

    let mut counts = vec![0u64; n];
    for w in &walks {
        for &v in w {
            counts[v] += 1;
        }
    }
    let table = WeightedIndex::new(counts.iter().map(|&c| (c as f64).powf(0.75)))
        .map_err(|e| Error::invalid(format!("negative sampling table: {e}")))?;

    let init = Uniform::new(-0.5 / d as f64, 0.5 / d as f64);
    let mut node_emb: Vec<f64> = (0..n * d).map(|_| init.sample(&mut rng)).collect();
    let mut context_emb = vec![0.0; n * d];

    let total: u64 = counts.iter().sum();
    let mut processed = 0u64;
    let mut acc = vec![0.0; d];
    let mut targets = Vec::with_capacity(params.negatives + 1);
    for walk in &walks {
        for (pos, &center) in walk.iter().enumerate() {
            let lr = params.learning_rate * (1.0 - processed as f64 / (total as f64 + 1.0)).max(1e-4);
            processed += 1;
            let lo = pos.saturating_sub(params.window);
            let hi = (pos + params.window).min(walk.len() - 1);
            for (j, &ctx) in walk.iter().enumerate().take(hi + 1).skip(lo) {
                if j == pos {
                    continue;
                }
                targets.clear();
                targets.push((ctx, 1.0));
                for _ in 0..params.negatives {
                    let neg = table.sample(&mut rng);
                    if neg != ctx {
                        targets.push((neg, 0.0));
                    }
                }
                sgns_step(&mut node_emb, &mut context_emb, d, center, &targets, lr, &mut acc);
            }
        }
    }
    Ok(DeepWalkModel {
        params: *params,
        nodes: n,
        node_emb,
        context_emb,
    })
}

/// `(1 + cos) / 2` between node embeddings. Only defined for nodes seen in
/// training, which rules out the inductive setting.
pub fn score_deepwalk(model: &DeepWalkModel, mode: Mode, source: NodeId, target: NodeId) -> Result<f64> {
    if mode == Mode::Inductive {
        return Err(Error::UnsupportedMode("DeepWalk has no embedding for unseen documents".into()));
    }
    if source >= model.nodes || target >= model.nodes {
        return Err(Error::UnsupportedMode(format!(
            "node {} was not part of the training network",
            source.max(target)
        )));
    }
    Ok((1.0 + cosine(model.embedding(source), model.embedding(target))) / 2.0)
}
