use super::{DocumentNetwork, NodeId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PprParams {
    pub damping: f64,
    pub tolerance: f64,
    pub max_iters: usize,
}

impl Default for PprParams {
    fn default() -> Self {
        PprParams {
            damping: 0.85,
            tolerance: 1e-10,
            max_iters: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PprScores {
    pub seed: NodeId,
    pub damping: f64,
    pub scores: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Personalized PageRank by power iteration.
///
/// Each step follows an out-link with probability `damping` and restarts at
/// `seed` otherwise. Nodes without out-links send all their mass back to the
/// seed. Stops when the L1 change drops below `tolerance`; if `max_iters` is
/// reached first the last iterate is returned with `converged == false`.
pub fn personalized_pagerank(network: &DocumentNetwork, seed: NodeId, params: &PprParams) -> Result<PprScores> {
    let n = network.node_count();
    if seed >= n {
        return Err(Error::invalid(format!("seed {seed} is not a node of a {n}-node network")));
    }
    if !(params.damping > 0.0 && params.damping < 1.0) {
        return Err(Error::invalid(format!("damping must lie in (0, 1), got {}", params.damping)));
    }
    if params.tolerance.is_nan() || params.tolerance <= 0.0 {
        return Err(Error::invalid("tolerance must be positive"));
    }

    let d = params.damping;
    let mut x = vec![0.0; n];
    x[seed] = 1.0;
    let mut next = vec![0.0; n];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < params.max_iters {
        iterations += 1;
        next.iter_mut().for_each(|v| *v = 0.0);
        let mut dangling = 0.0;
        for (u, &mass) in x.iter().enumerate() {
            if mass == 0.0 {
                continue;
            }
            let edges = network.out_edges(u);
            if edges.is_empty() {
                dangling += mass;
            } else {
                let share = d * mass / edges.len() as f64;
                for e in edges {
                    next[e.target] += share;
                }
            }
        }
        next[seed] += d * dangling + (1.0 - d);
        let delta: f64 = x.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut x, &mut next);
        if delta < params.tolerance {
            converged = true;
            break;
        }
    }
    // Mass is conserved analytically; renormalize away rounding drift.
    let total: f64 = x.iter().sum();
    x.iter_mut().for_each(|v| *v /= total);
    Ok(PprScores {
        seed,
        damping: d,
        scores: x,
        iterations,
        converged,
    })
}
