use std::collections::{BTreeMap, HashSet};
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::anchors::{AnchorMap, CandidatePair, MatchedString};
use crate::dataset::Article;
use crate::error::{Error, Result};
use crate::graph::{DocumentNetwork, NodeId};
use crate::predictors::Mode;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestPair {
    pub source: NodeId,
    pub target: NodeId,
    pub label: bool,
    /// Distinct anchor-map strings found in the source; empty when the pair
    /// is not an anchor candidate.
    pub matched: Vec<String>,
}

impl TestPair {
    pub fn key(&self) -> (NodeId, NodeId) {
        (self.source, self.target)
    }

    pub fn candidate(&self) -> CandidatePair {
        CandidatePair {
            source: self.source,
            target: self.target,
            matched: self
                .matched
                .iter()
                .map(|p| MatchedString {
                    pattern: p.clone(),
                    span: (0, 0),
                })
                .collect(),
            label: Some(self.label),
        }
    }
}

#[derive(Debug, Clone)]
pub struct EvalSplit {
    pub mode: Mode,
    pub train_network: DocumentNetwork,
    /// Sorted by `(source, target)`, no duplicates.
    pub test_pairs: Vec<TestPair>,
    pub hidden_edges: Vec<(NodeId, NodeId)>,
    pub hidden_nodes: Vec<NodeId>,
    pub run_seed: u64,
}

impl EvalSplit {
    /// Documents whose text and edges are available for fitting.
    pub fn visible(&self) -> Vec<bool> {
        let mut v = vec![true; self.train_network.node_count()];
        for &h in &self.hidden_nodes {
            v[h] = false;
        }
        v
    }

    pub fn positives(&self) -> usize {
        self.test_pairs.iter().filter(|p| p.label).count()
    }

    pub fn negatives(&self) -> usize {
        self.test_pairs.len() - self.positives()
    }

    /// `source <TAB> target <TAB> label`
    pub fn write_test_pairs(&self, w: &mut impl Write) -> Result<()> {
        for p in &self.test_pairs {
            writeln!(w, "{}\t{}\t{}", p.source, p.target, u8::from(p.label))?;
        }
        Ok(())
    }
}

/// `k` distinct indices from `0..n` by a partial Fisher–Yates shuffle, in
/// draw order.
pub fn sample_indices(n: usize, k: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    for i in 0..k.min(n) {
        let j = rng.gen_range(i..n);
        pool.swap(i, j);
    }
    pool.truncate(k.min(n));
    pool
}

fn hidden_count(ratio: f64, n: usize) -> Result<usize> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::invalid(format!("split ratio must lie in (0, 1), got {ratio}")));
    }
    Ok((ratio * n as f64).round() as usize)
}

fn candidates_by_target(map: &AnchorMap, article: &Article) -> BTreeMap<NodeId, Vec<String>> {
    map.scan_candidates(article)
        .into_iter()
        .map(|c| (c.target, c.patterns().into_iter().map(str::to_owned).collect()))
        .collect()
}

/// Hides `round(ratio · n_E)` edges. Test pairs for each source that lost an
/// edge: its hidden edges as positives and its anchor candidates that are not
/// edges of the full network as negatives.
pub fn split_transductive(
    network: &DocumentNetwork,
    map: &AnchorMap,
    articles: &[Article],
    ratio: f64,
    seed: u64,
) -> Result<EvalSplit> {
    let edges = network.edge_pairs();
    let k = hidden_count(ratio, edges.len())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hidden: Vec<(NodeId, NodeId)> = sample_indices(edges.len(), k, &mut rng)
        .into_iter()
        .map(|i| edges[i])
        .collect();
    hidden.sort_unstable();
    let hidden_set: HashSet<(NodeId, NodeId)> = hidden.iter().copied().collect();
    let train_network = network.without_edges(&hidden_set);

    let mut by_source: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    for &(s, t) in &hidden {
        by_source.entry(s).or_default().push(t);
    }
    let mut test_pairs = Vec::new();
    for (&s, targets) in &by_source {
        let mut cands = candidates_by_target(map, &articles[s]);
        let mut rows: BTreeMap<NodeId, TestPair> = BTreeMap::new();
        for &t in targets {
            let matched = cands.remove(&t).unwrap_or_default();
            rows.insert(t, TestPair { source: s, target: t, label: true, matched });
        }
        for (t, matched) in cands {
            if !network.has_edge(s, t) {
                rows.insert(t, TestPair { source: s, target: t, label: false, matched });
            }
        }
        test_pairs.extend(rows.into_values());
    }
    Ok(EvalSplit {
        mode: Mode::Transductive,
        train_network,
        test_pairs,
        hidden_edges: hidden,
        hidden_nodes: Vec::new(),
        run_seed: seed,
    })
}

/// Hides `round(ratio · n_V)` documents with all their edges. Test pairs for
/// each hidden document: its edges to retained documents as positives and its
/// remaining anchor candidates among retained documents as negatives.
pub fn split_inductive(
    network: &DocumentNetwork,
    map: &AnchorMap,
    articles: &[Article],
    ratio: f64,
    seed: u64,
) -> Result<EvalSplit> {
    let n = network.node_count();
    let k = hidden_count(ratio, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hidden = sample_indices(n, k, &mut rng);
    hidden.sort_unstable();
    let mut removed = vec![false; n];
    for &h in &hidden {
        removed[h] = true;
    }
    let train_network = network.without_nodes(&removed);

    let mut test_pairs = Vec::new();
    let mut hidden_edges = Vec::new();
    for &s in &hidden {
        let mut cands = candidates_by_target(map, &articles[s]);
        cands.retain(|t, _| !removed[*t]);
        let mut rows: BTreeMap<NodeId, TestPair> = BTreeMap::new();
        for e in network.out_edges(s) {
            hidden_edges.push((s, e.target));
            if removed[e.target] {
                continue;
            }
            let matched = cands.remove(&e.target).unwrap_or_default();
            rows.insert(
                e.target,
                TestPair {
                    source: s,
                    target: e.target,
                    label: true,
                    matched,
                },
            );
        }
        for (t, matched) in cands {
            rows.insert(t, TestPair { source: s, target: t, label: false, matched });
        }
        test_pairs.extend(rows.into_values());
    }
    Ok(EvalSplit {
        mode: Mode::Inductive,
        train_network,
        test_pairs,
        hidden_edges,
        hidden_nodes: hidden,
        run_seed: seed,
    })
}

pub fn split(
    mode: Mode,
    network: &DocumentNetwork,
    map: &AnchorMap,
    articles: &[Article],
    ratio: f64,
    seed: u64,
) -> Result<EvalSplit> {
    match mode {
        Mode::Transductive => split_transductive(network, map, articles, ratio, seed),
        Mode::Inductive => split_inductive(network, map, articles, ratio, seed),
    }
}
