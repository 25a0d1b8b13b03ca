//! Directed hyperlink network with per-edge anchor multisets.

mod ppr;
mod stats;
mod subgraph;

use std::collections::HashSet;

pub use ppr::{personalized_pagerank, PprParams, PprScores};
pub use stats::{network_stats, NetworkStats};
pub use subgraph::{topk_subgraph, Subgraph};

use crate::error::{Error, Result};

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub target: NodeId,
    /// Every anchor text that realizes this link, in insertion order.
    pub anchors: Vec<String>,
}

/// Unweighted directed graph. Parallel links merge into one edge whose anchor
/// multiset grows; self-loops are rejected.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DocumentNetwork {
    out: Vec<Vec<Edge>>,
    edge_count: usize,
}

impl DocumentNetwork {
    pub fn new(node_count: usize) -> Self {
        DocumentNetwork {
            out: vec![Vec::new(); node_count],
            edge_count: 0,
        }
    }

    pub fn node_count(&self) -> usize {
        self.out.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Adds `anchor` to the edge `source → target`, creating the edge if needed.
    /// Returns whether a new edge was created.
    pub fn add_link(&mut self, source: NodeId, target: NodeId, anchor: impl Into<String>) -> Result<bool> {
        let n = self.node_count();
        if source >= n || target >= n {
            return Err(Error::invalid(format!("edge ({source}, {target}) out of range for {n} nodes")));
        }
        if source == target {
            return Err(Error::invalid(format!("self-loop on node {source}")));
        }
        let anchor = anchor.into();
        if anchor.is_empty() {
            return Err(Error::invalid("edges need a non-empty anchor"));
        }
        let edges = &mut self.out[source];
        match edges.binary_search_by_key(&target, |e| e.target) {
            Ok(i) => {
                edges[i].anchors.push(anchor);
                Ok(false)
            }
            Err(i) => {
                edges.insert(
                    i,
                    Edge {
                        target,
                        anchors: vec![anchor],
                    },
                );
                self.edge_count += 1;
                Ok(true)
            }
        }
    }

    pub fn out_edges(&self, source: NodeId) -> &[Edge] {
        &self.out[source]
    }

    pub fn out_degree(&self, source: NodeId) -> usize {
        self.out[source].len()
    }

    pub fn has_edge(&self, source: NodeId, target: NodeId) -> bool {
        self.anchors(source, target).is_some()
    }

    pub fn anchors(&self, source: NodeId, target: NodeId) -> Option<&[String]> {
        let edges = self.out.get(source)?;
        edges
            .binary_search_by_key(&target, |e| e.target)
            .ok()
            .map(|i| edges[i].anchors.as_slice())
    }

    /// All edges in ascending `(source, target)` order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, &Edge)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(s, es)| es.iter().map(move |e| (s, e)))
    }

    pub fn edge_pairs(&self) -> Vec<(NodeId, NodeId)> {
        self.edges().map(|(s, e)| (s, e.target)).collect()
    }

    /// Sorted, de-duplicated neighbor lists ignoring edge direction.
    pub fn undirected_neighbors(&self) -> Vec<Vec<NodeId>> {
        let mut adj = vec![Vec::new(); self.node_count()];
        for (s, e) in self.edges() {
            adj[s].push(e.target);
            adj[e.target].push(s);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    /// Copy of the network with the given edges removed.
    pub fn without_edges(&self, removed: &HashSet<(NodeId, NodeId)>) -> Self {
        let mut out = self.out.clone();
        let mut edge_count = self.edge_count;
        for (s, edges) in out.iter_mut().enumerate() {
            let before = edges.len();
            edges.retain(|e| !removed.contains(&(s, e.target)));
            edge_count -= before - edges.len();
        }
        DocumentNetwork { out, edge_count }
    }

    /// Copy of the network in which the flagged nodes keep their ids but lose
    /// every incident edge.
    pub fn without_nodes(&self, removed: &[bool]) -> Self {
        let mut out = self.out.clone();
        let mut edge_count = 0;
        for (s, edges) in out.iter_mut().enumerate() {
            if removed[s] {
                edges.clear();
            } else {
                edges.retain(|e| !removed[e.target]);
            }
            edge_count += edges.len();
        }
        DocumentNetwork { out, edge_count }
    }

    /// Induced subgraph on `keep`; node `keep[i]` becomes node `i`.
    pub fn induced(&self, keep: &[NodeId]) -> Self {
        let mut new_id = vec![None; self.node_count()];
        for (i, &old) in keep.iter().enumerate() {
            new_id[old] = Some(i);
        }
        let mut net = DocumentNetwork::new(keep.len());
        for (i, &old) in keep.iter().enumerate() {
            for e in &self.out[old] {
                if let Some(t) = new_id[e.target] {
                    net.out[i].push(Edge {
                        target: t,
                        anchors: e.anchors.clone(),
                    });
                }
            }
            net.out[i].sort_by_key(|e| e.target);
            net.edge_count += net.out[i].len();
        }
        net
    }
}
