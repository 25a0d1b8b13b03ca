//! String → article maps and candidate-link generation.
//!
//! Patterns and documents are compared after normalization: text is split into
//! lowercased alphanumeric tokens re-joined by single spaces. A pattern matches
//! only on whole tokens, so "art" never matches inside "party".

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use aho_corasick::{AhoCorasick, MatchKind};
use serde::{Deserialize, Serialize};

use crate::dataset::{escape_field, Article};
use crate::error::{Error, Result};
use crate::graph::{DocumentNetwork, NodeId};
use crate::text::{token_spans, tokenize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapMode {
    Title,
    Anchor,
}

pub fn normalize_pattern(s: &str) -> String {
    tokenize(s).join(" ")
}

/// Normalized form of a text with token offsets back into the original.
#[derive(Debug, Clone)]
pub struct NormalizedText {
    pub text: String,
    norm_spans: Vec<(usize, usize)>,
    orig_spans: Vec<(usize, usize)>,
}

impl NormalizedText {
    pub fn new(original: &str) -> Self {
        let orig_spans = token_spans(original);
        let mut text = String::with_capacity(original.len());
        let mut norm_spans = Vec::with_capacity(orig_spans.len());
        for (i, &(s, e)) in orig_spans.iter().enumerate() {
            if i > 0 {
                text.push(' ');
            }
            let start = text.len();
            text.push_str(&original[s..e].to_lowercase());
            norm_spans.push((start, text.len()));
        }
        NormalizedText {
            text,
            norm_spans,
            orig_spans,
        }
    }

    pub fn token_count(&self) -> usize {
        self.norm_spans.len()
    }

    /// Original byte span for a normalized range, if it starts and ends on
    /// token boundaries.
    pub fn original_span(&self, start: usize, end: usize) -> Option<(usize, usize)> {
        let first = self.norm_spans.binary_search_by_key(&start, |s| s.0).ok()?;
        let last = self.norm_spans.binary_search_by_key(&end, |s| s.1).ok()?;
        (first <= last).then(|| (self.orig_spans[first].0, self.orig_spans[last].1))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchedString {
    pub pattern: String,
    /// Byte span in the source abstract.
    pub span: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidatePair {
    pub source: NodeId,
    pub target: NodeId,
    pub matched: Vec<MatchedString>,
    pub label: Option<bool>,
}

impl CandidatePair {
    /// Distinct matched patterns in first-occurrence order.
    pub fn patterns(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for m in &self.matched {
            if !out.contains(&m.pattern.as_str()) {
                out.push(&m.pattern);
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PatternMatch {
    pub pattern: usize,
    pub span: (usize, usize),
}

/// Normalized strings mapped to sets of article ids, compiled into a
/// multi-pattern automaton.
#[derive(Debug, Clone)]
pub struct AnchorMap {
    mode: MapMode,
    article_count: usize,
    patterns: Vec<String>,
    targets: Vec<Vec<NodeId>>,
    automaton: Option<AhoCorasick>,
}

impl AnchorMap {
    /// Builds a map from raw `(string, article)` entries. Strings that
    /// normalize to nothing are dropped.
    pub fn from_entries<I, S>(mode: MapMode, article_count: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, NodeId)>,
        S: AsRef<str>,
    {
        let mut map: BTreeMap<String, Vec<NodeId>> = BTreeMap::new();
        for (raw, id) in entries {
            if id >= article_count {
                return Err(Error::invalid(format!("article id {id} out of range")));
            }
            let p = normalize_pattern(raw.as_ref());
            if !p.is_empty() {
                map.entry(p).or_default().push(id);
            }
        }
        let (patterns, mut targets): (Vec<String>, Vec<Vec<NodeId>>) = map.into_iter().unzip();
        for t in &mut targets {
            t.sort_unstable();
            t.dedup();
        }
        let automaton = if patterns.is_empty() {
            None
        } else {
            Some(
                AhoCorasick::builder()
                    .match_kind(MatchKind::Standard)
                    .build(&patterns)
                    .map_err(|e| Error::invalid(format!("cannot build pattern automaton: {e}")))?,
            )
        };
        Ok(AnchorMap {
            mode,
            article_count,
            patterns,
            targets,
            automaton,
        })
    }

    pub fn mode(&self) -> MapMode {
        self.mode
    }

    pub fn article_count(&self) -> usize {
        self.article_count
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// Patterns in lexicographic order with their sorted target sets.
    pub fn entries(&self) -> impl Iterator<Item = (&str, &[NodeId])> {
        self.patterns
            .iter()
            .map(String::as_str)
            .zip(self.targets.iter().map(Vec::as_slice))
    }

    pub fn pattern(&self, i: usize) -> &str {
        &self.patterns[i]
    }

    pub fn targets(&self, pattern: &str) -> Option<&[NodeId]> {
        let p = normalize_pattern(pattern);
        self.patterns
            .binary_search(&p)
            .ok()
            .map(|i| self.targets[i].as_slice())
    }

    /// Every token-aligned pattern occurrence in `text`, overlaps included,
    /// ordered by span then pattern index.
    pub fn find_matches(&self, text: &str) -> Vec<PatternMatch> {
        let Some(ac) = &self.automaton else {
            return Vec::new();
        };
        let norm = NormalizedText::new(text);
        let bytes = norm.text.as_bytes();
        let mut out: Vec<PatternMatch> = ac
            .find_overlapping_iter(&norm.text)
            .filter(|m| {
                (m.start() == 0 || bytes[m.start() - 1] == b' ') && (m.end() == bytes.len() || bytes[m.end()] == b' ')
            })
            .filter_map(|m| {
                norm.original_span(m.start(), m.end()).map(|span| PatternMatch {
                    pattern: m.pattern().as_usize(),
                    span,
                })
            })
            .collect();
        out.sort_by_key(|m| (m.span, m.pattern));
        out
    }

    /// Candidate links from `source`: one pair per distinct target of any
    /// matched pattern, self-pairs excluded, ordered by target id.
    pub fn scan_text(&self, source: NodeId, text: &str) -> Vec<CandidatePair> {
        let mut by_target: BTreeMap<NodeId, Vec<MatchedString>> = BTreeMap::new();
        for m in self.find_matches(text) {
            for &t in &self.targets[m.pattern] {
                if t != source {
                    by_target.entry(t).or_default().push(MatchedString {
                        pattern: self.patterns[m.pattern].clone(),
                        span: m.span,
                    });
                }
            }
        }
        by_target
            .into_iter()
            .map(|(target, matched)| CandidatePair {
                source,
                target,
                matched,
                label: None,
            })
            .collect()
    }

    pub fn scan_candidates(&self, article: &Article) -> Vec<CandidatePair> {
        self.scan_text(article.id, &article.text)
    }
}

/// Titles and redirect aliases → article.
pub fn build_title_map(articles: &[Article]) -> Result<AnchorMap> {
    let entries = articles
        .iter()
        .flat_map(|a| std::iter::once(&a.title).chain(&a.aliases).map(move |s| (s.as_str(), a.id)));
    AnchorMap::from_entries(MapMode::Title, articles.len(), entries)
}

/// Every anchor text on every edge → the edge's target.
pub fn build_anchor_map(network: &DocumentNetwork) -> Result<AnchorMap> {
    let entries = network
        .edges()
        .flat_map(|(_, e)| e.anchors.iter().map(move |a| (a.as_str(), e.target)));
    AnchorMap::from_entries(MapMode::Anchor, network.node_count(), entries)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocSamples {
    pub source: NodeId,
    pub positives: Vec<CandidatePair>,
    pub negatives: Vec<CandidatePair>,
}

/// Labels every candidate of every document against `network`.
pub fn build_eval_samples(network: &DocumentNetwork, map: &AnchorMap, articles: &[Article]) -> Vec<DocSamples> {
    articles
        .iter()
        .map(|a| {
            let (positives, negatives) = map
                .scan_candidates(a)
                .into_iter()
                .map(|mut c| {
                    c.label = Some(network.has_edge(c.source, c.target));
                    c
                })
                .partition(|c| c.label == Some(true));
            DocSamples {
                source: a.id,
                positives,
                negatives,
            }
        })
        .collect()
}

/// `source <TAB> target <TAB> label <TAB> pattern|pattern...`
pub fn write_samples(path: &Path, samples: &[DocSamples]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for doc in samples {
        let mut pairs: Vec<&CandidatePair> = doc.positives.iter().chain(&doc.negatives).collect();
        pairs.sort_by_key(|c| c.target);
        for c in pairs {
            let label = u8::from(c.label == Some(true));
            let joined = c.patterns().iter().map(|p| escape_field(p)).collect::<Vec<_>>().join("|");
            writeln!(w, "{}\t{}\t{label}\t{joined}", c.source, c.target)?;
        }
    }
    w.flush()?;
    Ok(())
}
