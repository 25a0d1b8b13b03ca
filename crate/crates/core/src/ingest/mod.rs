//! Wikipedia dump ingestion: pages → articles with plain-text abstracts and
//! an anchor-annotated link network.

mod dump;
mod redirects;
mod wikitext;

use std::collections::{HashMap, HashSet};

use log::warn;
use serde::Serialize;

pub use dump::{parse_dump, DumpReader, DumpStats, RawPage};
pub use redirects::{resolve_redirect_map, resolve_redirects, RedirectTable, MAX_REDIRECT_CHAIN};
pub use wikitext::{
    extract_abstract, extract_abstract_with_warnings, extract_wikilinks, normalize_title, parse_redirect,
    AnchorOccurrence, LinkedAbstract, MarkupWarnings,
};

use crate::dataset::{Article, Dataset};
use crate::error::Result;
use crate::graph::DocumentNetwork;
use crate::text::tokenize;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct IngestReport {
    pub pages: usize,
    pub mainspace_pages: usize,
    pub articles: usize,
    pub redirects: usize,
    pub link_occurrences: usize,
    pub edges: usize,
    pub unresolved_links: usize,
    pub self_links: usize,
    pub unmatchable_anchors: usize,
    pub duplicate_titles: usize,
    pub dropped_redirects: usize,
    pub markup_warnings: usize,
}

struct PendingArticle {
    title: String,
    abstract_wikitext: String,
}

/// Builds a [`Dataset`] from a page stream.
///
/// Only namespace-0 pages are kept. Article ids follow dump order. Links whose
/// target does not resolve (red links, other namespaces, dead redirects), self
/// links and anchors without any word characters are dropped and counted.
pub fn build_dataset<I>(pages: I) -> Result<(Dataset, IngestReport)>
where
    I: IntoIterator<Item = Result<RawPage>>,
{
    let mut report = IngestReport::default();
    let mut pending: Vec<PendingArticle> = Vec::new();
    let mut title_ids: HashMap<String, usize> = HashMap::new();
    let mut redirects: HashMap<String, String> = HashMap::new();
    let mut markup = MarkupWarnings::default();

    for page in pages {
        let page = page?;
        report.pages += 1;
        if page.namespace != 0 {
            continue;
        }
        report.mainspace_pages += 1;
        let title = normalize_title(&page.title);
        if let (true, Some(target)) = (page.is_redirect, page.redirect_target.as_ref()) {
            redirects.entry(title).or_insert_with(|| normalize_title(target));
            continue;
        }
        if title_ids.contains_key(&title) {
            report.duplicate_titles += 1;
            warn!("duplicate article title {title:?}; keeping the first");
            continue;
        }
        let (abstract_wikitext, w) = extract_abstract_with_warnings(&page.wikitext);
        markup.merge(&w);
        title_ids.insert(title.clone(), pending.len());
        pending.push(PendingArticle {
            title,
            abstract_wikitext,
        });
    }
    report.redirects = redirects.len();

    let article_titles: HashSet<String> = title_ids.keys().cloned().collect();
    let table = resolve_redirect_map(&redirects, &article_titles);
    report.dropped_redirects = table.dropped_cycles + table.dropped_dead + table.dropped_long;

    let mut articles: Vec<Article> = pending
        .iter()
        .enumerate()
        .map(|(id, p)| Article::new(id, p.title.clone(), String::new()))
        .collect();
    for (alias, target) in &table.mapping {
        articles[title_ids[target]].aliases.push(alias.clone());
    }
    for a in &mut articles {
        a.aliases.sort();
    }

    let resolve = |t: &str| {
        title_ids
            .get(t)
            .or_else(|| table.mapping.get(t).and_then(|c| title_ids.get(c)))
            .copied()
    };
    let mut network = DocumentNetwork::new(articles.len());
    for (id, p) in pending.iter().enumerate() {
        let linked = extract_wikilinks(&p.abstract_wikitext, id);
        markup.merge(&linked.warnings);
        for occ in &linked.links {
            report.link_occurrences += 1;
            let Some(target) = resolve(&occ.target_title) else {
                report.unresolved_links += 1;
                continue;
            };
            if target == id {
                report.self_links += 1;
                continue;
            }
            if tokenize(&occ.anchor_text).is_empty() {
                report.unmatchable_anchors += 1;
                continue;
            }
            network.add_link(id, target, occ.anchor_text.clone())?;
        }
        articles[id].text = linked.text;
    }
    report.articles = articles.len();
    report.edges = network.edge_count();
    report.markup_warnings = markup.total();
    Ok((Dataset::new(articles, network)?, report))
}
