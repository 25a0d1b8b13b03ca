use std::collections::{BTreeMap, HashMap, HashSet};

use super::dump::RawPage;
use super::wikitext::normalize_title;

pub const MAX_REDIRECT_CHAIN: usize = 10;

/// Redirect title → canonical article title, with counters for what was dropped.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RedirectTable {
    pub mapping: BTreeMap<String, String>,
    pub dropped_cycles: usize,
    pub dropped_dead: usize,
    pub dropped_long: usize,
}

/// Resolves redirects among mainspace pages. Chains are followed up to
/// [`MAX_REDIRECT_CHAIN`] hops; titles that end in a cycle, a missing page or
/// an over-long chain are left out of the mapping.
pub fn resolve_redirects(pages: &[RawPage]) -> RedirectTable {
    let mut redirects = HashMap::new();
    let mut articles = HashSet::new();
    for page in pages.iter().filter(|p| p.namespace == 0) {
        let title = normalize_title(&page.title);
        match (&page.redirect_target, page.is_redirect) {
            (Some(target), true) => {
                redirects.entry(title).or_insert_with(|| normalize_title(target));
            }
            _ => {
                articles.insert(title);
            }
        }
    }
    resolve_redirect_map(&redirects, &articles)
}

/// Same as [`resolve_redirects`] over pre-normalized titles.
pub fn resolve_redirect_map(
    redirects: &HashMap<String, String>,
    articles: &HashSet<String>,
) -> RedirectTable {
    let mut table = RedirectTable::default();
    for source in redirects.keys() {
        if articles.contains(source) {
            continue;
        }
        let mut current = source;
        let mut seen: HashSet<&String> = HashSet::from([source]);
        let mut resolved = None;
        let mut exhausted = true;
        for _ in 0..MAX_REDIRECT_CHAIN {
            let next = &redirects[current];
            if articles.contains(next) {
                resolved = Some(next.clone());
            } else if !redirects.contains_key(next) {
                table.dropped_dead += 1;
            } else if !seen.insert(next) {
                table.dropped_cycles += 1;
            } else {
                current = next;
                continue;
            }
            exhausted = false;
            break;
        }
        if let Some(target) = resolved {
            table.mapping.insert(source.clone(), target);
        } else if exhausted {
            table.dropped_long += 1;
        }
    }
    table
}
