//! Dataset files: `articles.jsonl`, `links.tsv` and `remap.tsv`.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DocumentNetwork, NodeId, Subgraph};
use crate::ingest::normalize_title;

pub const ARTICLES_FILE: &str = "articles.jsonl";
pub const LINKS_FILE: &str = "links.tsv";
pub const REMAP_FILE: &str = "remap.tsv";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Article {
    pub id: NodeId,
    pub title: String,
    #[serde(rename = "abstract")]
    pub text: String,
    /// Redirect titles resolving to this article.
    pub aliases: Vec<String>,
}

impl Article {
    pub fn new(id: NodeId, title: impl Into<String>, text: impl Into<String>) -> Self {
        Article {
            id,
            title: title.into(),
            text: text.into(),
            aliases: Vec::new(),
        }
    }
}

/// Articles plus the hyperlink network between them; `articles[i].id == i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    pub articles: Vec<Article>,
    pub network: DocumentNetwork,
}

impl Dataset {
    pub fn new(articles: Vec<Article>, network: DocumentNetwork) -> Result<Self> {
        if articles.len() != network.node_count() {
            return Err(Error::invalid(format!(
                "{} articles but the network has {} nodes",
                articles.len(),
                network.node_count()
            )));
        }
        if let Some(a) = articles.iter().enumerate().find(|(i, a)| a.id != *i) {
            return Err(Error::invalid(format!("article ids must be contiguous from 0; found {} at {}", a.1.id, a.0)));
        }
        Ok(Dataset { articles, network })
    }

    pub fn titles(&self) -> Vec<String> {
        self.articles.iter().map(|a| a.title.clone()).collect()
    }

    /// Looks a title up among canonical titles, then aliases.
    pub fn resolve_title(&self, title: &str) -> Option<NodeId> {
        let wanted = normalize_title(title);
        self.articles
            .iter()
            .find(|a| a.title == wanted)
            .or_else(|| self.articles.iter().find(|a| a.aliases.contains(&wanted)))
            .map(|a| a.id)
    }

    /// Titles closest to `title` by edit distance, for error messages.
    pub fn near_misses(&self, title: &str, limit: usize) -> Vec<String> {
        let wanted = title.to_lowercase();
        let mut scored: Vec<(usize, &str)> = self
            .articles
            .iter()
            .flat_map(|a| std::iter::once(&a.title).chain(&a.aliases))
            .map(|t| (strsim::levenshtein(&wanted, &t.to_lowercase()), t.as_str()))
            .collect();
        scored.sort();
        scored.dedup();
        scored.into_iter().take(limit).map(|(_, t)| t.to_string()).collect()
    }

    pub fn subgraph(&self, sub: &Subgraph) -> Dataset {
        let articles = sub
            .kept
            .iter()
            .enumerate()
            .map(|(new, &old)| Article {
                id: new,
                ..self.articles[old].clone()
            })
            .collect();
        Dataset {
            articles,
            network: sub.network.clone(),
        }
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let mut w = BufWriter::new(File::create(dir.join(ARTICLES_FILE))?);
        for a in &self.articles {
            serde_json::to_writer(&mut w, a)?;
            w.write_all(b"\n")?;
        }
        w.flush()?;
        write_links(&self.network, &dir.join(LINKS_FILE))
    }

    pub fn read(dir: &Path) -> Result<Self> {
        let articles_path = dir.join(ARTICLES_FILE);
        let mut articles = Vec::new();
        for (i, line) in BufReader::new(File::open(&articles_path)?).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let a: Article =
                serde_json::from_str(&line).map_err(|e| Error::format(&articles_path, i + 1, e.to_string()))?;
            articles.push(a);
        }
        let network = read_links(&dir.join(LINKS_FILE), articles.len())?;
        Dataset::new(articles, network)
    }
}

pub fn escape_field(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out
}

pub fn unescape_field(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(ch) = chars.next() {
        if ch != '\\' {
            out.push(ch);
            continue;
        }
        match chars.next() {
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('\\') => out.push('\\'),
            Some(other) => {
                out.push('\\');
                out.push(other);
            }
            None => out.push('\\'),
        }
    }
    out
}

/// One line per (edge, anchor): `source <TAB> target <TAB> anchor`.
pub fn write_links(network: &DocumentNetwork, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_links_to(network, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn write_links_to(network: &DocumentNetwork, w: &mut impl Write) -> Result<()> {
    for (s, e) in network.edges() {
        for a in &e.anchors {
            writeln!(w, "{s}\t{}\t{}", e.target, escape_field(a))?;
        }
    }
    Ok(())
}

pub fn read_links(path: &Path, node_count: usize) -> Result<DocumentNetwork> {
    let mut net = DocumentNetwork::new(node_count);
    for (i, line) in BufReader::new(File::open(path)?).lines().enumerate() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let [s, t, anchor] = fields[..] else {
            return Err(Error::format(path, i + 1, format!("expected 3 fields, found {}", fields.len())));
        };
        let parse = |f: &str| f.parse::<NodeId>().map_err(|e| Error::format(path, i + 1, e.to_string()));
        let (s, t) = (parse(s)?, parse(t)?);
        net.add_link(s, t, unescape_field(anchor))
            .map_err(|e| Error::format(path, i + 1, e.to_string()))?;
    }
    Ok(net)
}

pub fn write_remap(sub: &Subgraph, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for (old, new) in sub.remap() {
        writeln!(w, "{old}\t{new}")?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_remap(path: &Path) -> Result<HashMap<NodeId, NodeId>> {
    let mut map = HashMap::new();
    for (i, line) in BufReader::new(File::open(path)?).lines().enumerate() {
        let line = line?;
        let (a, b) = line
            .split_once('\t')
            .ok_or_else(|| Error::format(path, i + 1, "expected old_id<TAB>new_id"))?;
        let parse = |f: &str| f.parse::<NodeId>().map_err(|e| Error::format(path, i + 1, e.to_string()));
        map.insert(parse(a)?, parse(b)?);
    }
    Ok(map)
}
