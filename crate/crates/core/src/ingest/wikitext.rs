//! Lead-section extraction and wikilink parsing for raw wikitext.

use crate::graph::NodeId;

/// Counters for markup that had to be recovered from.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MarkupWarnings {
    pub unbalanced_templates: usize,
    pub unclosed_comments: usize,
    pub unclosed_refs: usize,
    pub unclosed_links: usize,
}

impl MarkupWarnings {
    pub fn total(&self) -> usize {
        self.unbalanced_templates + self.unclosed_comments + self.unclosed_refs + self.unclosed_links
    }

    pub fn merge(&mut self, other: &MarkupWarnings) {
        self.unbalanced_templates += other.unbalanced_templates;
        self.unclosed_comments += other.unclosed_comments;
        self.unclosed_refs += other.unclosed_refs;
        self.unclosed_links += other.unclosed_links;
    }
}

/// A wikilink found in an abstract. `span` is a byte range into the plain
/// text produced by [`extract_wikilinks`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnchorOccurrence {
    pub source: NodeId,
    pub target_title: String,
    pub anchor_text: String,
    pub span: (usize, usize),
}

/// Plain text of an abstract plus the links it carried.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinkedAbstract {
    pub text: String,
    pub links: Vec<AnchorOccurrence>,
    pub warnings: MarkupWarnings,
}

/// MediaWiki title normalization: underscores become spaces, whitespace is
/// collapsed and the first character is uppercased.
pub fn normalize_title(title: &str) -> String {
    let spaced = title.replace('_', " ");
    let collapsed = collapse_whitespace(&spaced);
    let mut chars = collapsed.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

pub(crate) fn collapse_whitespace(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Target of a `#REDIRECT [[...]]` page, normalized, section suffix removed.
pub fn parse_redirect(wikitext: &str) -> Option<String> {
    let text = wikitext.trim_start();
    let head = text.get(..9)?;
    if !head.eq_ignore_ascii_case("#redirect") {
        return None;
    }
    let rest = text[9..].trim_start().trim_start_matches(':').trim_start();
    let inner = rest.strip_prefix("[[")?;
    let end = inner.find("]]")?;
    let target = inner[..end].split(['|', '#']).next().unwrap_or("");
    let target = normalize_title(target.trim_start_matches(':'));
    (!target.is_empty()).then_some(target)
}

/// Lead section of a page as wikitext with templates, comments, references,
/// file links and bold/italic quotes removed. Wikilinks are kept.
pub fn extract_abstract(wikitext: &str) -> String {
    extract_abstract_with_warnings(wikitext).0
}

pub fn extract_abstract_with_warnings(wikitext: &str) -> (String, MarkupWarnings) {
    let mut warnings = MarkupWarnings::default();
    let text = strip_comments(wikitext, &mut warnings);
    let text = strip_templates(&text, &mut warnings);
    let text = strip_refs(&text, &mut warnings);
    let lead = match text.find("==") {
        Some(i) => &text[..i],
        None => &text[..],
    };
    let lead = strip_file_links(lead);
    let lead = strip_tags(&lead);
    let lead = strip_quote_markup(&lead);
    (collapse_whitespace(&lead), warnings)
}

fn strip_comments(s: &str, warnings: &mut MarkupWarnings) -> String {
    let mut out = String::with_capacity(s.len());
    let mut rest = s;
    while let Some(i) = rest.find("<!--") {
        out.push_str(&rest[..i]);
        match rest[i + 4..].find("-->") {
            Some(j) => rest = &rest[i + 4 + j + 3..],
            None => {
                warnings.unclosed_comments += 1;
                return out;
            }
        }
    }
    out.push_str(rest);
    out
}

fn strip_templates(s: &str, warnings: &mut MarkupWarnings) -> String {
    let b = s.as_bytes();
    let mut out = String::with_capacity(s.len());
    let mut depth = 0usize;
    let mut last = 0usize;
    let mut i = 0usize;
    while i < b.len() {
        if b[i..].starts_with(b"{{") {
            if depth == 0 {
                out.push_str(&s[last..i]);
            }
            depth += 1;
            i += 2;
        } else if depth > 0 && b[i..].starts_with(b"}}") {
            depth -= 1;
            i += 2;
            if depth == 0 {
                last = i;
            }
        } else {
            i += 1;
        }
    }
    if depth > 0 {
        warnings.unbalanced_templates += 1;
    } else {
        out.push_str(&s[last..]);
    }
    out
}

fn strip_refs(s: &str, warnings: &mut MarkupWarnings) -> String {
    // ASCII lowercasing keeps byte offsets aligned with `s`.
    let lower = s.to_ascii_lowercase();
    let mut out = String::with_capacity(s.len());
    let mut pos = 0usize;
    while let Some(rel) = lower[pos..].find("<ref") {
        let start = pos + rel;
        let after = lower.as_bytes().get(start + 4).copied();
        if !matches!(after, Some(b'>' | b'/' | b' ' | b'\t' | b'\n')) {
            out.push_str(&s[pos..start + 4]);
            pos = start + 4;
            continue;
        }
        out.push_str(&s[pos..start]);
        let Some(close_rel) = lower[start..].find('>') else {
            warnings.unclosed_refs += 1;
            return out;
        };
        let open_end = start + close_rel + 1;
        if lower.as_bytes()[open_end - 2] == b'/' {
            pos = open_end;
            continue;
        }
        match lower[open_end..].find("</ref") {
            Some(j) => {
                let close_start = open_end + j;
                pos = match lower[close_start..].find('>') {
                    Some(k) => close_start + k + 1,
                    None => lower.len(),
                };
            }
            None => {
                warnings.unclosed_refs += 1;
                return out;
            }
        }
    }
    out.push_str(&s[pos..]);
    out
}

fn is_file_link(inner: &str) -> bool {
    let t = inner.trim_start().trim_start_matches(':').trim_start();
    let lower: String = t.chars().take(6).collect::<String>().to_ascii_lowercase();
    lower.starts_with("file:") || lower.starts_with("image:") || lower.starts_with("media:")
}

/// Removes `[[File:...]]` style links including nested links in captions.
fn strip_file_links(s: &str) -> String {
    let b = s.as_bytes();
    let mut out = String::with_capacity(s.len());
    let mut last = 0usize;
    let mut i = 0usize;
    while i + 1 < b.len() {
        if b[i..].starts_with(b"[[") && is_file_link(&s[i + 2..]) {
            let mut depth = 0usize;
            let mut j = i;
            let mut end = None;
            while j + 1 < b.len() {
                if b[j..].starts_with(b"[[") {
                    depth += 1;
                    j += 2;
                } else if b[j..].starts_with(b"]]") {
                    depth -= 1;
                    j += 2;
                    if depth == 0 {
                        end = Some(j);
                        break;
                    }
                } else {
                    j += 1;
                }
            }
            match end {
                Some(e) => {
                    out.push_str(&s[last..i]);
                    last = e;
                    i = e;
                }
                // left for link extraction to flag
                None => i += 2,
            }
        } else {
            i += 1;
        }
    }
    out.push_str(&s[last..]);
    out
}

/// Drops leftover HTML-like tags (`<br/>`, `<small>`, ...) keeping their content.
fn strip_tags(s: &str) -> String {
    let b = s.as_bytes();
    let mut out = String::with_capacity(s.len());
    let mut last = 0usize;
    let mut i = 0usize;
    while i < b.len() {
        if b[i] == b'<' && b.get(i + 1).is_some_and(|c| c.is_ascii_alphabetic() || *c == b'/') {
            if let Some(j) = s[i..].find(['>', '\n']) {
                if b[i + j] == b'>' {
                    out.push_str(&s[last..i]);
                    out.push(' ');
                    i += j + 1;
                    last = i;
                    continue;
                }
            }
        }
        i += 1;
    }
    out.push_str(&s[last..]);
    out
}

fn strip_quote_markup(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut run = 0usize;
    for ch in s.chars() {
        if ch == '\'' {
            run += 1;
            continue;
        }
        if run == 1 {
            out.push('\'');
        }
        run = 0;
        out.push(ch);
    }
    if run == 1 {
        out.push('\'');
    }
    out
}

const NAMESPACES: &[&str] = &[
    "category", "file", "image", "media", "template", "wikipedia", "wp", "help", "portal", "draft",
    "module", "user", "talk", "special", "mediawiki", "book", "timedtext", "user talk",
    "wikipedia talk", "template talk", "category talk", "file talk", "help talk", "portal talk",
];

const INTERWIKI: &[&str] = &[
    "wikt", "wiktionary", "w", "s", "q", "n", "b", "v", "c", "d", "m", "mw", "commons", "meta",
    "species", "wikidata", "wikisource", "wikiquote", "wikibooks", "wikinews", "wikivoyage",
    "wikiversity", "voy",
];

enum LinkKind {
    Article,
    /// Non-article link whose text still renders (e.g. `[[:Category:X|text]]`, `[[wikt:foo|foo]]`).
    Rendered,
    /// Category or language links that render nothing.
    Hidden,
}

fn classify_target(raw_target: &str) -> LinkKind {
    let leading_colon = raw_target.trim_start().starts_with(':');
    let t = raw_target.trim().trim_start_matches(':');
    let Some((prefix, _)) = t.split_once(':') else {
        return LinkKind::Article;
    };
    let p = prefix.trim();
    let lower = p.to_lowercase().replace('_', " ");
    let is_lang = (2..=3).contains(&p.len()) && p.bytes().all(|c| c.is_ascii_lowercase())
        || (p.contains('-') && p.bytes().all(|c| c.is_ascii_lowercase() || c == b'-'));
    if NAMESPACES.contains(&lower.as_str()) {
        if !leading_colon && matches!(lower.as_str(), "category" | "file" | "image" | "media") {
            LinkKind::Hidden
        } else {
            LinkKind::Rendered
        }
    } else if INTERWIKI.contains(&lower.as_str()) {
        LinkKind::Rendered
    } else if is_lang {
        if leading_colon {
            LinkKind::Rendered
        } else {
            LinkKind::Hidden
        }
    } else {
        LinkKind::Article
    }
}

fn pipe_trick(target: &str) -> String {
    let t = target.trim().trim_start_matches(':');
    let t = t.split_once(':').map(|(_, r)| r).unwrap_or(t);
    let t = match (t.rfind('('), t.ends_with(')')) {
        (Some(i), true) => &t[..i],
        _ => t,
    };
    collapse_whitespace(t)
}

struct Appender {
    out: String,
}

impl Appender {
    fn push_text(&mut self, s: &str) {
        for ch in s.chars() {
            if ch.is_whitespace() {
                if !self.out.is_empty() && !self.out.ends_with(' ') {
                    self.out.push(' ');
                }
            } else {
                self.out.push(ch);
            }
        }
    }

    fn push_anchor(&mut self, anchor: &str) -> (usize, usize) {
        let start = self.out.len();
        self.out.push_str(anchor);
        (start, self.out.len())
    }

    fn finish(mut self) -> String {
        if self.out.ends_with(' ') {
            self.out.pop();
        }
        self.out
    }
}

/// Replaces every wikilink in `abstract_wikitext` by its visible text and
/// records one [`AnchorOccurrence`] per article link.
///
/// For each occurrence `text[span] == anchor_text`.
pub fn extract_wikilinks(abstract_wikitext: &str, source: NodeId) -> LinkedAbstract {
    let s = abstract_wikitext;
    let mut app = Appender {
        out: String::with_capacity(s.len()),
    };
    let mut links = Vec::new();
    let mut warnings = MarkupWarnings::default();
    let mut pos = 0usize;
    while let Some(rel) = s[pos..].find("[[") {
        let open = pos + rel;
        let inner_start = open + 2;
        let close = s[inner_start..].find("]]").map(|j| inner_start + j);
        let nested = s[inner_start..].find("[[").map(|j| inner_start + j);
        let close = match (close, nested) {
            (Some(c), Some(n)) if n < c => None,
            (c, _) => c,
        };
        let Some(close) = close else {
            warnings.unclosed_links += 1;
            app.push_text(&s[pos..inner_start]);
            pos = inner_start;
            continue;
        };
        app.push_text(&s[pos..open]);
        pos = close + 2;

        let inner = &s[inner_start..close];
        let (raw_target, piped) = match inner.split_once('|') {
            Some((t, a)) => (t, Some(a)),
            None => (inner, None),
        };
        let anchor = match piped {
            Some(a) if a.trim().is_empty() => pipe_trick(raw_target),
            Some(a) => collapse_whitespace(a),
            None => collapse_whitespace(raw_target.trim_start_matches(':')),
        };
        let kind = classify_target(raw_target);
        if matches!(kind, LinkKind::Hidden) || anchor.is_empty() {
            continue;
        }
        let target_title = normalize_title(raw_target.split('#').next().unwrap_or(""));
        let span = app.push_anchor(&anchor);
        if matches!(kind, LinkKind::Article) && !target_title.is_empty() {
            links.push(AnchorOccurrence {
                source,
                target_title,
                anchor_text: anchor,
                span,
            });
        }
    }
    app.push_text(&s[pos..]);
    LinkedAbstract {
        text: app.finish(),
        links,
        warnings,
    }
}
