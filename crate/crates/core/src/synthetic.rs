//! Planted-topic corpora rendered as MediaWiki XML dumps.
//!
//! Every document has a primary and a secondary topic and its abstract mixes
//! words from both with shared filler. Documents are named by a short word
//! reused across several topics plus a qualifier word from their own topic,
//! so "zorvak" is ambiguous while "zorvak river" is not. Abstracts link to
//! documents of their own two topics, either through the qualified name or,
//! for primary-topic targets, the bare name. Bare names also match the
//! homonyms in other topics, which become candidates without a link.

use std::collections::HashSet;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::ingest::{build_dataset, parse_dump, IngestReport};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SyntheticParams {
    pub documents: usize,
    pub topics: usize,
    /// Documents sharing each bare name, all in different topics.
    pub ambiguity: usize,
    pub topic_words: usize,
    pub shared_words: usize,
    pub words_per_doc: usize,
    pub primary_share: f64,
    pub secondary_share: f64,
    pub primary_mentions: usize,
    pub secondary_mentions: usize,
    /// Probability that a primary-topic link uses the bare name.
    pub bare_share: f64,
    pub seed: u64,
}

impl Default for SyntheticParams {
    fn default() -> Self {
        SyntheticParams {
            documents: 200,
            topics: 10,
            ambiguity: 3,
            topic_words: 30,
            shared_words: 150,
            words_per_doc: 40,
            primary_share: 0.45,
            secondary_share: 0.3,
            primary_mentions: 3,
            secondary_mentions: 2,
            bare_share: 0.5,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntheticPage {
    pub title: String,
    pub topic: usize,
    pub secondary_topic: usize,
    pub wikitext: String,
}

const ONSETS: [&str; 16] = ["b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z", "br", "st"];
const VOWELS: [&str; 6] = ["a", "e", "i", "o", "u", "ai"];

struct Words {
    seen: HashSet<String>,
}

impl Words {
    fn fresh(&mut self, rng: &mut impl Rng, syllables: usize) -> String {
        loop {
            let mut w = String::new();
            for _ in 0..syllables {
                w.push_str(ONSETS.choose(rng).unwrap());
                w.push_str(VOWELS.choose(rng).unwrap());
            }
            if self.seen.insert(w.clone()) {
                return w;
            }
        }
    }
}

fn capitalize(w: &str) -> String {
    let mut c = w.chars();
    c.next()
        .map(|f| f.to_uppercase().chain(c).collect())
        .unwrap_or_default()
}

pub fn generate_pages(p: &SyntheticParams) -> Result<Vec<SyntheticPage>> {
    if p.topics < 2 || p.ambiguity == 0 || p.ambiguity > p.topics || p.topic_words == 0 {
        return Err(Error::invalid(
            "synthetic corpus needs at least 2 topics, 1 <= ambiguity <= topics and topic words",
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut words = Words { seen: HashSet::new() };
    let topics = p.topics;
    let topic_vocab: Vec<Vec<String>> = (0..topics)
        .map(|_| (0..p.topic_words).map(|_| words.fresh(&mut rng, 2)).collect())
        .collect();
    let shared: Vec<String> = (0..p.shared_words).map(|_| words.fresh(&mut rng, 2)).collect();
    let groups = p.documents.div_ceil(p.ambiguity);
    let bare: Vec<String> = (0..groups).map(|_| words.fresh(&mut rng, 3)).collect();
    let step = (topics / p.ambiguity).max(1);

    let mut primary = Vec::with_capacity(p.documents);
    let mut secondary = Vec::with_capacity(p.documents);
    let mut qualifier = Vec::with_capacity(p.documents);
    for d in 0..p.documents {
        let (g, k) = (d / p.ambiguity, d % p.ambiguity);
        let t = (g + k * step) % topics;
        primary.push(t);
        secondary.push((t + 1 + rng.gen_range(0..topics - 1)) % topics);
        qualifier.push(topic_vocab[t].choose(&mut rng).unwrap().clone());
    }
    let name = |d: usize| bare[d / p.ambiguity].clone();
    let qualified = |d: usize| format!("{} {}", name(d), qualifier[d]);
    let title = |d: usize| format!("{} {}", capitalize(&name(d)), capitalize(&qualifier[d]));

    let mut pages = Vec::with_capacity(p.documents);
    for d in 0..p.documents {
        let (t, t2) = (primary[d], secondary[d]);
        let mut body: Vec<String> = (0..p.words_per_doc)
            .map(|_| {
                let x: f64 = rng.gen();
                let vocab = if x < p.primary_share {
                    &topic_vocab[t]
                } else if x < p.primary_share + p.secondary_share {
                    &topic_vocab[t2]
                } else {
                    &shared
                };
                vocab.choose(&mut rng).cloned().unwrap_or_default()
            })
            .collect();
        let in_topic = |topic: usize| -> Vec<usize> {
            (0..p.documents)
                .filter(|&o| o != d && primary[o] == topic && name(o) != name(d))
                .collect()
        };
        let mut mentions: Vec<String> = Vec::new();
        let mut used: HashSet<String> = HashSet::new();
        for (topic, count, bare_ok) in [(t, p.primary_mentions, true), (t2, p.secondary_mentions, false)] {
            for &o in in_topic(topic).choose_multiple(&mut rng, count) {
                if !used.insert(name(o)) {
                    continue;
                }
                mentions.push(if bare_ok && rng.gen_bool(p.bare_share) {
                    format!("[[{}|{}]]", title(o), name(o))
                } else {
                    format!("[[{}|{}]]", title(o), qualified(o))
                });
            }
        }
        for m in mentions {
            let at = rng.gen_range(0..=body.len());
            body.insert(at, m);
        }
        let mut text = String::new();
        let _ = writeln!(text, "{{{{Infobox topic | name = {} | group = {t} }}}}", title(d));
        let _ = write!(text, "'''{}''' is {}.", title(d), body.join(" "));
        let _ = writeln!(text, "<ref>{{{{cite web|title={}}}}}</ref>", qualifier[d]);
        let _ = writeln!(text, "\n== History ==\nLater [[{}]] work.", title((d + 1) % p.documents));
        pages.push(SyntheticPage {
            title: title(d),
            topic: t,
            secondary_topic: t2,
            wikitext: text,
        });
    }
    Ok(pages)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Minimal MediaWiki export document holding the given mainspace pages.
pub fn render_dump(pages: &[(String, String)]) -> String {
    let mut out = String::from("<mediawiki xmlns=\"http://www.mediawiki.org/xml/export-0.10/\" xml:lang=\"en\">\n");
    for (i, (title, text)) in pages.iter().enumerate() {
        let _ = write!(
            out,
            "  <page>\n    <title>{}</title>\n    <ns>0</ns>\n    <id>{}</id>\n    <revision>\n      <text xml:space=\"preserve\">{}</text>\n    </revision>\n  </page>\n",
            xml_escape(title),
            i + 1,
            xml_escape(text)
        );
    }
    out.push_str("</mediawiki>\n");
    out
}

pub fn synthetic_dump(p: &SyntheticParams) -> Result<String> {
    let pages: Vec<(String, String)> = generate_pages(p)?.into_iter().map(|pg| (pg.title, pg.wikitext)).collect();
    Ok(render_dump(&pages))
}

/// Generates a corpus and ingests it; primary topics follow article ids.
pub fn synthetic_dataset(p: &SyntheticParams) -> Result<(Dataset, Vec<usize>, IngestReport)> {
    let dump = synthetic_dump(p)?;
    let (dataset, report) = build_dataset(parse_dump(dump.as_bytes()))?;
    let topics = generate_pages(p)?.iter().map(|pg| pg.topic).collect();
    Ok((dataset, topics, report))
}
