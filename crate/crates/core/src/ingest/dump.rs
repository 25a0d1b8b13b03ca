//! Streaming reader for MediaWiki `pages-articles` XML exports.

use std::io::BufRead;

use log::warn;
use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use super::wikitext::{normalize_title, parse_redirect};
use crate::error::{Error, Result};

/// One `<page>` element of a dump.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawPage {
    pub title: String,
    pub namespace: i64,
    pub wikitext: String,
    pub is_redirect: bool,
    pub redirect_target: Option<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DumpStats {
    pub pages: usize,
    pub skipped_pages: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Title,
    Namespace,
    Text,
}

#[derive(Default)]
struct PageBuilder {
    title: Option<String>,
    namespace: Option<String>,
    text: Option<String>,
    redirect_attr: Option<String>,
}

impl PageBuilder {
    fn finish(self) -> Option<RawPage> {
        let title = self.title.map(|t| t.trim().to_string()).filter(|t| !t.is_empty())?;
        let wikitext = self.text?;
        let namespace = match self.namespace {
            Some(ns) => ns.trim().parse().ok()?,
            None => namespace_from_title(&title),
        };
        let redirect_target = self
            .redirect_attr
            .map(|t| normalize_title(&t))
            .or_else(|| parse_redirect(&wikitext))
            .filter(|t| !t.is_empty());
        Some(RawPage {
            title,
            namespace,
            wikitext,
            is_redirect: redirect_target.is_some(),
            redirect_target,
        })
    }
}

/// Old exports omit `<ns>`; fall back to the title prefix for the few namespaces
/// we need to distinguish from mainspace.
fn namespace_from_title(title: &str) -> i64 {
    match title.split_once(':').map(|(p, _)| p.trim().to_ascii_lowercase()) {
        Some(p) if p == "category" => 14,
        Some(p) if p == "file" || p == "image" => 6,
        Some(p) if p == "template" => 10,
        Some(p) if p == "wikipedia" => 4,
        Some(p) if p == "help" => 12,
        Some(p) if p == "portal" => 100,
        _ => 0,
    }
}

/// Lazily yields one [`RawPage`] per `<page>` element, in document order.
///
/// Memory use is bounded by the largest single page. A malformed document
/// yields one `Err` carrying the byte offset and then ends the iteration;
/// pages missing `<title>` or `<text>` are skipped and counted.
pub struct DumpReader<R: BufRead> {
    reader: Reader<R>,
    buf: Vec<u8>,
    stats: DumpStats,
    finished: bool,
}

impl<R: BufRead> DumpReader<R> {
    pub fn new(input: R) -> Self {
        let mut reader = Reader::from_reader(input);
        reader.config_mut().trim_text(false);
        reader.config_mut().check_end_names = true;
        DumpReader {
            reader,
            buf: Vec::with_capacity(1 << 16),
            stats: DumpStats::default(),
            finished: false,
        }
    }

    pub fn stats(&self) -> DumpStats {
        self.stats
    }

    fn xml_error(&self, message: impl ToString) -> Error {
        Error::Xml {
            offset: self.reader.error_position().max(self.reader.buffer_position()),
            message: message.to_string(),
        }
    }

    fn redirect_title(&self, e: &BytesStart<'_>) -> Result<Option<String>> {
        match e.try_get_attribute("title") {
            Ok(Some(attr)) => attr
                .unescape_value()
                .map(|v| Some(v.into_owned()))
                .map_err(|err| self.xml_error(err)),
            Ok(None) => Ok(None),
            Err(err) => Err(self.xml_error(err)),
        }
    }

    fn next_page(&mut self) -> Result<Option<RawPage>> {
        let mut page: Option<PageBuilder> = None;
        let mut field: Option<Field> = None;
        let mut in_revision = false;
        let mut depth = 0usize;
        loop {
            self.buf.clear();
            let event = match self.reader.read_event_into(&mut self.buf) {
                Ok(ev) => ev.into_owned(),
                Err(err) => return Err(self.xml_error(err)),
            };
            match event {
                Event::Start(e) => {
                    depth += 1;
                    match e.local_name().as_ref() {
                        b"page" => page = Some(PageBuilder::default()),
                        b"revision" if page.is_some() => in_revision = true,
                        b"title" if page.is_some() && !in_revision => field = Some(Field::Title),
                        b"ns" if page.is_some() && !in_revision => field = Some(Field::Namespace),
                        b"text" if in_revision => {
                            field = Some(Field::Text);
                            if let Some(p) = page.as_mut() {
                                p.text = Some(String::new());
                            }
                        }
                        b"redirect" if page.is_some() => {
                            let t = self.redirect_title(&e)?;
                            page.as_mut().unwrap().redirect_attr = t;
                        }
                        _ => {}
                    }
                }
                Event::Empty(e) => match e.local_name().as_ref() {
                    b"redirect" if page.is_some() => {
                        let t = self.redirect_title(&e)?;
                        page.as_mut().unwrap().redirect_attr = t;
                    }
                    b"text" if in_revision => {
                        if let Some(p) = page.as_mut() {
                            p.text = Some(String::new());
                        }
                    }
                    _ => {}
                },
                Event::Text(t) => {
                    if let (Some(f), Some(p)) = (field, page.as_mut()) {
                        let s = t.unescape().map_err(|err| Error::Xml {
                            offset: self.reader.buffer_position(),
                            message: err.to_string(),
                        })?;
                        append_field(p, f, &s);
                    }
                }
                Event::CData(t) => {
                    if let (Some(f), Some(p)) = (field, page.as_mut()) {
                        append_field(p, f, &String::from_utf8_lossy(&t));
                    }
                }
                Event::End(e) => {
                    depth = depth.saturating_sub(1);
                    match e.local_name().as_ref() {
                        b"page" => {
                            if let Some(builder) = page.take() {
                                self.stats.pages += 1;
                                match builder.finish() {
                                    Some(raw) => return Ok(Some(raw)),
                                    None => {
                                        self.stats.skipped_pages += 1;
                                        warn!("skipping page without title or text near byte {}", self.reader.buffer_position());
                                    }
                                }
                            }
                            in_revision = false;
                        }
                        b"revision" => in_revision = false,
                        b"title" | b"ns" | b"text" => field = None,
                        _ => {}
                    }
                }
                Event::Eof => {
                    if depth > 0 || page.is_some() {
                        return Err(self.xml_error("unexpected end of input inside an open element"));
                    }
                    return Ok(None);
                }
                _ => {}
            }
        }
    }
}

fn append_field(page: &mut PageBuilder, field: Field, s: &str) {
    let slot = match field {
        Field::Title => &mut page.title,
        Field::Namespace => &mut page.namespace,
        Field::Text => &mut page.text,
    };
    slot.get_or_insert_with(String::new).push_str(s);
}

impl<R: BufRead> Iterator for DumpReader<R> {
    type Item = Result<RawPage>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.finished {
            return None;
        }
        match self.next_page() {
            Ok(Some(p)) => Some(Ok(p)),
            Ok(None) => {
                self.finished = true;
                None
            }
            Err(e) => {
                self.finished = true;
                Some(Err(e))
            }
        }
    }
}

/// Convenience constructor matching the streaming contract.
pub fn parse_dump<R: BufRead>(input: R) -> DumpReader<R> {
    DumpReader::new(input)
}
