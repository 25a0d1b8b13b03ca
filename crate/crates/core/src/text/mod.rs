//! Tokenization, TF-IDF, latent semantic analysis and cosine similarity.

mod cache;
mod lsa;
mod svd;
mod tfidf;

pub use cache::{read_embedding_cache, write_embedding_cache, EmbeddingCache};
pub use lsa::{fit_lsa, fit_lsa_with, LsaModel, DEFAULT_DIMENSION};
pub use svd::{truncated_svd, SvdMethod, SvdOptions, TruncatedSvd};
pub use tfidf::{build_tfidf, SparseMatrix, Vocabulary};

/// Byte ranges of the maximal alphanumeric runs of `text`.
pub fn token_spans(text: &str) -> Vec<(usize, usize)> {
    let mut spans = Vec::new();
    let mut start = None;
    for (i, ch) in text.char_indices() {
        match (ch.is_alphanumeric(), start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                spans.push((s, i));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        spans.push((s, text.len()));
    }
    spans
}

/// Lowercased alphanumeric runs. No stemming, no stop words.
pub fn tokenize(text: &str) -> Vec<String> {
    token_spans(text)
        .into_iter()
        .map(|(s, e)| text[s..e].to_lowercase())
        .collect()
}

/// Cosine similarity; 0 when either vector has zero norm.
pub fn cosine(u: &[f64], v: &[f64]) -> f64 {
    debug_assert_eq!(u.len(), v.len());
    let (mut dot, mut nu, mut nv) = (0.0, 0.0, 0.0);
    for (a, b) in u.iter().zip(v) {
        dot += a * b;
        nu += a * a;
        nv += b * b;
    }
    if nu == 0.0 || nv == 0.0 {
        return 0.0;
    }
    (dot / (nu.sqrt() * nv.sqrt())).clamp(-1.0, 1.0)
}
