use super::svd::{truncated_svd, SvdOptions, TruncatedSvd};
use super::tfidf::{build_tfidf, SparseMatrix, Vocabulary};
use super::{cosine, tokenize};
use crate::error::{Error, Result};

pub const DEFAULT_DIMENSION: usize = 512;

/// Latent semantic analysis over a TF-IDF matrix.
///
/// Documents are embedded as rows of `U Σ`. New text is folded in as `q V`
/// where `q` is its TF-IDF row under the training idf, so a training document's
/// own text lands on its stored embedding.
#[derive(Debug, Clone, PartialEq)]
pub struct LsaModel {
    dimension: usize,
    vocab: Vocabulary,
    idf: Vec<f64>,
    /// `n_terms × d`, row-major.
    projection: Vec<f64>,
    singular_values: Vec<f64>,
    doc_embeddings: Vec<Vec<f64>>,
}

pub fn fit_lsa(matrix: &SparseMatrix, vocab: &Vocabulary, d: usize, seed: u64) -> Result<LsaModel> {
    fit_lsa_with(matrix, vocab, d, seed, &SvdOptions::default())
}

pub fn fit_lsa_with(
    matrix: &SparseMatrix,
    vocab: &Vocabulary,
    d: usize,
    seed: u64,
    opts: &SvdOptions,
) -> Result<LsaModel> {
    if d < 1 {
        return Err(Error::invalid("LSA dimension must be at least 1"));
    }
    if matrix.ncols() != vocab.len() {
        return Err(Error::invalid("matrix columns do not match the vocabulary"));
    }
    let TruncatedSvd { u, sigma, v, .. } = truncated_svd(matrix, d, seed, opts)?;
    let mut projection = vec![0.0; v.nrows() * d];
    for t in 0..v.nrows() {
        for j in 0..d {
            projection[t * d + j] = v[(t, j)];
        }
    }
    let doc_embeddings = (0..u.nrows())
        .map(|i| (0..d).map(|j| u[(i, j)] * sigma[j]).collect())
        .collect();
    Ok(LsaModel {
        dimension: d,
        idf: vocab.idf(),
        vocab: vocab.clone(),
        projection,
        singular_values: sigma,
        doc_embeddings,
    })
}

impl LsaModel {
    /// Tokenizes `texts`, builds TF-IDF and fits.
    pub fn fit_texts<S: AsRef<str>>(texts: &[S], d: usize, seed: u64) -> Result<Self> {
        let corpus: Vec<Vec<String>> = texts.iter().map(|t| tokenize(t.as_ref())).collect();
        let (m, vocab) = build_tfidf(&corpus)?;
        fit_lsa(&m, &vocab, d, seed)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn idf(&self) -> &[f64] {
        &self.idf
    }

    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }

    pub fn document_count(&self) -> usize {
        self.doc_embeddings.len()
    }

    pub fn doc_embedding(&self, i: usize) -> &[f64] {
        &self.doc_embeddings[i]
    }

    pub fn doc_embeddings(&self) -> &[Vec<f64>] {
        &self.doc_embeddings
    }

    /// Projection of one TF-IDF row.
    pub fn project(&self, row: &[(usize, f64)]) -> Vec<f64> {
        let d = self.dimension;
        let mut x = vec![0.0; d];
        for &(t, w) in row {
            let v = &self.projection[t * d..(t + 1) * d];
            for (xi, vi) in x.iter_mut().zip(v) {
                *xi += w * vi;
            }
        }
        x
    }

    /// Fold-in embedding of arbitrary text; all-unknown text maps to zero.
    pub fn embed_text(&self, text: &str) -> Vec<f64> {
        let row = self.vocab.tfidf_row(&tokenize(text), &self.idf);
        self.project(&row)
    }

    pub fn similarity(&self, a: &[f64], b: &[f64]) -> f64 {
        cosine(a, b)
    }
}
