use std::collections::HashMap;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Row-compressed sparse matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    /// Builds a matrix from per-row `(column, value)` lists; zeros are dropped
    /// and each row is sorted by column.
    pub fn from_rows(cols: usize, rows: Vec<Vec<(usize, f64)>>) -> Self {
        let mut indptr = Vec::with_capacity(rows.len() + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        indptr.push(0);
        for mut row in rows.iter().cloned() {
            row.sort_by_key(|&(c, _)| c);
            for (c, v) in row {
                assert!(c < cols, "column {c} out of range");
                if v != 0.0 {
                    indices.push(c);
                    values.push(v);
                }
            }
            indptr.push(indices.len());
        }
        SparseMatrix {
            rows: rows.len(),
            cols,
            indptr,
            indices,
            values,
        }
    }

    pub fn from_dense(m: &DMatrix<f64>) -> Self {
        let rows = (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| (j, m[(i, j)])).collect())
            .collect();
        SparseMatrix::from_rows(m.ncols(), rows)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let (a, b) = (self.indptr[i], self.indptr[i + 1]);
        (&self.indices[a..b], &self.values[a..b])
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            let (idx, val) = self.row(i);
            for (&j, &v) in idx.iter().zip(val) {
                m[(i, j)] = v;
            }
        }
        m
    }

    /// `self * x` for a dense `cols × k` matrix.
    pub fn mul_dense(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        assert_eq!(x.nrows(), self.cols);
        let k = x.ncols();
        let mut out = DMatrix::zeros(self.rows, k);
        for c in 0..k {
            let xc = x.column(c);
            let mut oc = out.column_mut(c);
            for i in 0..self.rows {
                let (idx, val) = self.row(i);
                oc[i] = idx.iter().zip(val).map(|(&j, &v)| v * xc[j]).sum();
            }
        }
        out
    }

    /// `selfᵀ * y` for a dense `rows × k` matrix.
    pub fn tr_mul_dense(&self, y: &DMatrix<f64>) -> DMatrix<f64> {
        assert_eq!(y.nrows(), self.rows);
        let k = y.ncols();
        let mut out = DMatrix::zeros(self.cols, k);
        for c in 0..k {
            let yc = y.column(c);
            let mut oc = out.column_mut(c);
            for i in 0..self.rows {
                let w = yc[i];
                if w == 0.0 {
                    continue;
                }
                let (idx, val) = self.row(i);
                for (&j, &v) in idx.iter().zip(val) {
                    oc[j] += v * w;
                }
            }
        }
        out
    }
}

/// Token index with document frequencies; indices follow first appearance.
#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary {
    terms: Vec<String>,
    index: HashMap<String, usize>,
    doc_freq: Vec<usize>,
    corpus_size: usize,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn corpus_size(&self) -> usize {
        self.corpus_size
    }

    pub fn get(&self, token: &str) -> Option<usize> {
        self.index.get(token).copied()
    }

    pub fn term(&self, i: usize) -> &str {
        &self.terms[i]
    }

    pub fn document_frequency(&self, i: usize) -> usize {
        self.doc_freq[i]
    }

    /// `ln(N / df)` per token.
    pub fn idf(&self) -> Vec<f64> {
        let n = self.corpus_size as f64;
        self.doc_freq.iter().map(|&df| (n / df as f64).ln()).collect()
    }

    /// Raw-count TF-IDF of `tokens` under this vocabulary; unknown tokens and
    /// zero weights are dropped.
    pub fn tfidf_row(&self, tokens: &[String], idf: &[f64]) -> Vec<(usize, f64)> {
        let mut counts: HashMap<usize, f64> = HashMap::new();
        for t in tokens {
            if let Some(i) = self.get(t) {
                *counts.entry(i).or_default() += 1.0;
            }
        }
        let mut row: Vec<(usize, f64)> = counts
            .into_iter()
            .map(|(i, tf)| (i, tf * idf[i]))
            .filter(|&(_, v)| v != 0.0)
            .collect();
        row.sort_by_key(|&(i, _)| i);
        row
    }
}

/// Document-term TF-IDF matrix with `tf` = raw count and `idf = ln(N / df)`.
/// Tokens present in every document get weight 0 and no stored entries.
pub fn build_tfidf(corpus: &[Vec<String>]) -> Result<(SparseMatrix, Vocabulary)> {
    if corpus.is_empty() || corpus.iter().all(|d| d.is_empty()) {
        return Err(Error::EmptyInput("TF-IDF needs at least one non-empty document".into()));
    }
    let mut vocab = Vocabulary {
        terms: Vec::new(),
        index: HashMap::new(),
        doc_freq: Vec::new(),
        corpus_size: corpus.len(),
    };
    let mut seen_in_doc: Vec<usize> = Vec::new();
    for (d, doc) in corpus.iter().enumerate() {
        for tok in doc {
            let i = match vocab.index.get(tok) {
                Some(&i) => i,
                None => {
                    let i = vocab.terms.len();
                    vocab.terms.push(tok.clone());
                    vocab.index.insert(tok.clone(), i);
                    vocab.doc_freq.push(0);
                    seen_in_doc.push(usize::MAX);
                    i
                }
            };
            if seen_in_doc[i] != d {
                seen_in_doc[i] = d;
                vocab.doc_freq[i] += 1;
            }
        }
    }
    let idf = vocab.idf();
    let rows = corpus.iter().map(|doc| vocab.tfidf_row(doc, &idf)).collect();
    Ok((SparseMatrix::from_rows(vocab.len(), rows), vocab))
}
