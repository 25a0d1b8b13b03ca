use crate::dataset::Article;
use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::text::{build_tfidf, cosine, fit_lsa_with, tokenize, LsaModel, SvdOptions};

/// LSA model fitted on the visible documents, with an embedding for every
/// article: stored rows for visible ones, fold-in for the rest.
#[derive(Debug, Clone)]
pub struct LsaScorer {
    model: LsaModel,
    docs: Vec<Vec<f64>>,
    fitted: Vec<bool>,
}

impl LsaScorer {
    pub fn fit(articles: &[Article], visible: Option<&[bool]>, d: usize, seed: u64, opts: &SvdOptions) -> Result<Self> {
        let fitted: Vec<bool> = match visible {
            Some(v) if v.len() != articles.len() => {
                return Err(Error::invalid("visibility mask length differs from article count"))
            }
            Some(v) => v.to_vec(),
            None => vec![true; articles.len()],
        };
        let rows: Vec<usize> = (0..articles.len()).filter(|&i| fitted[i]).collect();
        let corpus: Vec<Vec<String>> = rows.iter().map(|&i| tokenize(&articles[i].text)).collect();
        let (m, vocab) = build_tfidf(&corpus)?;
        let model = fit_lsa_with(&m, &vocab, d, seed, opts)?;
        let mut docs = vec![Vec::new(); articles.len()];
        for (r, &i) in rows.iter().enumerate() {
            docs[i] = model.doc_embedding(r).to_vec();
        }
        for (i, a) in articles.iter().enumerate() {
            if !fitted[i] {
                docs[i] = model.embed_text(&a.text);
            }
        }
        Ok(LsaScorer { model, docs, fitted })
    }

    pub fn model(&self) -> &LsaModel {
        &self.model
    }

    pub fn doc(&self, id: NodeId) -> &[f64] {
        &self.docs[id]
    }

    pub fn is_fitted(&self, id: NodeId) -> bool {
        self.fitted[id]
    }

    pub fn embed_text(&self, text: &str) -> Vec<f64> {
        self.model.embed_text(text)
    }
}

/// `(1 + cos) / 2` between the two document embeddings.
pub fn score_lsa(lsa: &LsaScorer, source: NodeId, target: NodeId) -> f64 {
    (1.0 + cosine(lsa.doc(source), lsa.doc(target))) / 2.0
}
