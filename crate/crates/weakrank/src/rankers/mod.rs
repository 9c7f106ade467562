//! Unsupervised retrieval scorers used as weak supervision sources:
//! Okapi BM25, TF-IDF, query likelihood with Dirichlet smoothing, and QL+RM3
//! pseudo-relevance feedback. All scorers are pure functions of
//! (index, query, document, config).

mod noise;
mod rm3;
mod run_io;

pub use noise::ScoreNoise;
pub use rm3::{expand_query, rm3_rerank};
pub use run_io::{read_trec_run, write_trec_run};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{InvertedIndex, Query};

#[derive(Debug, Error)]
pub enum RankerError {
    #[error("empty query: {0}")]
    EmptyQuery(String),
    #[error("invalid ranker config: {0}")]
    InvalidConfig(String),
    #[error("unknown document: {0}")]
    UnknownDoc(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bm25Params {
    pub k1: f64,
    pub b: f64,
}

impl Default for Bm25Params {
    fn default() -> Self {
        Self { k1: 1.2, b: 0.75 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QlParams {
    /// Dirichlet smoothing pseudo-count.
    pub mu: f64,
}

impl Default for QlParams {
    fn default() -> Self {
        Self { mu: 2500.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rm3Params {
    pub fb_docs: usize,
    pub fb_terms: usize,
    /// Interpolation weight of the original query distribution.
    pub orig_weight: f64,
}

impl Default for Rm3Params {
    fn default() -> Self {
        Self { fb_docs: 10, fb_terms: 10, orig_weight: 0.5 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct RankerConfig {
    pub bm25: Bm25Params,
    pub ql: QlParams,
    pub rm3: Rm3Params,
}

impl RankerConfig {
    pub fn validate(&self) -> Result<(), RankerError> {
        if self.bm25.k1 <= 0.0 {
            return Err(RankerError::InvalidConfig(format!("k1 must be > 0, got {}", self.bm25.k1)));
        }
        if !(0.0..=1.0).contains(&self.bm25.b) {
            return Err(RankerError::InvalidConfig(format!("b must be in [0,1], got {}", self.bm25.b)));
        }
        if self.ql.mu <= 0.0 {
            return Err(RankerError::InvalidConfig(format!("mu must be > 0, got {}", self.ql.mu)));
        }
        if !(0.0..=1.0).contains(&self.rm3.orig_weight) {
            return Err(RankerError::InvalidConfig(format!(
                "orig_weight must be in [0,1], got {}",
                self.rm3.orig_weight
            )));
        }
        if self.rm3.fb_docs == 0 || self.rm3.fb_terms == 0 {
            return Err(RankerError::InvalidConfig("fb_docs and fb_terms must be >= 1".into()));
        }
        Ok(())
    }
}

/// A scored ranking for one query, descending by score with ties broken by
/// ascending doc id.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedList {
    pub query_id: String,
    pub entries: Vec<(String, f64)>,
    pub method: String,
}

impl RankedList {
    pub fn new(query_id: impl Into<String>, mut entries: Vec<(String, f64)>, method: impl Into<String>) -> Self {
        sort_entries(&mut entries);
        Self { query_id: query_id.into(), entries, method: method.into() }
    }

    pub fn truncated(&self, depth: usize) -> Self {
        Self {
            query_id: self.query_id.clone(),
            entries: self.entries.iter().take(depth).cloned().collect(),
            method: self.method.clone(),
        }
    }

    /// Rank position (0-based) of a document, if present.
    pub fn position(&self, doc_id: &str) -> Option<usize> {
        self.entries.iter().position(|(d, _)| d == doc_id)
    }

    pub fn doc_ids(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(d, _)| d.as_str())
    }
}

/// Descending score, ties by ascending doc id.
pub(crate) fn sort_entries(entries: &mut [(String, f64)]) {
    entries.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
}

fn require_query_tokens(q: &Query) -> Result<(), RankerError> {
    if q.tokens.is_empty() {
        Err(RankerError::EmptyQuery(q.query_id.clone()))
    } else {
        Ok(())
    }
}

fn doc_length(index: &InvertedIndex, doc_id: &str) -> Result<f64, RankerError> {
    index
        .doc_length(doc_id)
        .map(|l| l as f64)
        .ok_or_else(|| RankerError::UnknownDoc(doc_id.to_string()))
}

/// Query-likelihood score with Dirichlet smoothing:
/// sum over query terms of log((tf + mu*p_c) / (|d| + mu)).
/// Terms absent from the whole collection are skipped.
pub fn score_ql(index: &InvertedIndex, q: &Query, doc_id: &str, mu: f64) -> Result<f64, RankerError> {
    require_query_tokens(q)?;
    if mu <= 0.0 {
        return Err(RankerError::InvalidConfig(format!("mu must be > 0, got {mu}")));
    }
    let dl = doc_length(index, doc_id)?;
    let mut score = 0.0;
    for term in &q.tokens {
        let pc = index.collection_prob(term);
        if pc == 0.0 {
            continue;
        }
        let tf = f64::from(index.tf(term, doc_id));
        score += ((tf + mu * pc) / (dl + mu)).ln();
    }
    Ok(score)
}

/// Okapi BM25 with idf(t) = ln((N - df + 0.5) / (df + 0.5) + 1).
pub fn score_bm25(
    index: &InvertedIndex,
    q: &Query,
    doc_id: &str,
    k1: f64,
    b: f64,
) -> Result<f64, RankerError> {
    require_query_tokens(q)?;
    let dl = doc_length(index, doc_id)?;
    let n = index.num_docs() as f64;
    let avgdl = index.avg_doc_length();
    let mut score = 0.0;
    for term in &q.tokens {
        let tf = f64::from(index.tf(term, doc_id));
        if tf == 0.0 {
            continue;
        }
        let df = index.doc_freq(term) as f64;
        let idf = ((n - df + 0.5) / (df + 0.5) + 1.0).ln();
        let norm = if avgdl > 0.0 { k1 * (1.0 - b + b * dl / avgdl) } else { k1 };
        score += idf * tf * (k1 + 1.0) / (tf + norm);
    }
    Ok(score)
}

/// TF-IDF: sum over query terms of tf(t,d) * ln(N / df(t)).
pub fn score_tfidf(index: &InvertedIndex, q: &Query, doc_id: &str) -> Result<f64, RankerError> {
    require_query_tokens(q)?;
    doc_length(index, doc_id)?;
    let n = index.num_docs() as f64;
    let mut score = 0.0;
    for term in &q.tokens {
        let tf = f64::from(index.tf(term, doc_id));
        if tf == 0.0 {
            continue;
        }
        let df = index.doc_freq(term) as f64;
        score += tf * (n / df).ln();
    }
    Ok(score)
}

/// The four weak supervision sources.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankerKind {
    Bm25,
    Tfidf,
    Ql,
    QlRm3,
}

impl RankerKind {
    pub fn tag(&self) -> &'static str {
        match self {
            RankerKind::Bm25 => "bm25",
            RankerKind::Tfidf => "tfidf",
            RankerKind::Ql => "ql",
            RankerKind::QlRm3 => "ql-rm3",
        }
    }
}

/// A configured ranker, optionally with seeded additive score noise.
#[derive(Debug, Clone)]
pub struct Ranker {
    pub kind: RankerKind,
    pub config: RankerConfig,
    pub noise: Option<ScoreNoise>,
}

impl Ranker {
    pub fn new(kind: RankerKind, config: RankerConfig) -> Self {
        Self { kind, config, noise: None }
    }

    pub fn with_noise(mut self, noise: ScoreNoise) -> Self {
        self.noise = Some(noise);
        self
    }

    pub fn tag(&self) -> String {
        match &self.noise {
            Some(n) if n.sigma > 0.0 => format!("{}+noise", self.kind.tag()),
            _ => self.kind.tag().to_string(),
        }
    }

    /// Score every indexed document, descending with the tie rule.
    pub fn rank_all(&self, index: &InvertedIndex, q: &Query) -> Result<RankedList, RankerError> {
        self.config.validate()?;
        require_query_tokens(q)?;
        let mut list = match self.kind {
            RankerKind::Bm25 => self.score_all(index, q, |idx, q, d| {
                score_bm25(idx, q, d, self.config.bm25.k1, self.config.bm25.b)
            })?,
            RankerKind::Tfidf => self.score_all(index, q, score_tfidf)?,
            RankerKind::Ql => self.score_all(index, q, |idx, q, d| {
                score_ql(idx, q, d, self.config.ql.mu)
            })?,
            RankerKind::QlRm3 => {
                let base = Ranker::new(RankerKind::Ql, self.config).rank_all(index, q)?;
                rm3_rerank(index, q, &base, &self.config.rm3, self.config.ql.mu)?
            }
        };
        if let Some(noise) = &self.noise {
            for (doc_id, score) in &mut list.entries {
                *score = noise.perturb(&q.query_id, doc_id, *score);
            }
            sort_entries(&mut list.entries);
        }
        list.method = self.tag();
        Ok(list)
    }

    /// Exact top-k by score (shorter if the corpus has fewer documents).
    pub fn retrieve_topk(
        &self,
        index: &InvertedIndex,
        q: &Query,
        k: usize,
    ) -> Result<RankedList, RankerError> {
        if k == 0 {
            return Err(RankerError::InvalidConfig("k must be >= 1".into()));
        }
        Ok(self.rank_all(index, q)?.truncated(k))
    }

    fn score_all<F>(&self, index: &InvertedIndex, q: &Query, f: F) -> Result<RankedList, RankerError>
    where
        F: Fn(&InvertedIndex, &Query, &str) -> Result<f64, RankerError>,
    {
        let mut entries = Vec::with_capacity(index.num_docs());
        for doc_id in index.doc_ids() {
            entries.push((doc_id.clone(), f(index, q, doc_id)?));
        }
        Ok(RankedList::new(q.query_id.clone(), entries, self.kind.tag()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Document, InvertedIndex, Query};

    fn index(docs: &[(&str, &str)]) -> InvertedIndex {
        let docs: Vec<Document> =
            docs.iter().map(|(id, text)| Document::from_text(*id, *text)).collect();
        InvertedIndex::build(&docs).unwrap()
    }

    #[test]
    fn ql_hand_evaluated() {
        let idx = index(&[("d1", "a b"), ("d2", "a a")]);
        let q = Query::from_text("q", "a");
        // p_c(a) = 3/4; score(d1) = ln((1 + 1*(3/4)) / (2 + 1)) = ln(7/12)
        let s = score_ql(&idx, &q, "d1", 1.0).unwrap();
        assert!((s - (7.0f64 / 12.0).ln()).abs() < 1e-12);
        assert!((s - (-0.538_996_5)).abs() < 1e-6);
    }

    #[test]
    fn ql_skips_terms_absent_from_collection() {
        let idx = index(&[("d1", "a b"), ("d2", "a a")]);
        let q = Query::from_text("q", "z");
        assert_eq!(score_ql(&idx, &q, "d1", 1.0).unwrap(), 0.0);
        assert_eq!(score_ql(&idx, &q, "d2", 1.0).unwrap(), 0.0);
    }

    #[test]
    fn ql_large_mu_converges_to_collection_model() {
        let idx = index(&[("d1", "a b"), ("d2", "a a")]);
        let q = Query::from_text("q", "a");
        let mu = 1e12;
        let s1 = score_ql(&idx, &q, "d1", mu).unwrap();
        let s2 = score_ql(&idx, &q, "d2", mu).unwrap();
        let limit = (3.0f64 / 4.0).ln();
        assert!((s1 - limit).abs() < 1e-9);
        assert!((s2 - limit).abs() < 1e-9);
    }

    #[test]
    fn ql_rejects_empty_query() {
        let idx = index(&[("d1", "a")]);
        let q = Query::new("q", vec![]);
        assert!(matches!(score_ql(&idx, &q, "d1", 1.0), Err(RankerError::EmptyQuery(_))));
    }

    #[test]
    fn bm25_hand_evaluated() {
        // N=2, df=1, tf=1, |d| = avgdl: idf = ln(2), tf part = 2.2/2.2 = 1.
        let idx = index(&[("d1", "a b"), ("d2", "c d")]);
        let q = Query::from_text("q", "a");
        let s = score_bm25(&idx, &q, "d1", 1.2, 0.75).unwrap();
        assert!((s - 2.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn bm25_absent_term_contributes_zero() {
        let idx = index(&[("d1", "a b"), ("d2", "c d")]);
        let q = Query::from_text("q", "c");
        assert_eq!(score_bm25(&idx, &q, "d1", 1.2, 0.75).unwrap(), 0.0);
    }

    #[test]
    fn bm25_b_zero_ignores_length() {
        let idx = index(&[("d1", "a"), ("d2", "a b c d e f g h")]);
        let q = Query::from_text("q", "a");
        let s1 = score_bm25(&idx, &q, "d1", 1.2, 0.0).unwrap();
        let s2 = score_bm25(&idx, &q, "d2", 1.2, 0.0).unwrap();
        assert_eq!(s1, s2);
    }

    #[test]
    fn tfidf_hand_evaluated() {
        // tf=2, N=4, df=1 -> 2 ln 4
        let idx = index(&[("d1", "a a"), ("d2", "b"), ("d3", "b"), ("d4", "b")]);
        let q = Query::from_text("q", "a");
        let s = score_tfidf(&idx, &q, "d1").unwrap();
        assert!((s - 2.0 * 4.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn tfidf_ubiquitous_term_scores_zero() {
        let idx = index(&[("d1", "a"), ("d2", "a")]);
        let q = Query::from_text("q", "a");
        assert_eq!(score_tfidf(&idx, &q, "d1").unwrap(), 0.0);
    }

    #[test]
    fn topk_larger_than_corpus_returns_all_sorted() {
        let idx = index(&[("d1", "a b"), ("d2", "a a"), ("d3", "c")]);
        let q = Query::from_text("q", "a");
        let ranker = Ranker::new(RankerKind::Tfidf, RankerConfig::default());
        let list = ranker.retrieve_topk(&idx, &q, 10).unwrap();
        assert_eq!(list.entries.len(), 3);
        assert!(list.entries[0].1 >= list.entries[1].1);
    }

    #[test]
    fn equal_scores_tie_break_by_doc_id() {
        let idx = index(&[("db", "a"), ("da", "a"), ("dc", "x")]);
        let q = Query::from_text("q", "a");
        let ranker = Ranker::new(RankerKind::Tfidf, RankerConfig::default());
        let list = ranker.retrieve_topk(&idx, &q, 2).unwrap();
        assert_eq!(list.entries[0].0, "da");
        assert_eq!(list.entries[1].0, "db");
    }

    #[test]
    fn topk_matches_brute_force_ql() {
        let idx = index(&[
            ("d1", "a b c"),
            ("d2", "a a b"),
            ("d3", "b b b"),
            ("d4", "a c c"),
            ("d5", "e f"),
        ]);
        let q = Query::from_text("q", "a b");
        let ranker = Ranker::new(RankerKind::Ql, RankerConfig::default());
        let top = ranker.retrieve_topk(&idx, &q, 3).unwrap();

        let mut brute: Vec<(String, f64)> = idx
            .doc_ids()
            .iter()
            .map(|d| (d.clone(), score_ql(&idx, &q, d, 2500.0).unwrap()))
            .collect();
        brute.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        let expected: Vec<String> = brute.into_iter().take(3).map(|(d, _)| d).collect();
        let actual: Vec<String> = top.doc_ids().map(str::to_string).collect();
        assert_eq!(actual, expected);
    }

    #[test]
    fn config_validation() {
        let mut cfg = RankerConfig::default();
        cfg.bm25.k1 = -1.0;
        assert!(cfg.validate().is_err());
        let mut cfg = RankerConfig::default();
        cfg.rm3.orig_weight = 1.5;
        assert!(cfg.validate().is_err());
    }
}
