//! RM3 pseudo-relevance feedback: build a relevance model over the top
//! feedback documents, keep the heaviest terms, interpolate with the original
//! query distribution, and rescore with the KL-based query likelihood of the
//! expanded query.

use std::collections::HashMap;

use crate::corpus::{InvertedIndex, Query};

use super::{sort_entries, RankedList, RankerError, Rm3Params};

/// Build the expanded query distribution. Returns (term, weight) pairs
/// sorted by descending weight (ties by ascending term); weights sum to 1.
pub fn expand_query(
    index: &InvertedIndex,
    q: &Query,
    base: &RankedList,
    cfg: &Rm3Params,
    mu: f64,
) -> Result<Vec<(String, f64)>, RankerError> {
    if q.tokens.is_empty() {
        return Err(RankerError::EmptyQuery(q.query_id.clone()));
    }

    // Feedback document weights: normalized QL likelihoods. Base scores are
    // log-probabilities; stabilize with the max before exponentiating.
    let fb: Vec<(&str, f64)> = base
        .entries
        .iter()
        .take(cfg.fb_docs)
        .map(|(d, s)| (d.as_str(), *s))
        .collect();

    let mut relevance_model: Vec<(String, f64)> = Vec::new();
    if !fb.is_empty() {
        let max_score = fb.iter().map(|(_, s)| *s).fold(f64::NEG_INFINITY, f64::max);
        let mut weights: Vec<f64> = fb.iter().map(|(_, s)| (s - max_score).exp()).collect();
        let total: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= total;
        }
        let lengths: Vec<f64> = fb
            .iter()
            .map(|(d, _)| {
                index
                    .doc_length(d)
                    .map(|l| l as f64)
                    .ok_or_else(|| RankerError::UnknownDoc((*d).to_string()))
            })
            .collect::<Result<_, _>>()?;

        // Dirichlet-smoothed P(t|d) mixed over feedback docs, for every
        // collection term.
        for term in index.terms() {
            let pc = index.collection_prob(term);
            let mut p = 0.0;
            for ((doc_id, _), (w, dl)) in fb.iter().zip(weights.iter().zip(&lengths)) {
                let tf = f64::from(index.tf(term, doc_id));
                p += w * (tf + mu * pc) / (dl + mu);
            }
            if p > 0.0 {
                relevance_model.push((term.to_string(), p));
            }
        }
        // Keep the fb_terms heaviest and renormalize.
        relevance_model.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        relevance_model.truncate(cfg.fb_terms);
        let kept: f64 = relevance_model.iter().map(|(_, p)| p).sum();
        for (_, p) in &mut relevance_model {
            *p /= kept;
        }
    }

    // Original query distribution: maximum-likelihood term frequencies.
    let mut expanded: HashMap<String, f64> = HashMap::new();
    let qlen = q.tokens.len() as f64;
    for t in &q.tokens {
        *expanded.entry(t.clone()).or_insert(0.0) += cfg.orig_weight / qlen;
    }
    for (t, p) in relevance_model {
        *expanded.entry(t).or_insert(0.0) += (1.0 - cfg.orig_weight) * p;
    }

    let mut out: Vec<(String, f64)> = expanded.into_iter().collect();
    out.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    Ok(out)
}

/// Rescore every indexed document by the expanded query's KL-based query
/// likelihood: sum over expansion terms of weight * log P_dirichlet(t|d).
/// An empty base ranking is returned unchanged.
pub fn rm3_rerank(
    index: &InvertedIndex,
    q: &Query,
    base: &RankedList,
    cfg: &Rm3Params,
    mu: f64,
) -> Result<RankedList, RankerError> {
    if base.entries.is_empty() {
        return Ok(base.clone());
    }
    let expanded = expand_query(index, q, base, cfg, mu)?;

    let mut entries = Vec::with_capacity(index.num_docs());
    for doc_id in index.doc_ids() {
        let dl = index.doc_length(doc_id).expect("indexed doc has a length") as f64;
        let mut score = 0.0;
        for (term, weight) in &expanded {
            let pc = index.collection_prob(term);
            if pc == 0.0 {
                continue;
            }
            let tf = f64::from(index.tf(term, doc_id));
            score += weight * ((tf + mu * pc) / (dl + mu)).ln();
        }
        entries.push((doc_id.clone(), score));
    }
    sort_entries(&mut entries);
    Ok(RankedList { query_id: q.query_id.clone(), entries, method: "ql-rm3".to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Document, SyntheticParams, SyntheticWorld};
    use crate::rankers::{Ranker, RankerConfig, RankerKind};

    fn world() -> SyntheticWorld {
        SyntheticWorld::generate(&SyntheticParams {
            num_docs: 80,
            num_queries: 4,
            vocab_size: 200,
            relevance_noise: 0.0,
            seed: 42,
        })
        .unwrap()
    }

    #[test]
    fn orig_weight_one_reproduces_base_order() {
        let w = world();
        let index = w.corpus.index().unwrap();
        let q = &w.queries[0];
        let ql = Ranker::new(RankerKind::Ql, RankerConfig::default());
        let base = ql.rank_all(&index, q).unwrap();
        let cfg = Rm3Params { orig_weight: 1.0, ..Rm3Params::default() };
        let reranked = rm3_rerank(&index, q, &base, &cfg, 2500.0).unwrap();
        let base_order: Vec<&str> = base.doc_ids().collect();
        let reranked_order: Vec<&str> = reranked.doc_ids().collect();
        assert_eq!(base_order, reranked_order);
    }

    #[test]
    fn no_truncation_single_doc_matches_smoothed_distribution() {
        let docs =
            vec![Document::from_text("d1", "a a b"), Document::from_text("d2", "b c c c")];
        let index = crate::corpus::InvertedIndex::build(&docs).unwrap();
        let q = crate::corpus::Query::from_text("q", "a");
        let mu = 10.0;
        let ql = Ranker::new(RankerKind::Ql, RankerConfig { ql: crate::rankers::QlParams { mu }, ..Default::default() });
        let base = ql.rank_all(&index, &q).unwrap();
        let cfg = Rm3Params { fb_docs: 1, fb_terms: 100, orig_weight: 0.0 };
        let expanded = expand_query(&index, &q, &base, &cfg, mu).unwrap();

        // Top QL doc for "a" is d1 ("a a b"); the expansion must equal d1's
        // Dirichlet-smoothed term distribution.
        let top_doc = &base.entries[0].0;
        assert_eq!(top_doc, "d1");
        let dl = 3.0;
        for (term, weight) in &expanded {
            let tf = f64::from(index.tf(term, "d1"));
            let pc = index.collection_prob(term);
            let expected = (tf + mu * pc) / (dl + mu);
            assert!(
                (weight - expected).abs() < 1e-12,
                "term {term}: {weight} vs {expected}"
            );
        }
        let total: f64 = expanded.iter().map(|(_, w)| w).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn expansion_adds_topical_terms() {
        let w = world();
        let index = w.corpus.index().unwrap();
        let q = &w.queries[1];
        let ql = Ranker::new(RankerKind::Ql, RankerConfig::default());
        let base = ql.rank_all(&index, q).unwrap();
        let expanded =
            expand_query(&index, q, &base, &Rm3Params::default(), 2500.0).unwrap();
        let new_terms: Vec<&str> = expanded
            .iter()
            .map(|(t, _)| t.as_str())
            .filter(|t| !q.tokens.iter().any(|qt| qt == t))
            .collect();
        assert!(!new_terms.is_empty(), "expected expansion terms beyond the query");
    }

    #[test]
    fn empty_base_returned_unchanged() {
        let docs = vec![Document::from_text("d1", "a")];
        let index = crate::corpus::InvertedIndex::build(&docs).unwrap();
        let q = crate::corpus::Query::from_text("q", "a");
        let base = RankedList { query_id: "q".into(), entries: vec![], method: "ql".into() };
        let out = rm3_rerank(&index, &q, &base, &Rm3Params::default(), 2500.0).unwrap();
        assert_eq!(out, base);
    }
}
