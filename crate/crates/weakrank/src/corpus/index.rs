//! Inverted index with collection statistics.
//!
//! The index is built once from a corpus and is immutable afterwards; all
//! unsupervised rankers read it concurrently. Postings are kept in canonical
//! order (ascending doc id) so that construction is independent of document
//! insertion order.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{CorpusError, Document};

/// One posting: a document containing the term and the term frequency within it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Posting {
    pub doc_id: String,
    pub tf: u32,
}

/// Inverted index plus the collection statistics used by the rankers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvertedIndex {
    postings: BTreeMap<String, Vec<Posting>>,
    collection_tf: BTreeMap<String, u64>,
    doc_lengths: BTreeMap<String, u64>,
    /// All indexed doc ids in ascending order.
    doc_ids: Vec<String>,
    total_tokens: u64,
}

impl InvertedIndex {
    /// Build an index over `docs`. Rejects duplicate doc ids.
    pub fn build(docs: &[Document]) -> Result<Self, CorpusError> {
        let mut postings: BTreeMap<String, Vec<Posting>> = BTreeMap::new();
        let mut collection_tf: BTreeMap<String, u64> = BTreeMap::new();
        let mut doc_lengths: BTreeMap<String, u64> = BTreeMap::new();
        let mut total_tokens = 0u64;

        for doc in docs {
            if doc_lengths.contains_key(&doc.doc_id) {
                return Err(CorpusError::DuplicateDocId(doc.doc_id.clone()));
            }
            doc_lengths.insert(doc.doc_id.clone(), doc.len() as u64);
            total_tokens += doc.len() as u64;

            let mut tf: HashMap<&str, u32> = HashMap::new();
            for t in &doc.tokens {
                *tf.entry(t.as_str()).or_insert(0) += 1;
            }
            for (term, count) in tf {
                postings
                    .entry(term.to_string())
                    .or_default()
                    .push(Posting { doc_id: doc.doc_id.clone(), tf: count });
                *collection_tf.entry(term.to_string()).or_insert(0) += u64::from(count);
            }
        }

        for list in postings.values_mut() {
            list.sort_by(|a, b| a.doc_id.cmp(&b.doc_id));
        }
        let mut doc_ids: Vec<String> = doc_lengths.keys().cloned().collect();
        doc_ids.sort();

        Ok(Self { postings, collection_tf, doc_lengths, doc_ids, total_tokens })
    }

    pub fn num_docs(&self) -> usize {
        self.doc_ids.len()
    }

    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    /// Mean document length; defined as 0 for an empty corpus.
    pub fn avg_doc_length(&self) -> f64 {
        if self.doc_ids.is_empty() {
            0.0
        } else {
            self.total_tokens as f64 / self.doc_ids.len() as f64
        }
    }

    /// Number of documents containing `term`.
    pub fn doc_freq(&self, term: &str) -> usize {
        self.postings.get(term).map_or(0, Vec::len)
    }

    /// Total occurrences of `term` across the collection.
    pub fn collection_tf(&self, term: &str) -> u64 {
        self.collection_tf.get(term).copied().unwrap_or(0)
    }

    /// Collection language-model probability of `term`.
    pub fn collection_prob(&self, term: &str) -> f64 {
        if self.total_tokens == 0 {
            0.0
        } else {
            self.collection_tf(term) as f64 / self.total_tokens as f64
        }
    }

    /// Term frequency of `term` in the given document (0 if absent).
    pub fn tf(&self, term: &str, doc_id: &str) -> u32 {
        self.postings
            .get(term)
            .and_then(|list| {
                list.binary_search_by(|p| p.doc_id.as_str().cmp(doc_id))
                    .ok()
                    .map(|i| list[i].tf)
            })
            .unwrap_or(0)
    }

    /// Length of the given document, if indexed.
    pub fn doc_length(&self, doc_id: &str) -> Option<u64> {
        self.doc_lengths.get(doc_id).copied()
    }

    pub fn contains_doc(&self, doc_id: &str) -> bool {
        self.doc_lengths.contains_key(doc_id)
    }

    /// All indexed doc ids, ascending.
    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    pub fn postings(&self, term: &str) -> Option<&[Posting]> {
        self.postings.get(term).map(Vec::as_slice)
    }

    /// All indexed terms in ascending order.
    pub fn terms(&self) -> impl Iterator<Item = &str> {
        self.postings.keys().map(String::as_str)
    }
}
