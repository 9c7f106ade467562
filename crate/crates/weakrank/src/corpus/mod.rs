//! Corpus handling: tokenization, documents and queries, inverted indexing,
//! file ingestion, and a seeded synthetic corpus generator for desk-scale
//! experiments.

mod index;
mod ingest;
mod synthetic;
mod tokenize;

pub use index::{InvertedIndex, Posting};
pub use ingest::{
    read_embeddings, read_jsonl, read_qrels, read_topics, read_trec_text, IngestError, Qrels,
    RawRecord,
};
pub use synthetic::{SyntheticParams, SyntheticWorld};
pub use tokenize::{tokenize, Tokenizer};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("duplicate doc_id: {0}")]
    DuplicateDocId(String),
    #[error("invalid synthetic parameter: {0}")]
    InvalidParameter(String),
}

/// A tokenized document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub doc_id: String,
    pub text: String,
    pub tokens: Vec<String>,
}

impl Document {
    pub fn new(doc_id: impl Into<String>, text: impl Into<String>, tokenizer: &Tokenizer) -> Self {
        let text = text.into();
        let tokens = tokenizer.tokenize(&text);
        Self { doc_id: doc_id.into(), text, tokens }
    }

    /// Tokenize with the default tokenizer (no stopword removal).
    pub fn from_text(doc_id: impl Into<String>, text: impl Into<String>) -> Self {
        Self::new(doc_id, text, &Tokenizer::new())
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// A tokenized query. Queries used for training or evaluation must have at
/// least one token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub query_id: String,
    pub tokens: Vec<String>,
}

impl Query {
    pub fn new(query_id: impl Into<String>, tokens: Vec<String>) -> Self {
        Self { query_id: query_id.into(), tokens }
    }

    pub fn from_text(query_id: impl Into<String>, text: impl Into<String>) -> Self {
        Self::new(query_id, tokenize(&text.into()))
    }
}

/// A set of documents with id lookup. Document order is canonical (ascending
/// doc id) regardless of insertion order.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    docs: Vec<Document>,
}

impl Corpus {
    pub fn new(mut docs: Vec<Document>) -> Result<Self, CorpusError> {
        docs.sort_by(|a, b| a.doc_id.cmp(&b.doc_id));
        for pair in docs.windows(2) {
            if pair[0].doc_id == pair[1].doc_id {
                return Err(CorpusError::DuplicateDocId(pair[0].doc_id.clone()));
            }
        }
        Ok(Self { docs })
    }

    pub fn docs(&self) -> &[Document] {
        &self.docs
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    pub fn get(&self, doc_id: &str) -> Option<&Document> {
        self.docs
            .binary_search_by(|d| d.doc_id.as_str().cmp(doc_id))
            .ok()
            .map(|i| &self.docs[i])
    }

    pub fn index(&self) -> Result<InvertedIndex, CorpusError> {
        InvertedIndex::build(&self.docs)
    }

    /// Sorted vocabulary of all document tokens.
    pub fn vocabulary(&self) -> Vec<String> {
        let mut vocab: Vec<String> =
            self.docs.iter().flat_map(|d| d.tokens.iter().cloned()).collect();
        vocab.sort_unstable();
        vocab.dedup();
        vocab
    }
}
