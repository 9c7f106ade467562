//! Seeded synthetic corpus generator.
//!
//! Builds a topic-structured world: each query owns a topic with a disjoint
//! slice of the vocabulary, topical documents mix topic terms with background
//! terms, and background documents contain background terms only. Unsupervised
//! rankers therefore score well above random, which gives weak-supervision
//! experiments headroom to degrade the weak source in controlled ways.
//!
//! Regeneration with the same parameters and seed is bit-identical.

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use super::{Corpus, CorpusError, Document, Qrels, Query};

/// Topical documents guaranteed per query (and so per topic).
const TOPICAL_DOCS_PER_TOPIC: usize = 12;
/// Of those, how many keep their gold grade even under relevance noise.
const NOISE_EXEMPT_PER_TOPIC: usize = 10;
/// Mean document length in tokens.
const DOC_LEN_MEAN: usize = 40;
/// Fraction of topical tokens for grade-1 and grade-2 documents.
const TOPICAL_FRAC: [f64; 2] = [0.25, 0.45];
/// Probability that a topical document is strongly relevant (grade 2).
const GRADE2_PROB: f64 = 0.3;
/// Terms drawn into a query come from the head of its topic distribution.
const QUERY_TERM_POOL: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticParams {
    pub num_docs: usize,
    pub num_queries: usize,
    pub vocab_size: usize,
    /// Probability that a non-exempt topical document's gold grade is
    /// resampled uniformly from {0, 1, 2}.
    pub relevance_noise: f64,
    pub seed: u64,
}

impl SyntheticParams {
    fn validate(&self) -> Result<(), CorpusError> {
        if self.num_docs == 0 || self.num_queries == 0 || self.vocab_size == 0 {
            return Err(CorpusError::InvalidParameter("all counts must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.relevance_noise) {
            return Err(CorpusError::InvalidParameter(format!(
                "relevance_noise must be in [0,1], got {}",
                self.relevance_noise
            )));
        }
        if self.num_docs < TOPICAL_DOCS_PER_TOPIC * self.num_queries {
            return Err(CorpusError::InvalidParameter(format!(
                "num_docs={} cannot host {} topical docs for {} queries",
                self.num_docs,
                TOPICAL_DOCS_PER_TOPIC * self.num_queries,
                self.num_queries
            )));
        }
        // Half the vocabulary is background; each topic needs >= 3 own terms.
        if self.vocab_size / 2 < 3 * self.num_queries {
            return Err(CorpusError::InvalidParameter(format!(
                "vocab_size={} too small for {} topics",
                self.vocab_size, self.num_queries
            )));
        }
        Ok(())
    }
}

/// A generated corpus with queries and gold relevance.
#[derive(Debug, Clone)]
pub struct SyntheticWorld {
    pub corpus: Corpus,
    pub queries: Vec<Query>,
    pub gold: Qrels,
    pub seed: u64,
}

impl SyntheticWorld {
    pub fn generate(params: &SyntheticParams) -> Result<Self, CorpusError> {
        params.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

        let vocab: Vec<String> =
            (0..params.vocab_size).map(|i| format!("t{i:05}")).collect();
        let background_size = params.vocab_size / 2;
        let per_topic = (params.vocab_size - background_size) / params.num_queries;
        let background: Vec<usize> = (0..background_size).collect();
        let topics: Vec<Vec<usize>> = (0..params.num_queries)
            .map(|t| {
                let start = background_size + t * per_topic;
                (start..start + per_topic).collect()
            })
            .collect();

        // Zipf-ish head-heavy weights inside each term pool.
        let zipf = |n: usize| -> Vec<f64> { (0..n).map(|r| 1.0 / (r as f64 + 1.0)).collect() };
        let background_dist = WeightedIndex::new(zipf(background.len()))
            .expect("background pool is non-empty");
        let topic_dists: Vec<WeightedIndex<f64>> = topics
            .iter()
            .map(|terms| WeightedIndex::new(zipf(terms.len())).expect("topic pool is non-empty"))
            .collect();

        // Queries: 2-3 distinct terms from the head of the topic distribution.
        let mut queries = Vec::with_capacity(params.num_queries);
        for (t, terms) in topics.iter().enumerate() {
            let n_terms = rng.gen_range(2..=3).min(terms.len());
            let pool = QUERY_TERM_POOL.min(terms.len());
            let mut picks: Vec<usize> = Vec::new();
            while picks.len() < n_terms {
                let cand = rng.gen_range(0..pool);
                if !picks.contains(&cand) {
                    picks.push(cand);
                }
            }
            let tokens: Vec<String> = picks.iter().map(|&i| vocab[terms[i]].clone()).collect();
            queries.push(Query::new(format!("q{t:04}"), tokens));
        }

        // Documents: the first TOPICAL_DOCS_PER_TOPIC * num_queries are
        // assigned topics round-robin, the rest are pure background.
        let num_topical = TOPICAL_DOCS_PER_TOPIC * params.num_queries;
        let mut docs = Vec::with_capacity(params.num_docs);
        let mut gold = Qrels::new();
        // Count of topical docs already generated per topic; used for the
        // noise exemption that keeps >= 10 positives per query.
        let mut per_topic_count = vec![0usize; params.num_queries];

        for d in 0..params.num_docs {
            let doc_id = format!("d{d:06}");
            let len = rng.gen_range(DOC_LEN_MEAN * 3 / 4..=DOC_LEN_MEAN * 5 / 4).max(1);
            let mut tokens = Vec::with_capacity(len);

            if d < num_topical {
                let topic = d % params.num_queries;
                let grade: u32 = if rng.gen_bool(GRADE2_PROB) { 2 } else { 1 };
                let frac = TOPICAL_FRAC[(grade - 1) as usize];
                for _ in 0..len {
                    if rng.gen_bool(frac) {
                        tokens.push(vocab[topics[topic][topic_dists[topic].sample(&mut rng)]].clone());
                    } else {
                        tokens.push(vocab[background[background_dist.sample(&mut rng)]].clone());
                    }
                }
                let exempt = per_topic_count[topic] < NOISE_EXEMPT_PER_TOPIC;
                per_topic_count[topic] += 1;
                let final_grade = if !exempt
                    && params.relevance_noise > 0.0
                    && rng.gen_bool(params.relevance_noise)
                {
                    rng.gen_range(0..=2)
                } else {
                    grade
                };
                gold.insert(queries[topic].query_id.clone(), doc_id.clone(), final_grade);
            } else {
                for _ in 0..len {
                    tokens.push(vocab[background[background_dist.sample(&mut rng)]].clone());
                }
            }

            let text = tokens.join(" ");
            docs.push(Document { doc_id, text, tokens });
        }

        let corpus = Corpus::new(docs)?;
        Ok(Self { corpus, queries, gold, seed: params.seed })
    }
}
