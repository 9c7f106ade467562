//! Text tokenization: lowercase, split on non-alphanumeric runs.

use std::collections::BTreeSet;

/// Tokenize text into lowercased terms, splitting on runs of
/// non-alphanumeric characters. Empty input yields an empty sequence.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|s| !s.is_empty())
        .map(|s| s.to_lowercase())
        .collect()
}

/// Tokenizer with an optional stopword list. Stopwords are removed after
/// lowercasing; the default tokenizer keeps everything.
#[derive(Debug, Clone, Default)]
pub struct Tokenizer {
    stopwords: BTreeSet<String>,
}

impl Tokenizer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_stopwords<I, S>(stopwords: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            stopwords: stopwords.into_iter().map(|s| s.into().to_lowercase()).collect(),
        }
    }

    pub fn tokenize(&self, text: &str) -> Vec<String> {
        let mut tokens = tokenize(text);
        if !self.stopwords.is_empty() {
            tokens.retain(|t| !self.stopwords.contains(t));
        }
        tokens
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_input() {
        assert!(tokenize("").is_empty());
    }

    #[test]
    fn lowercases_and_splits_on_nonalnum() {
        assert_eq!(
            tokenize("Town of Davie POST-office"),
            vec!["town", "of", "davie", "post", "office"]
        );
    }

    #[test]
    fn collapses_separator_runs() {
        assert_eq!(tokenize("easter  mice!!"), vec!["easter", "mice"]);
    }

    #[test]
    fn keeps_digits() {
        assert_eq!(tokenize("robust04 corpus"), vec!["robust04", "corpus"]);
    }

    #[test]
    fn stopword_removal() {
        let tok = Tokenizer::with_stopwords(["of", "the"]);
        assert_eq!(tok.tokenize("Town of Davie"), vec!["town", "davie"]);
    }
}
