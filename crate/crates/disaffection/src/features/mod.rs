//! Text-to-vector feature extraction.
//!
//! Two task-specific configurations are used downstream: character 5-grams
//! with boolean counting for topic detection, and normalized words with
//! term-frequency counting for sentiment.

mod normalize;
mod tokenize;
mod vector;

pub use normalize::{
    normalize_for_sentiment, normalize_keep_targets, stem, NormalizationConfig,
};
pub use tokenize::{char_ngrams, tokenize_words, LINK_TOKEN};
pub use vector::{build_idf, vectorize, CountingScheme, IdfMap, SparseVector, Vocabulary};

/// Tokenization strategy used to build a model's feature space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenizerSpec {
    /// Character n-grams of the given width.
    CharNgrams(usize),
    /// Plain word tokenization.
    Words,
    /// Word tokenization plus sentiment normalization (target removal,
    /// stemming, synonym collapsing).
    NormalizedWords,
}

impl TokenizerSpec {
    pub fn as_str(self) -> String {
        match self {
            TokenizerSpec::CharNgrams(n) => format!("char{n}"),
            TokenizerSpec::Words => "words".to_string(),
            TokenizerSpec::NormalizedWords => "normwords".to_string(),
        }
    }

    pub fn parse(s: &str) -> crate::Result<Self> {
        if let Some(n) = s.strip_prefix("char") {
            let n: usize = n
                .parse()
                .map_err(|_| crate::Error::InvalidInput(format!("bad tokenizer {s:?}")))?;
            return Ok(TokenizerSpec::CharNgrams(n));
        }
        match s {
            "words" => Ok(TokenizerSpec::Words),
            "normwords" => Ok(TokenizerSpec::NormalizedWords),
            other => Err(crate::Error::InvalidInput(format!(
                "unknown tokenizer {other:?}"
            ))),
        }
    }

    /// Applies the tokenizer. `NormalizedWords` needs a normalization
    /// config; the others ignore it.
    pub fn tokenize(self, text: &str, norm: Option<&NormalizationConfig>) -> Vec<String> {
        match self {
            TokenizerSpec::CharNgrams(n) => char_ngrams(text, n),
            TokenizerSpec::Words => tokenize_words(text),
            TokenizerSpec::NormalizedWords => match norm {
                Some(cfg) => normalize_for_sentiment(text, cfg),
                None => normalize_for_sentiment(text, &NormalizationConfig::default()),
            },
        }
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        // |char_ngrams(s, n)| == max(0, chars(s) - n + 1)
        #[test]
        fn ngram_length_law(s in "\\PC{0,40}", n in 1usize..8) {
            let grams = char_ngrams(&s, n);
            let chars = s.to_lowercase().chars().count();
            prop_assert_eq!(grams.len(), chars.saturating_sub(n - 1).min(chars));
            for g in &grams {
                prop_assert_eq!(g.chars().count(), n);
            }
        }

        // Tokenizers are total and never emit empty tokens.
        #[test]
        fn tokenizers_total(s in "\\PC{0,60}") {
            for tok in tokenize_words(&s) {
                prop_assert!(!tok.is_empty());
            }
            let _ = char_ngrams(&s, 5);
        }

        // boolean weights are exactly 1; tf weights are positive integers;
        // tfidf = tf * idf pointwise.
        #[test]
        fn counting_scheme_laws(words in proptest::collection::vec("[a-f]{1,3}", 1..30)) {
            let docs = [words.clone(), vec!["q".to_string()]];
            let vocab = Vocabulary::build(&docs).unwrap();
            let idf = build_idf(&docs).unwrap();

            let tf = vectorize(&words, CountingScheme::Tf, &vocab, None).unwrap();
            let boolean = vectorize(&words, CountingScheme::Boolean, &vocab, None).unwrap();
            let tfidf = vectorize(&words, CountingScheme::TfIdf, &vocab, Some(&idf)).unwrap();

            for (_, w) in boolean.iter() {
                prop_assert_eq!(w, 1.0);
            }
            for (_, w) in tf.iter() {
                prop_assert!(w > 0.0 && w.fract() == 0.0);
            }
            for (idx, w) in tfidf.iter() {
                let term = vocab.term(idx).unwrap();
                let tf_w = tf.iter().find(|&(i, _)| i == idx).map(|(_, w)| w).unwrap();
                prop_assert!((w - tf_w * idf.idf(term).unwrap()).abs() < 1e-12);
            }
        }

        // Doubling a corpus leaves every idf unchanged.
        #[test]
        fn idf_duplication_invariant(docs in proptest::collection::vec(
            proptest::collection::vec("[a-e]{1,2}", 0..6), 1..8)) {
            let once = build_idf(&docs).unwrap();
            let doubled: Vec<Vec<String>> = docs.iter().chain(docs.iter()).cloned().collect();
            let twice = build_idf(&doubled).unwrap();
            for doc in &docs {
                for term in doc {
                    prop_assert!((once.idf(term).unwrap() - twice.idf(term).unwrap()).abs() < 1e-12);
                }
            }
        }
    }
}
