//! Sentiment-task token normalization: target removal, Italian stemming,
//! and synonym collapsing.

use std::collections::{HashMap, HashSet};
use std::io::BufRead;
use std::sync::OnceLock;

use rust_stemmers::{Algorithm, Stemmer};

use crate::error::{Error, Result};
use crate::features::tokenize::tokenize_words;

fn italian_stemmer() -> &'static Stemmer {
    static STEMMER: OnceLock<Stemmer> = OnceLock::new();
    STEMMER.get_or_init(|| Stemmer::create(Algorithm::Italian))
}

/// Stems one lowercased token with the Snowball Italian suffix stripper.
pub fn stem(token: &str) -> String {
    italian_stemmer().stem(token).into_owned()
}

/// Configuration for sentiment-task normalization.
///
/// The entity list holds lowercased surface forms of sentiment targets
/// (parties, politicians, offices); matching is per token. The synonym map
/// sends variants to a canonical term and is applied after stemming, so when
/// stemming is enabled both sides of every pair are stemmed at load time.
#[derive(Debug, Clone, Default)]
pub struct NormalizationConfig {
    synonyms: HashMap<String, String>,
    entities: HashSet<String>,
    stemming: bool,
}

impl NormalizationConfig {
    /// Builds and validates a configuration.
    ///
    /// The synonym map must be acyclic: a canonical term that itself appears
    /// as a variant must map to itself.
    pub fn new(
        synonyms: HashMap<String, String>,
        entities: HashSet<String>,
        stemming: bool,
    ) -> Result<Self> {
        let mut canon_synonyms: HashMap<String, String> = HashMap::new();
        for (variant, canonical) in synonyms {
            let variant = normalize_entry(&variant, stemming);
            let canonical = normalize_entry(&canonical, stemming);
            match canon_synonyms.get(&variant) {
                Some(existing) if *existing != canonical => {
                    return Err(Error::InvalidInput(format!(
                        "synonym variant {variant:?} maps to both {existing:?} and {canonical:?}"
                    )));
                }
                _ => {
                    canon_synonyms.insert(variant, canonical);
                }
            }
        }
        for canonical in canon_synonyms.values() {
            if let Some(target) = canon_synonyms.get(canonical) {
                if target != canonical {
                    return Err(Error::InvalidInput(format!(
                        "synonym map is not acyclic: canonical {canonical:?} maps on to {target:?}"
                    )));
                }
            }
        }
        let entities = entities.into_iter().map(|e| e.to_lowercase()).collect();
        Ok(NormalizationConfig {
            synonyms: canon_synonyms,
            entities,
            stemming,
        })
    }

    /// Loads the synonym file (`variant<TAB>canonical` lines) and entity
    /// list (one surface form per line); either may be absent.
    pub fn from_readers(
        synonyms: Option<impl BufRead>,
        entities: Option<impl BufRead>,
        stemming: bool,
    ) -> Result<Self> {
        let mut synonym_map = HashMap::new();
        if let Some(reader) = synonyms {
            for (i, line) in reader.lines().enumerate() {
                let line = line?;
                let line = line.trim_end_matches(['\r', '\n']);
                if line.trim().is_empty() || line.starts_with('#') {
                    continue;
                }
                let (variant, canonical) = line.split_once('\t').ok_or_else(|| {
                    Error::malformed(i + 1, "expected variant<TAB>canonical")
                })?;
                synonym_map.insert(variant.trim().to_string(), canonical.trim().to_string());
            }
        }
        let mut entity_set = HashSet::new();
        if let Some(reader) = entities {
            for line in reader.lines() {
                let line = line?;
                let entry = line.trim();
                if !entry.is_empty() && !entry.starts_with('#') {
                    entity_set.insert(entry.to_string());
                }
            }
        }
        NormalizationConfig::new(synonym_map, entity_set, stemming)
    }

    pub fn stemming(&self) -> bool {
        self.stemming
    }

    pub fn is_entity(&self, token: &str) -> bool {
        self.entities.contains(token)
    }

    /// Stems (when enabled) and synonym-collapses a single token.
    pub fn canonicalize(&self, token: &str) -> String {
        let stemmed = if self.stemming {
            stem(token)
        } else {
            token.to_string()
        };
        match self.synonyms.get(&stemmed) {
            Some(canonical) => canonical.clone(),
            None => stemmed,
        }
    }
}

fn normalize_entry(entry: &str, stemming: bool) -> String {
    let lowered = entry.to_lowercase();
    if stemming {
        stem(&lowered)
    } else {
        lowered
    }
}

/// Word tokens for the sentiment task: tokenize, drop sentiment targets
/// (entity-list matches and `@`-mentions), stem, collapse synonyms.
///
/// The output never contains a token equal to an entity-list entry or
/// starting with `@`, no matter what stemming or the synonym map produce.
pub fn normalize_for_sentiment(text: &str, config: &NormalizationConfig) -> Vec<String> {
    tokenize_words(text)
        .into_iter()
        .filter(|t| !config.is_entity(t) && !t.starts_with('@'))
        .map(|t| config.canonicalize(&t))
        .filter(|t| !config.is_entity(t) && !t.starts_with('@'))
        .collect()
}

/// Same normalization minus target removal; the generic-speech stage uses
/// this so entity mentions stay visible to it.
pub fn normalize_keep_targets(text: &str, config: &NormalizationConfig) -> Vec<String> {
    tokenize_words(text)
        .into_iter()
        .map(|t| config.canonicalize(&t))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(
        synonyms: &[(&str, &str)],
        entities: &[&str],
        stemming: bool,
    ) -> NormalizationConfig {
        NormalizationConfig::new(
            synonyms
                .iter()
                .map(|&(a, b)| (a.to_string(), b.to_string()))
                .collect(),
            entities.iter().map(|s| s.to_string()).collect(),
            stemming,
        )
        .unwrap()
    }

    #[test]
    fn removes_entities_and_mentions() {
        let cfg = config(&[], &["monti"], false);
        let tokens = normalize_for_sentiment("@user monti pessimo", &cfg);
        assert_eq!(tokens, vec!["pessimo"]);
    }

    #[test]
    fn identity_configuration_matches_tokenizer() {
        let cfg = config(&[], &[], false);
        let text = "ciao :) mondo!";
        assert_eq!(normalize_for_sentiment(text, &cfg), tokenize_words(text));
    }

    #[test]
    fn synonyms_collapse_to_one_token() {
        let cfg = config(&[("schifoso", "pessimo"), ("orrendo", "pessimo")], &[], false);
        let tokens = normalize_for_sentiment("schifoso orrendo", &cfg);
        assert_eq!(tokens, vec!["pessimo", "pessimo"]);
    }

    #[test]
    fn stemming_strips_italian_suffixes() {
        let cfg = config(&[], &[], true);
        let tokens = normalize_for_sentiment("governo pessimo", &cfg);
        assert_eq!(tokens, vec![stem("governo"), stem("pessimo")]);
        assert_ne!(tokens[0], "governo");
    }

    #[test]
    fn synonym_entries_are_stemmed_with_stemming_on() {
        // Both sides of the pair are declared unstemmed; lookup happens
        // after stemming and must still hit.
        let cfg = config(&[("schifoso", "pessimo")], &[], true);
        let tokens = normalize_for_sentiment("schifoso", &cfg);
        assert_eq!(tokens, vec![stem("pessimo")]);
    }

    #[test]
    fn entity_case_insensitive() {
        let cfg = config(&[], &["Monti"], false);
        assert!(normalize_for_sentiment("MONTI Monti monti", &cfg).is_empty());
    }

    #[test]
    fn cyclic_synonyms_rejected() {
        let err = NormalizationConfig::new(
            [
                ("a".to_string(), "b".to_string()),
                ("b".to_string(), "c".to_string()),
            ]
            .into_iter()
            .collect(),
            HashSet::new(),
            false,
        );
        assert!(err.is_err());
    }

    #[test]
    fn self_canonical_accepted() {
        let cfg = config(&[("b", "c"), ("c", "c")], &[], false);
        assert_eq!(cfg.canonicalize("b"), "c");
        assert_eq!(cfg.canonicalize("c"), "c");
    }

    #[test]
    fn keep_targets_preserves_entities() {
        let cfg = config(&[], &["monti"], false);
        let tokens = normalize_keep_targets("monti pessimo", &cfg);
        assert_eq!(tokens, vec!["monti", "pessimo"]);
    }

    #[test]
    fn never_emits_entity_or_mention() {
        // A synonym that would re-introduce an entity is filtered out.
        let cfg = config(&[("premier", "monti")], &["monti"], false);
        let tokens = normalize_for_sentiment("il premier @rossi monti", &cfg);
        assert!(tokens.iter().all(|t| !cfg.is_entity(t) && !t.starts_with('@')));
        assert_eq!(tokens, vec!["il"]);
    }
}
