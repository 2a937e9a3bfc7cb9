pub mod alpha;
pub mod analyze;
pub mod chain;
pub mod train;

use std::path::PathBuf;

use disaffection::corpus::{parse_tweets, Tweet};
use disaffection::features::NormalizationConfig;

use crate::config::Settings;
use crate::output::open_reader;
use crate::CliResult;

pub fn load_tweets(path: &PathBuf) -> CliResult<Vec<Tweet>> {
    Ok(parse_tweets(open_reader(path)?)?)
}

/// Builds the sentiment-normalization config from optional synonym and
/// entity files.
pub fn load_normalization(
    settings: &Settings,
    synonyms: &Option<PathBuf>,
    entities: &Option<PathBuf>,
) -> CliResult<NormalizationConfig> {
    let synonyms = settings.optional_input(synonyms, |p| p.synonyms.as_ref())?;
    let entities = settings.optional_input(entities, |p| p.entities.as_ref())?;
    let synonym_reader = synonyms.as_deref().map(open_reader).transpose()?;
    let entity_reader = entities.as_deref().map(open_reader).transpose()?;
    Ok(NormalizationConfig::from_readers(
        synonym_reader,
        entity_reader,
        settings.stemming(),
    )?)
}

pub fn path_entry(key: &'static str, path: &std::path::Path) -> (&'static str, String) {
    (key, path.display().to_string())
}
