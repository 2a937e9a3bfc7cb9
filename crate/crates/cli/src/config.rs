//! Pipeline configuration: TOML file merged with command-line flags.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use disaffection::learners::Algorithm;

use crate::{CliError, CliResult};

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub min_annotations: Option<usize>,
    pub stemming: Option<bool>,
    pub skip_retweets: Option<bool>,
    pub paths: Paths,
    pub learner: LearnerConfig,
    pub analysis: AnalysisConfig,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Paths {
    pub tweets: Option<PathBuf>,
    pub news: Option<PathBuf>,
    pub annotations: Option<PathBuf>,
    pub surveys: Option<PathBuf>,
    pub keywords: Option<PathBuf>,
    pub entities: Option<PathBuf>,
    pub synonyms: Option<PathBuf>,
    pub political_model: Option<PathBuf>,
    pub political_vocab: Option<PathBuf>,
    pub sentiment_model: Option<PathBuf>,
    pub sentiment_vocab: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LearnerConfig {
    pub algorithm: Option<String>,
    pub c: Option<f64>,
    pub alpha: Option<f64>,
    pub lambda: Option<f64>,
    pub projection: Option<bool>,
    pub folds: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisConfig {
    pub interval: Option<String>,
    pub window: Option<usize>,
    pub k: Option<f64>,
    pub level: Option<f64>,
}

/// Effective settings for one invocation.
#[derive(Debug)]
pub struct Settings {
    pub file: FileConfig,
    pub seed: u64,
    pub deterministic: bool,
}

impl Settings {
    pub fn load(
        config_path: Option<&Path>,
        seed_flag: Option<u64>,
        deterministic: bool,
    ) -> CliResult<Self> {
        let file = match config_path {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|_| CliError::Missing(path.to_path_buf()))?;
                toml::from_str(&text)
                    .map_err(|e| CliError::Validation(format!("bad config file: {e}")))?
            }
            None => FileConfig::default(),
        };
        let seed = seed_flag.or(file.seed).unwrap_or(0);
        Ok(Settings {
            file,
            seed,
            deterministic,
        })
    }

    /// Resolves a required input path: flag first, then config, and the
    /// file must exist.
    pub fn input(
        &self,
        flag: &Option<PathBuf>,
        from_config: impl Fn(&Paths) -> Option<&PathBuf>,
        name: &str,
    ) -> CliResult<PathBuf> {
        let path = flag
            .clone()
            .or_else(|| from_config(&self.file.paths).cloned())
            .ok_or_else(|| {
                CliError::Validation(format!(
                    "no {name} file given (flag --{name} or config [paths].{name})",
                    name = name.replace(' ', "-")
                ))
            })?;
        if !path.is_file() {
            return Err(CliError::Missing(path));
        }
        Ok(path)
    }

    /// Resolves an optional input path; when present the file must exist.
    pub fn optional_input(
        &self,
        flag: &Option<PathBuf>,
        from_config: impl Fn(&Paths) -> Option<&PathBuf>,
    ) -> CliResult<Option<PathBuf>> {
        let path = flag
            .clone()
            .or_else(|| from_config(&self.file.paths).cloned());
        match path {
            Some(path) if !path.is_file() => Err(CliError::Missing(path)),
            other => Ok(other),
        }
    }

    pub fn min_annotations(&self) -> usize {
        self.file.min_annotations.unwrap_or(3)
    }

    pub fn stemming(&self) -> bool {
        self.file.stemming.unwrap_or(true)
    }

    pub fn skip_retweets(&self) -> bool {
        self.file.skip_retweets.unwrap_or(true)
    }

    pub fn folds(&self, flag: Option<usize>) -> usize {
        flag.or(self.file.learner.folds).unwrap_or(10)
    }

    pub fn window(&self, flag: Option<usize>) -> usize {
        flag.or(self.file.analysis.window).unwrap_or(10)
    }

    pub fn sigma_k(&self, flag: Option<f64>) -> f64 {
        flag.or(self.file.analysis.k).unwrap_or(2.0)
    }

    pub fn level(&self) -> f64 {
        self.file.analysis.level.unwrap_or(0.95)
    }

    pub fn interval_string(&self, flag: &Option<String>) -> String {
        flag.clone()
            .or_else(|| self.file.analysis.interval.clone())
            .unwrap_or_else(|| "1:14".to_string())
    }

    /// Algorithm for a task: flag, then config, then the combination the
    /// pipeline settled on (PA for the political stage, ALMA for
    /// sentiment). Hyperparameters come from the config with the library
    /// defaults as fallback.
    pub fn algorithm(&self, flag: &Option<String>, task: &str) -> CliResult<Algorithm> {
        let name = flag
            .clone()
            .or_else(|| self.file.learner.algorithm.clone())
            .unwrap_or_else(|| {
                match task {
                    "sentiment" => "alma",
                    _ => "pa",
                }
                .to_string()
            });
        match name.as_str() {
            "pa" => Ok(Algorithm::Pa {
                c: self.file.learner.c.unwrap_or(1.0),
            }),
            "alma" => Ok(Algorithm::Alma {
                alpha: self.file.learner.alpha.unwrap_or(0.9),
            }),
            "pegasos" => Ok(Algorithm::Pegasos {
                lambda: self.file.learner.lambda.unwrap_or(1e-4),
                project: self.file.learner.projection.unwrap_or(true),
            }),
            other => Err(CliError::Validation(format!(
                "unknown algorithm {other:?} (expected pa, alma, or pegasos)"
            ))),
        }
    }
}

pub fn describe_algorithm(algorithm: Algorithm) -> String {
    match algorithm {
        Algorithm::Pa { c } => format!("pa c={c}"),
        Algorithm::Alma { alpha } => format!("alma alpha={alpha}"),
        Algorithm::Pegasos { lambda, project } => {
            format!("pegasos lambda={lambda} project={}", project as u8)
        }
    }
}
