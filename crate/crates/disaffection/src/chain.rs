//! The three-stage relevance chain: political topic, negative sentiment,
//! generic speech. Survivors of each stage feed the next, so the relevant
//! set can only shrink stage by stage.

use std::collections::{BTreeMap, HashSet};
use std::io::{BufRead, Write};

use chrono::NaiveDate;
use rayon::prelude::*;

use crate::corpus::{LabeledTweet, NewsItem, SentimentLabel, Tweet};
use crate::error::{Error, Result};
use crate::features::{
    char_ngrams, normalize_for_sentiment, normalize_keep_targets, vectorize, CountingScheme,
    NormalizationConfig, SparseVector, TokenizerSpec, Vocabulary,
};
use crate::learners::{with_bias, FeatureFingerprint, Label, LinearModel};

/// A trained stage: the model plus the vocabulary it indexes into.
#[derive(Debug, Clone)]
pub struct StageModel {
    pub model: LinearModel,
    pub vocabulary: Vocabulary,
}

/// Everything the chain needs to classify a tweet.
#[derive(Debug, Clone)]
pub struct ChainConfig {
    political: StageModel,
    sentiment: StageModel,
    /// Generic-speech keywords, already canonicalized like sentiment tokens.
    generic_keywords: HashSet<String>,
    normalization: NormalizationConfig,
    skip_retweets: bool,
}

impl ChainConfig {
    /// Validates that each stage model was trained under the feature
    /// configuration its stage expects and against the supplied vocabulary,
    /// and canonicalizes the keyword list.
    pub fn new(
        political: StageModel,
        sentiment: StageModel,
        generic_keywords: HashSet<String>,
        normalization: NormalizationConfig,
        skip_retweets: bool,
    ) -> Result<Self> {
        check_stage(&political, "political", "char5", "boolean")?;
        check_stage(&sentiment, "sentiment", "normwords", "tf")?;
        if generic_keywords.is_empty() {
            return Err(Error::InvalidInput(
                "generic keyword list is empty".into(),
            ));
        }
        let generic_keywords = generic_keywords
            .iter()
            .map(|k| normalization.canonicalize(&k.to_lowercase()))
            .collect();
        Ok(ChainConfig {
            political,
            sentiment,
            generic_keywords,
            normalization,
            skip_retweets,
        })
    }

    pub fn keywords(&self) -> &HashSet<String> {
        &self.generic_keywords
    }

    pub fn normalization(&self) -> &NormalizationConfig {
        &self.normalization
    }
}

fn check_stage(stage: &StageModel, task: &str, tokenizer: &str, scheme: &str) -> Result<()> {
    let fp = stage.model.fingerprint();
    if fp.task != task || fp.tokenizer != tokenizer || fp.scheme != scheme {
        return Err(Error::InvalidInput(format!(
            "{task} stage expects features {task}|{tokenizer}|{scheme}, model carries {fp}"
        )));
    }
    let vocab_hash = stage.vocabulary.hash();
    if fp.vocab_hash != vocab_hash {
        return Err(Error::InvalidInput(format!(
            "{task} stage vocabulary hash {vocab_hash} does not match model ({})",
            fp.vocab_hash
        )));
    }
    Ok(())
}

/// Training material for one stage: model-space examples (bias included),
/// the vocabulary they index, and the fingerprint to stamp on the model.
#[derive(Debug)]
pub struct StageData {
    pub examples: Vec<(SparseVector, Label)>,
    pub vocabulary: Vocabulary,
    pub fingerprint: FeatureFingerprint,
}

/// Assembles the political-stage dataset: labeled tweets plus newspaper
/// titles, character 5-grams, boolean counting. The positive class is
/// "political".
pub fn political_stage_data(
    labeled: &[LabeledTweet],
    news: &[NewsItem],
) -> Result<StageData> {
    let texts: Vec<(&str, bool)> = labeled
        .iter()
        .map(|lt| (lt.tweet.text.as_str(), lt.political))
        .chain(news.iter().map(|n| (n.title.as_str(), n.political)))
        .collect();
    let docs: Vec<Vec<String>> = texts.iter().map(|(t, _)| char_ngrams(t, 5)).collect();
    let vocabulary = Vocabulary::build(&docs)?;
    let examples = docs
        .iter()
        .zip(texts.iter())
        .map(|(doc, &(_, political))| {
            let x = vectorize(doc, CountingScheme::Boolean, &vocabulary, None)?;
            Ok((with_bias(&x), Label::from_bool(political)))
        })
        .collect::<Result<Vec<_>>>()?;
    let fingerprint = FeatureFingerprint::new(
        "political",
        TokenizerSpec::CharNgrams(5).as_str(),
        CountingScheme::Boolean.as_str(),
        vocabulary.hash(),
    );
    Ok(StageData {
        examples,
        vocabulary,
        fingerprint,
    })
}

/// Assembles the sentiment-stage dataset from political tweets carrying a
/// sentiment label: normalized words, term-frequency counting. The positive
/// class is "negative sentiment".
pub fn sentiment_stage_data(
    labeled: &[LabeledTweet],
    normalization: &NormalizationConfig,
) -> Result<StageData> {
    let with_sentiment: Vec<(&str, SentimentLabel)> = labeled
        .iter()
        .filter_map(|lt| lt.sentiment.map(|s| (lt.tweet.text.as_str(), s)))
        .collect();
    let docs: Vec<Vec<String>> = with_sentiment
        .iter()
        .map(|(t, _)| normalize_for_sentiment(t, normalization))
        .collect();
    if docs.is_empty() {
        return Err(Error::InsufficientData(
            "no tweets carry a sentiment label".into(),
        ));
    }
    let vocabulary = Vocabulary::build(&docs)?;
    let examples = docs
        .iter()
        .zip(with_sentiment.iter())
        .map(|(doc, &(_, sentiment))| {
            let x = vectorize(doc, CountingScheme::Tf, &vocabulary, None)?;
            Ok((
                with_bias(&x),
                Label::from_bool(sentiment == SentimentLabel::Negative),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let fingerprint = FeatureFingerprint::new(
        "sentiment",
        TokenizerSpec::NormalizedWords.as_str(),
        CountingScheme::Tf.as_str(),
        vocabulary.hash(),
    );
    Ok(StageData {
        examples,
        vocabulary,
        fingerprint,
    })
}

/// Reads a keyword list: one term per line, `#` comments allowed.
pub fn load_keywords(reader: impl BufRead) -> Result<HashSet<String>> {
    let mut out = HashSet::new();
    for line in reader.lines() {
        let line = line?;
        let term = line.trim();
        if !term.is_empty() && !term.starts_with('#') {
            out.insert(term.to_string());
        }
    }
    Ok(out)
}

/// Per-tweet chain outcome. `negative` is present only when the tweet is
/// political; `generic` only when it is also negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainVerdict {
    pub tweet_id: String,
    pub political: bool,
    pub negative: Option<bool>,
    pub generic: Option<bool>,
    pub relevant: bool,
}

/// Counts per UTC calendar date. For every date,
/// `relevant <= political <= total`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DayCounts {
    pub political: u64,
    pub relevant: u64,
    pub total: u64,
}

/// Date-keyed classification counts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DailyCounts {
    map: BTreeMap<NaiveDate, DayCounts>,
}

impl DailyCounts {
    pub fn new() -> Self {
        DailyCounts::default()
    }

    pub fn get(&self, date: NaiveDate) -> DayCounts {
        self.map.get(&date).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (NaiveDate, DayCounts)> + '_ {
        self.map.iter().map(|(&d, &c)| (d, c))
    }

    pub fn first_date(&self) -> Option<NaiveDate> {
        self.map.keys().next().copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    fn record(&mut self, date: NaiveDate, verdict: &ChainVerdict) {
        let entry = self.map.entry(date).or_default();
        entry.total += 1;
        if verdict.political {
            entry.political += 1;
        }
        if verdict.relevant {
            entry.relevant += 1;
        }
    }

    /// Inserts a whole day of pre-aggregated counts.
    pub fn insert_day(&mut self, date: NaiveDate, counts: DayCounts) -> Result<()> {
        if counts.relevant > counts.political || counts.political > counts.total {
            return Err(Error::Invariant(format!(
                "day {date}: relevant {} <= political {} <= total {} violated",
                counts.relevant, counts.political, counts.total
            )));
        }
        if self.map.insert(date, counts).is_some() {
            return Err(Error::InvalidInput(format!("duplicate date {date}")));
        }
        Ok(())
    }
}

/// True iff at least one token is a generic-speech keyword. Tokens must
/// already be canonicalized the same way the keyword set was.
pub fn is_generic(tokens: &[String], keywords: &HashSet<String>) -> bool {
    tokens.iter().any(|t| keywords.contains(t))
}

/// Runs a single tweet through the three stages.
///
/// Stage gating: sentiment runs only on political tweets and the generic
/// check only on negative ones; `relevant` is the conjunction of all three.
/// A degenerate text yields an empty vector, hence score 0, and the sign
/// rule calls it positive.
pub fn classify_tweet(tweet: &Tweet, config: &ChainConfig) -> ChainVerdict {
    let grams = char_ngrams(&tweet.text, 5);
    let x1 = vectorize(
        &grams,
        CountingScheme::Boolean,
        &config.political.vocabulary,
        None,
    )
    .expect("boolean vectorization is total");
    let (label, _) = config.political.model.predict(&with_bias(&x1));
    let political = label == Label::Positive;

    let mut negative = None;
    let mut generic = None;
    if political {
        let tokens = normalize_for_sentiment(&tweet.text, &config.normalization);
        let x2 = vectorize(
            &tokens,
            CountingScheme::Tf,
            &config.sentiment.vocabulary,
            None,
        )
        .expect("tf vectorization is total");
        let (label, _) = config.sentiment.model.predict(&with_bias(&x2));
        let is_negative = label == Label::Positive;
        negative = Some(is_negative);
        if is_negative {
            let generic_tokens = normalize_keep_targets(&tweet.text, &config.normalization);
            generic = Some(is_generic(&generic_tokens, &config.generic_keywords));
        }
    }

    ChainVerdict {
        tweet_id: tweet.id.clone(),
        political,
        negative,
        generic,
        relevant: political && negative.unwrap_or(false) && generic.unwrap_or(false),
    }
}

/// Classifies a corpus and aggregates counts by UTC calendar date.
///
/// Retweets are excluded entirely when `skip_retweets` is set, mirroring a
/// corpus where reposts were deleted before analysis. Verdicts come back in
/// input order; classification fans out across threads.
pub fn run_chain(tweets: &[Tweet], config: &ChainConfig) -> (Vec<ChainVerdict>, DailyCounts) {
    let classified: Vec<Option<(NaiveDate, ChainVerdict)>> = tweets
        .par_iter()
        .map(|tweet| {
            if config.skip_retweets && tweet.is_retweet() {
                return None;
            }
            Some((tweet.date(), classify_tweet(tweet, config)))
        })
        .collect();

    let mut counts = DailyCounts::new();
    let mut verdicts = Vec::with_capacity(classified.len());
    for item in classified.into_iter().flatten() {
        let (date, verdict) = item;
        counts.record(date, &verdict);
        verdicts.push(verdict);
    }
    (verdicts, counts)
}

pub const VERDICT_HEADER: &str = "tweet_id\tpolitical\tnegative\tgeneric\trelevant";

pub fn write_verdicts(w: &mut impl Write, verdicts: &[ChainVerdict]) -> Result<()> {
    writeln!(w, "{VERDICT_HEADER}")?;
    let flag = |b: bool| if b { "1" } else { "0" };
    let opt = |b: Option<bool>| b.map(flag).unwrap_or("");
    for v in verdicts {
        writeln!(
            w,
            "{}\t{}\t{}\t{}\t{}",
            v.tweet_id,
            flag(v.political),
            opt(v.negative),
            opt(v.generic),
            flag(v.relevant)
        )?;
    }
    Ok(())
}

pub const COUNTS_HEADER: &str = "date\tpolitical\trelevant\ttotal";

pub fn write_counts(w: &mut impl Write, counts: &DailyCounts) -> Result<()> {
    writeln!(w, "{COUNTS_HEADER}")?;
    for (date, c) in counts.iter() {
        writeln!(
            w,
            "{}\t{}\t{}\t{}",
            date.format("%Y-%m-%d"),
            c.political,
            c.relevant,
            c.total
        )?;
    }
    Ok(())
}

/// Reads a counts table back, skipping `#` comment lines such as the
/// provenance header the command-line tool writes.
pub fn read_counts(reader: impl BufRead) -> Result<DailyCounts> {
    let mut lines = reader.lines().enumerate();
    loop {
        let (n, line) = lines
            .next()
            .ok_or_else(|| Error::malformed(1, format!("expected header {COUNTS_HEADER:?}")))?;
        let line = line?;
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        if line.trim_end() != COUNTS_HEADER {
            return Err(Error::malformed(
                n + 1,
                format!("expected header {COUNTS_HEADER:?}"),
            ));
        }
        break;
    }
    let mut counts = DailyCounts::new();
    for (i, line) in lines {
        let line = line?;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let n = i + 1;
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 4 {
            return Err(Error::malformed(n, format!("expected 4 fields, got {}", fields.len())));
        }
        let date = NaiveDate::parse_from_str(fields[0], "%Y-%m-%d")
            .map_err(|e| Error::malformed(n, format!("bad date {:?}: {e}", fields[0])))?;
        let parse = |s: &str| {
            s.parse::<u64>()
                .map_err(|e| Error::malformed(n, format!("bad count {s:?}: {e}")))
        };
        let day = DayCounts {
            political: parse(fields[1])?,
            relevant: parse(fields[2])?,
            total: parse(fields[3])?,
        };
        counts
            .insert_day(date, day)
            .map_err(|e| Error::malformed(n, e.to_string()))?;
    }
    Ok(counts)
}
