//! Input corpora: tweets, coder annotations, newspaper titles, and survey
//! points, plus label aggregation and inter-coder reliability.

mod aggregate;
mod alpha;
mod parse;

pub use aggregate::{aggregate_labels, AggregateReport};
pub use alpha::{krippendorff_alpha, AlphaVariable};
pub use parse::{
    parse_annotations, parse_news, parse_surveys, parse_tweets, write_annotations, write_news,
    write_surveys, write_tweets,
};

use chrono::{DateTime, NaiveDate, Utc};

/// Maximum tweet text size in bytes (140 characters of 4-byte UTF-8).
pub const MAX_TWEET_BYTES: usize = 560;

/// One tweet record. `created_at` is kept in UTC; analysis buckets by its
/// UTC calendar date.
#[derive(Debug, Clone, PartialEq)]
pub struct Tweet {
    pub id: String,
    pub user_id: String,
    pub created_at: DateTime<Utc>,
    pub text: String,
}

impl Tweet {
    pub fn date(&self) -> NaiveDate {
        self.created_at.date_naive()
    }

    /// True when the text starts with the conventional repost marker.
    pub fn is_retweet(&self) -> bool {
        let t = self.text.trim_start();
        let lower: String = t.chars().take(3).flat_map(char::to_lowercase).collect();
        lower.starts_with("rt ") || lower.starts_with("rt@")
    }
}

/// Sentiment category used by coders and by the second chain stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SentimentLabel {
    Negative,
    NonNegative,
}

impl SentimentLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            SentimentLabel::Negative => "neg",
            SentimentLabel::NonNegative => "nonneg",
        }
    }
}

/// One coder's judgement of one tweet. Sentiment is only meaningful for
/// political tweets; coders may skip it.
#[derive(Debug, Clone, PartialEq)]
pub struct Annotation {
    pub tweet_id: String,
    pub coder_id: String,
    pub political: bool,
    pub sentiment: Option<SentimentLabel>,
}

/// A tweet with its aggregated training labels. `sentiment` is only ever
/// present on political tweets.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledTweet {
    pub tweet: Tweet,
    pub political: bool,
    pub sentiment: Option<SentimentLabel>,
}

/// A newspaper title with its politics flag.
#[derive(Debug, Clone, PartialEq)]
pub struct NewsItem {
    pub date: NaiveDate,
    pub title: String,
    pub political: bool,
}

/// Survey indicators of political disaffection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SurveyIndicator {
    Inefficacy,
    NoVote,
}

impl SurveyIndicator {
    pub fn as_str(self) -> &'static str {
        match self {
            SurveyIndicator::Inefficacy => "INEFFICACY",
            SurveyIndicator::NoVote => "NO_VOTE",
        }
    }

    pub fn parse(s: &str) -> crate::Result<Self> {
        match s {
            "INEFFICACY" => Ok(SurveyIndicator::Inefficacy),
            "NO_VOTE" => Ok(SurveyIndicator::NoVote),
            other => Err(crate::Error::InvalidInput(format!(
                "unknown survey indicator {other:?}"
            ))),
        }
    }
}

/// One survey measurement: the share of respondents, in percent.
#[derive(Debug, Clone, PartialEq)]
pub struct SurveyPoint {
    pub date: NaiveDate,
    pub indicator: SurveyIndicator,
    pub value: f64,
}
