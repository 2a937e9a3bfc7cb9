//! Merging multi-coder annotations into training labels.

use std::collections::HashMap;

use super::{Annotation, LabeledTweet, SentimentLabel, Tweet};
use crate::error::{Error, Result};

/// What [`aggregate_labels`] left out and why. Ids appear in tweet input
/// order.
#[derive(Debug, Default, Clone)]
pub struct AggregateReport {
    /// Fewer than the minimum number of annotations.
    pub skipped_few_annotations: Vec<String>,
    /// Coders disagreed on the political flag; unanimity is required.
    pub discarded_no_consensus: Vec<String>,
    /// Political, but the sentiment vote was tied; excluded from the
    /// sentiment task only.
    pub sentiment_ties: Vec<String>,
    /// Political, but fewer sentiment votes than the minimum; excluded from
    /// the sentiment task only.
    pub insufficient_sentiment_votes: Vec<String>,
    /// Annotations referencing tweets not present in the corpus.
    pub unknown_tweet_ids: Vec<String>,
}

/// Merges annotations into labels: a tweet is kept only when all coders
/// agree on its political flag; sentiment takes the label holding strictly
/// more than half of the sentiment votes.
///
/// Tweets with fewer than `min_annotations` codings are skipped and
/// reported. Political tweets whose sentiment votes are too few or tied
/// stay in the political set with no sentiment label.
pub fn aggregate_labels(
    annotations: &[Annotation],
    tweets: &[Tweet],
    min_annotations: usize,
) -> Result<(Vec<LabeledTweet>, AggregateReport)> {
    if min_annotations == 0 {
        return Err(Error::InvalidInput(
            "min_annotations must be at least 1".into(),
        ));
    }

    let mut by_tweet: HashMap<&str, Vec<&Annotation>> = HashMap::new();
    for ann in annotations {
        by_tweet.entry(ann.tweet_id.as_str()).or_default().push(ann);
    }

    let mut report = AggregateReport::default();
    let known: HashMap<&str, ()> = tweets.iter().map(|t| (t.id.as_str(), ())).collect();
    let mut unknown_seen: Vec<&str> = Vec::new();
    for ann in annotations {
        if !known.contains_key(ann.tweet_id.as_str())
            && !unknown_seen.contains(&ann.tweet_id.as_str())
        {
            unknown_seen.push(&ann.tweet_id);
            report.unknown_tweet_ids.push(ann.tweet_id.clone());
        }
    }

    let mut labeled = Vec::new();
    for tweet in tweets {
        let anns = match by_tweet.get(tweet.id.as_str()) {
            Some(anns) if anns.len() >= min_annotations => anns,
            _ => {
                report.skipped_few_annotations.push(tweet.id.clone());
                continue;
            }
        };

        let political_votes = anns.iter().filter(|a| a.political).count();
        let political = if political_votes == anns.len() {
            true
        } else if political_votes == 0 {
            false
        } else {
            report.discarded_no_consensus.push(tweet.id.clone());
            continue;
        };

        let sentiment = if political {
            let votes: Vec<SentimentLabel> =
                anns.iter().filter_map(|a| a.sentiment).collect();
            if votes.len() < min_annotations {
                report.insufficient_sentiment_votes.push(tweet.id.clone());
                None
            } else {
                let negatives = votes
                    .iter()
                    .filter(|&&v| v == SentimentLabel::Negative)
                    .count();
                // Strict majority; an exact tie discards the tweet from the
                // sentiment training set.
                if 2 * negatives > votes.len() {
                    Some(SentimentLabel::Negative)
                } else if 2 * (votes.len() - negatives) > votes.len() {
                    Some(SentimentLabel::NonNegative)
                } else {
                    report.sentiment_ties.push(tweet.id.clone());
                    None
                }
            }
        } else {
            None
        };

        labeled.push(LabeledTweet {
            tweet: tweet.clone(),
            political,
            sentiment,
        });
    }

    Ok((labeled, report))
}
