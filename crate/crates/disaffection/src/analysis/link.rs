//! Linking a peak day to the newspaper headline its tweets discussed:
//! the news vector maximizing the summed cosine similarity to the day's
//! tweet vectors.

use std::collections::BTreeMap;

use chrono::NaiveDate;

use crate::corpus::{NewsItem, Tweet};
use crate::error::{Error, Result};
use crate::features::{tokenize_words, IdfMap};

/// The winning headline for a peak and its summed-cosine score.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkedNews {
    pub news: NewsItem,
    pub score: f64,
}

/// Tf-idf vector in term space; terms missing from the idf map carry
/// weight zero and are not stored.
fn tfidf_vector(text: &str, idf: &IdfMap) -> BTreeMap<String, f64> {
    let mut tf: BTreeMap<String, f64> = BTreeMap::new();
    for token in tokenize_words(text) {
        *tf.entry(token).or_insert(0.0) += 1.0;
    }
    tf.retain(|term, weight| match idf.idf(term) {
        Some(w) if w != 0.0 => {
            *weight *= w;
            true
        }
        _ => false,
    });
    tf
}

fn norm(v: &BTreeMap<String, f64>) -> f64 {
    v.values().map(|w| w * w).sum::<f64>().sqrt()
}

fn dot(a: &BTreeMap<String, f64>, b: &BTreeMap<String, f64>) -> f64 {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    small
        .iter()
        .filter_map(|(term, &w)| large.get(term).map(|&u| w * u))
        .sum()
}

/// Picks, among the political news of `peak_date`, the item whose tf-idf
/// vector maximizes the summed cosine similarity over that day's tweets.
///
/// Zero-norm tweets are skipped; ties break toward the earliest news item
/// in input order. Errors when no candidate news has a nonzero vector or
/// no tweet does.
pub fn link_news(
    peak_date: NaiveDate,
    news: &[NewsItem],
    tweets: &[Tweet],
    idf: &IdfMap,
) -> Result<LinkedNews> {
    let candidates: Vec<(&NewsItem, BTreeMap<String, f64>, f64)> = news
        .iter()
        .filter(|n| n.date == peak_date && n.political)
        .map(|n| {
            let v = tfidf_vector(&n.title, idf);
            let norm = norm(&v);
            (n, v, norm)
        })
        .filter(|(_, _, norm)| *norm > 0.0)
        .collect();
    if candidates.is_empty() {
        return Err(Error::InsufficientData(format!(
            "no political news with a nonzero vector dated {peak_date}"
        )));
    }

    let tweet_vectors: Vec<(BTreeMap<String, f64>, f64)> = tweets
        .iter()
        .filter(|t| t.date() == peak_date)
        .map(|t| {
            let v = tfidf_vector(&t.text, idf);
            let norm = norm(&v);
            (v, norm)
        })
        .filter(|(_, norm)| *norm > 0.0)
        .collect();
    if tweet_vectors.is_empty() {
        return Err(Error::InsufficientData(format!(
            "no tweet with a nonzero vector dated {peak_date}"
        )));
    }

    let mut best: Option<(&NewsItem, f64)> = None;
    for (item, vector, item_norm) in &candidates {
        let score: f64 = tweet_vectors
            .iter()
            .map(|(tv, tnorm)| dot(vector, tv) / (item_norm * tnorm))
            .sum();
        // Strict comparison keeps the earliest item on ties.
        if best.map(|(_, s)| score > s).unwrap_or(true) {
            best = Some((item, score));
        }
    }
    let (news, score) = best.expect("candidates are nonempty");
    Ok(LinkedNews {
        news: news.clone(),
        score,
    })
}
