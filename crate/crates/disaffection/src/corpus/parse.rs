//! Readers and writers for the external file formats.
//!
//! Tweets travel as JSON lines; annotations, news, and surveys as
//! tab-separated text with a header row. Writers emit the canonical form
//! the readers accept, so canonical files round-trip byte for byte.

use std::collections::HashSet;
use std::io::{BufRead, Write};

use chrono::{DateTime, NaiveDate, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};

use super::{Annotation, NewsItem, SentimentLabel, SurveyIndicator, SurveyPoint, Tweet,
    MAX_TWEET_BYTES};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct TweetRecord<'a> {
    id: &'a str,
    user_id: &'a str,
    created_at: &'a str,
    text: &'a str,
}

/// Parses a JSONL tweet stream. Blank lines are skipped; anything else
/// malformed fails with its line number.
pub fn parse_tweets(reader: impl BufRead) -> Result<Vec<Tweet>> {
    let mut tweets = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let n = i + 1;
        let rec: TweetRecord = serde_json::from_str(&line)
            .map_err(|e| Error::malformed(n, format!("bad tweet json: {e}")))?;
        if rec.id.is_empty() {
            return Err(Error::malformed(n, "empty tweet id"));
        }
        if !seen.insert(rec.id.to_string()) {
            return Err(Error::Duplicate {
                what: "tweet id",
                line: n,
                key: rec.id.to_string(),
            });
        }
        let created_at = DateTime::parse_from_rfc3339(rec.created_at)
            .map_err(|e| Error::malformed(n, format!("bad created_at {:?}: {e}", rec.created_at)))?
            .with_timezone(&Utc);
        if rec.text.trim().is_empty() {
            return Err(Error::malformed(n, "empty tweet text"));
        }
        if rec.text.len() > MAX_TWEET_BYTES {
            return Err(Error::malformed(
                n,
                format!("tweet text exceeds {MAX_TWEET_BYTES} bytes"),
            ));
        }
        tweets.push(Tweet {
            id: rec.id.to_string(),
            user_id: rec.user_id.to_string(),
            created_at,
            text: rec.text.to_string(),
        });
    }
    Ok(tweets)
}

pub fn write_tweets(w: &mut impl Write, tweets: &[Tweet]) -> Result<()> {
    for t in tweets {
        let created = t.created_at.to_rfc3339_opts(SecondsFormat::Secs, true);
        let rec = TweetRecord {
            id: &t.id,
            user_id: &t.user_id,
            created_at: &created,
            text: &t.text,
        };
        serde_json::to_writer(&mut *w, &rec)
            .map_err(|e| Error::InvalidInput(format!("tweet not serializable: {e}")))?;
        writeln!(w)?;
    }
    Ok(())
}

fn check_header(line: Option<std::io::Result<String>>, expected: &str) -> Result<()> {
    match line {
        Some(line) => {
            let line = line?;
            if line.trim_end() != expected {
                return Err(Error::malformed(
                    1,
                    format!("expected header {expected:?}, got {:?}", line.trim_end()),
                ));
            }
            Ok(())
        }
        None => Err(Error::malformed(1, "empty file, expected header")),
    }
}

fn parse_binary(field: &str, line: usize, what: &str) -> Result<bool> {
    match field {
        "1" => Ok(true),
        "0" => Ok(false),
        other => Err(Error::malformed(
            line,
            format!("{what} must be 0 or 1, got {other:?}"),
        )),
    }
}

fn parse_date(field: &str, line: usize) -> Result<NaiveDate> {
    NaiveDate::parse_from_str(field, "%Y-%m-%d")
        .map_err(|e| Error::malformed(line, format!("bad date {field:?}: {e}")))
}

pub const ANNOTATION_HEADER: &str = "tweet_id\tcoder_id\tpolitical\tsentiment";

/// Parses the annotation table. A duplicate (tweet_id, coder_id) pair is a
/// hard error: silently dropping codings would corrupt reliability.
pub fn parse_annotations(reader: impl BufRead) -> Result<Vec<Annotation>> {
    let mut lines = reader.lines();
    check_header(lines.next(), ANNOTATION_HEADER)?;
    let mut out = Vec::new();
    let mut seen: HashSet<(String, String)> = HashSet::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let n = i + 2;
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 4 {
            return Err(Error::malformed(n, format!("expected 4 fields, got {}", fields.len())));
        }
        let (tweet_id, coder_id) = (fields[0], fields[1]);
        if tweet_id.is_empty() || coder_id.is_empty() {
            return Err(Error::malformed(n, "empty tweet_id or coder_id"));
        }
        if !seen.insert((tweet_id.to_string(), coder_id.to_string())) {
            return Err(Error::Duplicate {
                what: "annotation (tweet_id, coder_id)",
                line: n,
                key: format!("({tweet_id}, {coder_id})"),
            });
        }
        let political = parse_binary(fields[2], n, "political")?;
        let sentiment = match fields[3] {
            "" => None,
            "neg" => Some(SentimentLabel::Negative),
            "nonneg" => Some(SentimentLabel::NonNegative),
            other => {
                return Err(Error::malformed(
                    n,
                    format!("sentiment must be neg, nonneg, or empty, got {other:?}"),
                ))
            }
        };
        if sentiment.is_some() && !political {
            return Err(Error::malformed(
                n,
                "sentiment present on a non-political annotation",
            ));
        }
        out.push(Annotation {
            tweet_id: tweet_id.to_string(),
            coder_id: coder_id.to_string(),
            political,
            sentiment,
        });
    }
    Ok(out)
}

pub fn write_annotations(w: &mut impl Write, annotations: &[Annotation]) -> Result<()> {
    writeln!(w, "{ANNOTATION_HEADER}")?;
    for a in annotations {
        let sentiment = a.sentiment.map(SentimentLabel::as_str).unwrap_or("");
        writeln!(
            w,
            "{}\t{}\t{}\t{}",
            a.tweet_id,
            a.coder_id,
            if a.political { 1 } else { 0 },
            sentiment
        )?;
    }
    Ok(())
}

pub const NEWS_HEADER: &str = "date\tpolitical\ttitle";

/// Parses the news table. The title is everything after the second tab, so
/// embedded tabs survive. An optional date range enforces corpus bounds.
pub fn parse_news(
    reader: impl BufRead,
    range: Option<(NaiveDate, NaiveDate)>,
) -> Result<Vec<NewsItem>> {
    let mut lines = reader.lines();
    check_header(lines.next(), NEWS_HEADER)?;
    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let n = i + 2;
        let mut fields = line.splitn(3, '\t');
        let date = parse_date(fields.next().unwrap_or(""), n)?;
        let political = parse_binary(fields.next().unwrap_or(""), n, "political")?;
        let title = fields
            .next()
            .ok_or_else(|| Error::malformed(n, "missing title field"))?;
        if title.trim().is_empty() {
            return Err(Error::malformed(n, "empty news title"));
        }
        if let Some((lo, hi)) = range {
            if date < lo || date > hi {
                return Err(Error::malformed(
                    n,
                    format!("news date {date} outside corpus range {lo}..={hi}"),
                ));
            }
        }
        out.push(NewsItem {
            date,
            title: title.to_string(),
            political,
        });
    }
    Ok(out)
}

pub fn write_news(w: &mut impl Write, news: &[NewsItem]) -> Result<()> {
    writeln!(w, "{NEWS_HEADER}")?;
    for item in news {
        writeln!(
            w,
            "{}\t{}\t{}",
            item.date.format("%Y-%m-%d"),
            if item.political { 1 } else { 0 },
            item.title
        )?;
    }
    Ok(())
}

pub const SURVEY_HEADER: &str = "date\tindicator\tvalue";

/// Parses survey points. An empty value field marks a missing measurement
/// and yields no record; duplicate (date, indicator) pairs are an error.
pub fn parse_surveys(reader: impl BufRead) -> Result<Vec<SurveyPoint>> {
    let mut lines = reader.lines();
    check_header(lines.next(), SURVEY_HEADER)?;
    let mut out = Vec::new();
    let mut seen: HashSet<(NaiveDate, SurveyIndicator)> = HashSet::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let n = i + 2;
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(Error::malformed(n, format!("expected 3 fields, got {}", fields.len())));
        }
        let date = parse_date(fields[0], n)?;
        let indicator =
            SurveyIndicator::parse(fields[1]).map_err(|e| Error::malformed(n, e.to_string()))?;
        if !seen.insert((date, indicator)) {
            return Err(Error::Duplicate {
                what: "survey (date, indicator)",
                line: n,
                key: format!("({date}, {})", indicator.as_str()),
            });
        }
        if fields[2].is_empty() {
            continue; // missing measurement
        }
        let value: f64 = fields[2]
            .parse()
            .map_err(|e| Error::malformed(n, format!("bad value {:?}: {e}", fields[2])))?;
        if !value.is_finite() || !(0.0..=100.0).contains(&value) {
            return Err(Error::malformed(
                n,
                format!("survey value {value} outside [0, 100]"),
            ));
        }
        out.push(SurveyPoint {
            date,
            indicator,
            value,
        });
    }
    Ok(out)
}

pub fn write_surveys(w: &mut impl Write, points: &[SurveyPoint]) -> Result<()> {
    writeln!(w, "{SURVEY_HEADER}")?;
    for p in points {
        writeln!(
            w,
            "{}\t{}\t{}",
            p.date.format("%Y-%m-%d"),
            p.indicator.as_str(),
            p.value
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;

    #[test]
    fn tweet_identity_parse() {
        let line = r#"{"id":"t1","user_id":"u9","created_at":"2012-04-05T10:30:00Z","text":"ciao mondo"}"#;
        let tweets = parse_tweets(line.as_bytes()).unwrap();
        assert_eq!(tweets.len(), 1);
        let t = &tweets[0];
        assert_eq!(t.id, "t1");
        assert_eq!(t.user_id, "u9");
        assert_eq!(
            t.created_at,
            Utc.with_ymd_and_hms(2012, 4, 5, 10, 30, 0).unwrap()
        );
        assert_eq!(t.text, "ciao mondo");
    }

    #[test]
    fn empty_stream_empty_list() {
        assert!(parse_tweets("".as_bytes()).unwrap().is_empty());
        assert!(parse_annotations(format!("{ANNOTATION_HEADER}\n").as_bytes())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn unparseable_date_names_the_line() {
        let data = concat!(
            r#"{"id":"a","user_id":"u","created_at":"2012-04-05T10:30:00Z","text":"x"}"#,
            "\n",
            r#"{"id":"b","user_id":"u","created_at":"not-a-date","text":"y"}"#,
        );
        match parse_tweets(data.as_bytes()) {
            Err(Error::Malformed { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected malformed error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_tweet_id_rejected() {
        let data = concat!(
            r#"{"id":"a","user_id":"u","created_at":"2012-04-05T10:30:00Z","text":"x"}"#,
            "\n",
            r#"{"id":"a","user_id":"v","created_at":"2012-04-06T10:30:00Z","text":"y"}"#,
        );
        assert!(matches!(
            parse_tweets(data.as_bytes()),
            Err(Error::Duplicate { line: 2, .. })
        ));
    }

    #[test]
    fn oversized_or_blank_text_rejected() {
        let long = "x".repeat(MAX_TWEET_BYTES + 1);
        let data = format!(
            r#"{{"id":"a","user_id":"u","created_at":"2012-04-05T10:30:00Z","text":"{long}"}}"#
        );
        assert!(parse_tweets(data.as_bytes()).is_err());
        let blank = r#"{"id":"a","user_id":"u","created_at":"2012-04-05T10:30:00Z","text":"  "}"#;
        assert!(parse_tweets(blank.as_bytes()).is_err());
    }

    #[test]
    fn tweets_roundtrip_bytes() {
        let src = concat!(
            r#"{"id":"t1","user_id":"u1","created_at":"2012-04-05T10:30:00Z","text":"ciao :) http://x.y"}"#,
            "\n",
            r#"{"id":"t2","user_id":"u2","created_at":"2012-06-30T23:59:59Z","text":"governo ladro"}"#,
            "\n"
        );
        let tweets = parse_tweets(src.as_bytes()).unwrap();
        let mut buf = Vec::new();
        write_tweets(&mut buf, &tweets).unwrap();
        assert_eq!(std::str::from_utf8(&buf).unwrap(), src);
    }

    #[test]
    fn annotations_parse_and_roundtrip() {
        let src = format!(
            "{ANNOTATION_HEADER}\nt1\tc1\t1\tneg\nt1\tc2\t1\tnonneg\nt2\tc1\t0\t\n"
        );
        let anns = parse_annotations(src.as_bytes()).unwrap();
        assert_eq!(anns.len(), 3);
        assert_eq!(anns[0].sentiment, Some(SentimentLabel::Negative));
        assert_eq!(anns[2].sentiment, None);
        assert!(!anns[2].political);
        let mut buf = Vec::new();
        write_annotations(&mut buf, &anns).unwrap();
        assert_eq!(std::str::from_utf8(&buf).unwrap(), src);
    }

    #[test]
    fn annotation_duplicate_pair_is_hard_error() {
        let src = format!("{ANNOTATION_HEADER}\nt1\tc1\t1\tneg\nt1\tc1\t1\tneg\n");
        assert!(matches!(
            parse_annotations(src.as_bytes()),
            Err(Error::Duplicate { line: 3, .. })
        ));
    }

    #[test]
    fn annotation_sentiment_requires_political() {
        let src = format!("{ANNOTATION_HEADER}\nt1\tc1\t0\tneg\n");
        assert!(parse_annotations(src.as_bytes()).is_err());
    }

    #[test]
    fn news_title_keeps_tabs_and_range_is_enforced() {
        let src = format!("{NEWS_HEADER}\n2012-05-09\t1\tBersani: Pd\tpiu forte\n");
        let news = parse_news(src.as_bytes(), None).unwrap();
        assert_eq!(news[0].title, "Bersani: Pd\tpiu forte");
        let lo = NaiveDate::from_ymd_opt(2012, 1, 1).unwrap();
        let hi = NaiveDate::from_ymd_opt(2012, 4, 1).unwrap();
        assert!(parse_news(src.as_bytes(), Some((lo, hi))).is_err());
    }

    #[test]
    fn surveys_skip_missing_values() {
        let src = format!(
            "{SURVEY_HEADER}\n2012-04-11\tINEFFICACY\t14.86\n2012-05-09\tINEFFICACY\t\n2012-05-09\tNO_VOTE\t13.37\n"
        );
        let points = parse_surveys(src.as_bytes()).unwrap();
        assert_eq!(points.len(), 2);
        assert_eq!(points[0].value, 14.86);
        assert_eq!(points[1].indicator, SurveyIndicator::NoVote);
    }

    #[test]
    fn survey_duplicates_and_bad_values_rejected() {
        let dup = format!(
            "{SURVEY_HEADER}\n2012-04-11\tINEFFICACY\t14.86\n2012-04-11\tINEFFICACY\t15.00\n"
        );
        assert!(parse_surveys(dup.as_bytes()).is_err());
        let oob = format!("{SURVEY_HEADER}\n2012-04-11\tINEFFICACY\t140.0\n");
        assert!(parse_surveys(oob.as_bytes()).is_err());
    }

    #[test]
    fn wrong_header_is_line_one_error() {
        assert!(matches!(
            parse_surveys("date,indicator,value\n".as_bytes()),
            Err(Error::Malformed { line: 1, .. })
        ));
    }

    #[test]
    fn retweet_marker() {
        let mk = |text: &str| Tweet {
            id: "x".into(),
            user_id: "u".into(),
            created_at: Utc.with_ymd_and_hms(2012, 4, 5, 0, 0, 0).unwrap(),
            text: text.into(),
        };
        assert!(mk("RT @mario: ciao").is_retweet());
        assert!(mk("rt @mario ciao").is_retweet());
        assert!(!mk("riforma del lavoro").is_retweet());
        assert!(!mk("art is life").is_retweet());
    }
}
