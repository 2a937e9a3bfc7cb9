//! Ratio time-series, correlation against survey indicators, peak
//! detection, and peak-to-headline linking.

mod link;
mod peaks;
mod stats;

pub use link::{link_news, LinkedNews};
pub use peaks::{detect_peaks, Peak};
pub use stats::{
    correlate, ln_gamma, normal_quantile, pearson, pearson_ci, pearson_pvalue,
    regularized_incomplete_beta, students_t_two_sided, CorrelationResult,
};

use chrono::{Days, NaiveDate};

use crate::chain::DailyCounts;
use crate::error::{Error, Result};

/// What a series measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    /// One point per survey anchor date.
    SurveyAligned,
    /// One point per corpus day.
    Daily,
}

/// An ordered series of dated values: dates strictly increasing, values
/// finite.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    kind: SeriesKind,
    points: Vec<(NaiveDate, f64)>,
}

impl TimeSeries {
    pub fn new(kind: SeriesKind, points: Vec<(NaiveDate, f64)>) -> Result<Self> {
        for w in points.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::InvalidInput(format!(
                    "series dates must strictly increase: {} then {}",
                    w[0].0, w[1].0
                )));
            }
        }
        if let Some(&(d, v)) = points.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite value {v} at {d}")));
        }
        Ok(TimeSeries { kind, points })
    }

    pub fn kind(&self) -> SeriesKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[(NaiveDate, f64)] {
        &self.points
    }

    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|&(_, v)| v).collect()
    }

    pub fn dates(&self) -> Vec<NaiveDate> {
        self.points.iter().map(|&(d, _)| d).collect()
    }
}

/// The aggregation window `[t - b, t - a]`, in days before an anchor date
/// `t`, both ends included.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntervalSpec {
    a: u32,
    b: u32,
}

impl IntervalSpec {
    pub fn new(a: u32, b: u32) -> Result<Self> {
        if a < 1 {
            return Err(Error::InvalidInput("interval start must be >= 1 day".into()));
        }
        if b <= a {
            return Err(Error::InvalidInput(format!(
                "interval end {b} must exceed start {a}"
            )));
        }
        Ok(IntervalSpec { a, b })
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    /// Parses the `a:b` flag syntax.
    pub fn parse(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidInput(format!("interval {s:?} is not a:b")))?;
        let a: u32 = a
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad interval start {a:?}")))?;
        let b: u32 = b
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad interval end {b:?}")))?;
        IntervalSpec::new(a, b)
    }

    /// Window bounds for an anchor date.
    pub fn window(&self, anchor: NaiveDate) -> (NaiveDate, NaiveDate) {
        (
            anchor - Days::new(self.b as u64),
            anchor - Days::new(self.a as u64),
        )
    }
}

impl std::fmt::Display for IntervalSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.a, self.b)
    }
}

/// Why an anchor produced no ratio point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DropReason {
    /// The window starts before the first corpus date.
    WindowBeforeCorpus,
    /// No political tweets fell in the window.
    ZeroPolitical,
}

/// An anchor date [`build_ratio_series`] had to drop, and why.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DroppedAnchor {
    pub date: NaiveDate,
    pub reason: DropReason,
}

/// Survey-aligned ratio series: for each anchor `t`, the ratio of relevant
/// to political tweet counts summed over `[t - b, t - a]`.
///
/// Anchors whose window reaches before the first corpus date, or whose
/// political sum is zero, are dropped and reported. It is an error if no
/// anchor survives.
pub fn build_ratio_series(
    counts: &DailyCounts,
    anchor_dates: &[NaiveDate],
    interval: IntervalSpec,
) -> Result<(TimeSeries, Vec<DroppedAnchor>)> {
    if anchor_dates.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput(
            "anchor dates must be sorted and distinct".into(),
        ));
    }
    let first_corpus_date = counts
        .first_date()
        .ok_or_else(|| Error::InsufficientData("daily counts are empty".into()))?;

    let mut points = Vec::new();
    let mut dropped = Vec::new();
    for &anchor in anchor_dates {
        let (start, end) = interval.window(anchor);
        if start < first_corpus_date {
            dropped.push(DroppedAnchor {
                date: anchor,
                reason: DropReason::WindowBeforeCorpus,
            });
            continue;
        }
        let mut relevant = 0u64;
        let mut political = 0u64;
        let mut day = start;
        while day <= end {
            let c = counts.get(day);
            relevant += c.relevant;
            political += c.political;
            day = day + Days::new(1);
        }
        if political == 0 {
            dropped.push(DroppedAnchor {
                date: anchor,
                reason: DropReason::ZeroPolitical,
            });
            continue;
        }
        points.push((anchor, relevant as f64 / political as f64));
    }
    if points.is_empty() {
        return Err(Error::InsufficientData(
            "every anchor was dropped; no ratio point could be computed".into(),
        ));
    }
    Ok((TimeSeries::new(SeriesKind::SurveyAligned, points)?, dropped))
}

/// Daily ratio series: one point per date with a nonzero political count.
pub fn build_daily_series(counts: &DailyCounts) -> TimeSeries {
    let points = counts
        .iter()
        .filter(|(_, c)| c.political > 0)
        .map(|(d, c)| (d, c.relevant as f64 / c.political as f64))
        .collect();
    TimeSeries::new(SeriesKind::Daily, points).expect("counts iterate in date order")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::DayCounts;

    fn date(y: i32, m: u32, d: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(y, m, d).unwrap()
    }

    fn counts(days: &[(NaiveDate, u64, u64, u64)]) -> DailyCounts {
        let mut c = DailyCounts::new();
        for &(d, political, relevant, total) in days {
            c.insert_day(
                d,
                DayCounts {
                    political,
                    relevant,
                    total,
                },
            )
            .unwrap();
        }
        c
    }

    #[test]
    fn ratio_is_sum_over_window() {
        // Anchor 2012-04-20, interval 1:14 -> window [04-06, 04-19].
        let c = counts(&[
            (date(2012, 4, 5), 100, 90, 100), // outside the window
            (date(2012, 4, 6), 6, 1, 10),
            (date(2012, 4, 12), 2, 1, 5),
            (date(2012, 4, 19), 2, 0, 4),
            (date(2012, 4, 20), 50, 50, 50), // the anchor day itself is excluded
        ]);
        let interval = IntervalSpec::new(1, 14).unwrap();
        let (series, dropped) =
            build_ratio_series(&c, &[date(2012, 4, 20)], interval).unwrap();
        assert!(dropped.is_empty());
        assert_eq!(series.len(), 1);
        assert!((series.points()[0].1 - 2.0 / 10.0).abs() < 1e-15);
    }

    #[test]
    fn anchor_before_corpus_dropped() {
        let c = counts(&[(date(2012, 4, 4), 10, 2, 20), (date(2012, 4, 18), 10, 2, 20)]);
        let interval = IntervalSpec::new(1, 14).unwrap();
        // Window of the first anchor reaches 2012-03-28: before the corpus.
        let (series, dropped) = build_ratio_series(
            &c,
            &[date(2012, 4, 11), date(2012, 4, 19)],
            interval,
        )
        .unwrap();
        assert_eq!(series.len(), 1);
        assert_eq!(
            dropped,
            vec![DroppedAnchor {
                date: date(2012, 4, 11),
                reason: DropReason::WindowBeforeCorpus
            }]
        );
    }

    #[test]
    fn zero_political_window_dropped_with_warning() {
        let c = counts(&[
            (date(2012, 4, 1), 10, 2, 20),
            (date(2012, 5, 1), 0, 0, 7),
            (date(2012, 5, 2), 10, 5, 20),
        ]);
        let interval = IntervalSpec::new(1, 7).unwrap();
        let (series, dropped) = build_ratio_series(
            &c,
            &[date(2012, 4, 9), date(2012, 5, 8)],
            interval,
        )
        .unwrap();
        assert_eq!(series.len(), 1);
        assert_eq!(dropped.len(), 1);
        assert_eq!(dropped[0].reason, DropReason::ZeroPolitical);
        assert_eq!(series.points()[0], (date(2012, 5, 8), 0.5));
    }

    #[test]
    fn all_anchors_dropped_is_error() {
        let c = counts(&[(date(2012, 4, 10), 10, 2, 20)]);
        let interval = IntervalSpec::new(1, 14).unwrap();
        assert!(build_ratio_series(&c, &[date(2012, 4, 11)], interval).is_err());
    }

    #[test]
    fn ratio_values_stay_in_unit_interval() {
        let c = counts(&[
            (date(2012, 4, 1), 5, 5, 9),
            (date(2012, 4, 2), 7, 0, 7),
            (date(2012, 4, 3), 3, 1, 3),
        ]);
        let interval = IntervalSpec::new(1, 2).unwrap();
        let (series, _) = build_ratio_series(
            &c,
            &[date(2012, 4, 3), date(2012, 4, 4), date(2012, 4, 5)],
            interval,
        )
        .unwrap();
        for &(_, v) in series.points() {
            assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn daily_series_skips_zero_political_days() {
        let c = counts(&[
            (date(2012, 4, 1), 4, 1, 10),
            (date(2012, 4, 2), 0, 0, 3),
            (date(2012, 4, 3), 8, 2, 9),
        ]);
        let series = build_daily_series(&c);
        assert_eq!(series.len(), 2);
        assert_eq!(series.points()[0], (date(2012, 4, 1), 0.25));
        assert_eq!(series.points()[1], (date(2012, 4, 3), 0.25));
        assert!(build_daily_series(&DailyCounts::new()).is_empty());
    }

    #[test]
    fn interval_parsing_and_bounds() {
        let i = IntervalSpec::parse("1:14").unwrap();
        assert_eq!((i.a(), i.b()), (1, 14));
        assert_eq!(i.to_string(), "1:14");
        assert!(IntervalSpec::parse("0:7").is_err());
        assert!(IntervalSpec::parse("7:7").is_err());
        assert!(IntervalSpec::parse("14:1").is_err());
        assert!(IntervalSpec::parse("x").is_err());
        let (start, end) = i.window(date(2012, 4, 20));
        assert_eq!(start, date(2012, 4, 6));
        assert_eq!(end, date(2012, 4, 19));
    }

    #[test]
    fn series_invariants_enforced() {
        assert!(TimeSeries::new(
            SeriesKind::Daily,
            vec![(date(2012, 4, 2), 1.0), (date(2012, 4, 1), 2.0)]
        )
        .is_err());
        assert!(TimeSeries::new(
            SeriesKind::Daily,
            vec![(date(2012, 4, 1), f64::NAN)]
        )
        .is_err());
    }

    #[test]
    fn unsorted_anchors_rejected() {
        let c = counts(&[(date(2012, 4, 1), 5, 1, 5)]);
        let interval = IntervalSpec::new(1, 7).unwrap();
        assert!(build_ratio_series(
            &c,
            &[date(2012, 4, 20), date(2012, 4, 10)],
            interval
        )
        .is_err());
    }
}
