//! `series`, `correlate`, `peaks`, and `link-news`.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use clap::Args;

use disaffection::analysis::{
    build_daily_series, build_ratio_series, correlate, detect_peaks, link_news, DropReason,
    DroppedAnchor, IntervalSpec, TimeSeries,
};
use disaffection::chain::{read_counts, DailyCounts};
use disaffection::corpus::{parse_news, parse_surveys, SurveyIndicator, SurveyPoint};
use disaffection::features::{build_idf, tokenize_words};

use crate::commands::{load_tweets, path_entry};
use crate::config::Settings;
use crate::output::{config_hash, open_reader, read_table_lines, OutputFile};
use crate::{CliError, CliResult};

pub const PEAKS_HEADER: &str = "date\tvalue\tlocal_mean\tlocal_std";

#[derive(Args)]
pub struct SeriesArgs {
    /// Daily counts file produced by `chain`.
    #[arg(long)]
    counts: PathBuf,

    /// Survey table.
    #[arg(long)]
    surveys: Option<PathBuf>,

    /// Survey indicator: INEFFICACY or NO_VOTE.
    #[arg(long)]
    indicator: String,

    /// Aggregation window, days before each anchor, as a:b.
    #[arg(long)]
    interval: Option<String>,

    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
pub struct CorrelateArgs {
    #[arg(long)]
    counts: PathBuf,

    #[arg(long)]
    surveys: Option<PathBuf>,

    /// Survey indicator: INEFFICACY or NO_VOTE.
    #[arg(long)]
    indicator: String,

    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
pub struct PeaksArgs {
    #[arg(long)]
    counts: PathBuf,

    /// Neighborhood width in points (half before, half after).
    #[arg(long)]
    window: Option<usize>,

    /// Peak threshold in local standard deviations.
    #[arg(long)]
    k: Option<f64>,

    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
pub struct LinkNewsArgs {
    /// Peaks file produced by `peaks`.
    #[arg(long)]
    peaks: PathBuf,

    /// Newspaper titles.
    #[arg(long)]
    news: Option<PathBuf>,

    /// Political tweet sample providing the day vectors.
    #[arg(long)]
    tweets: Option<PathBuf>,

    #[arg(long)]
    out: PathBuf,
}

fn load_counts(path: &Path) -> CliResult<DailyCounts> {
    Ok(read_counts(open_reader(path)?)?)
}

/// Survey points of one indicator, by date.
fn indicator_points(
    settings: &Settings,
    surveys: &Option<PathBuf>,
    indicator: &str,
) -> CliResult<(PathBuf, SurveyIndicator, BTreeMap<NaiveDate, f64>)> {
    let path = settings.input(surveys, |p| p.surveys.as_ref(), "surveys")?;
    let indicator =
        SurveyIndicator::parse(indicator).map_err(|e| CliError::Validation(e.to_string()))?;
    let points: Vec<SurveyPoint> = parse_surveys(open_reader(&path)?)?;
    let by_date: BTreeMap<NaiveDate, f64> = points
        .into_iter()
        .filter(|p| p.indicator == indicator)
        .map(|p| (p.date, p.value))
        .collect();
    if by_date.is_empty() {
        return Err(CliError::Validation(format!(
            "survey file has no {} measurements",
            indicator.as_str()
        )));
    }
    Ok((path, indicator, by_date))
}

fn drop_reason_str(reason: DropReason) -> &'static str {
    match reason {
        DropReason::WindowBeforeCorpus => "window_before_corpus",
        DropReason::ZeroPolitical => "zero_political",
    }
}

fn write_dropped(out: &mut impl Write, dropped: &[DroppedAnchor]) -> CliResult<()> {
    for d in dropped {
        writeln!(
            out,
            "# dropped {} {}",
            d.date.format("%Y-%m-%d"),
            drop_reason_str(d.reason)
        )?;
        eprintln!(
            "warning: anchor {} dropped ({})",
            d.date.format("%Y-%m-%d"),
            drop_reason_str(d.reason)
        );
    }
    Ok(())
}

pub fn run_series(settings: &Settings, args: SeriesArgs) -> CliResult<()> {
    let (surveys_path, indicator, survey) =
        indicator_points(settings, &args.surveys, &args.indicator)?;
    let counts = load_counts(&args.counts)?;
    let interval = IntervalSpec::parse(&settings.interval_string(&args.interval))?;
    let anchors: Vec<NaiveDate> = survey.keys().copied().collect();
    let (series, dropped) = build_ratio_series(&counts, &anchors, interval)?;

    let hash = config_hash(&[
        ("command", "series".into()),
        path_entry("counts", &args.counts),
        path_entry("surveys", &surveys_path),
        ("indicator", indicator.as_str().into()),
        ("interval", interval.to_string()),
    ]);
    let mut out = OutputFile::start(&args.out, &hash, settings.seed, settings.deterministic)?;
    writeln!(out, "# indicator {}", indicator.as_str())?;
    writeln!(out, "# interval {interval}")?;
    write_dropped(&mut out, &dropped)?;
    writeln!(out, "date\tvalue")?;
    for &(date, value) in series.points() {
        writeln!(out, "{}\t{}", date.format("%Y-%m-%d"), value)?;
    }
    let path = out.finish()?;
    println!(
        "{} ratio points for {} ({} anchors dropped) -> {}",
        series.len(),
        indicator.as_str(),
        dropped.len(),
        path.display()
    );
    Ok(())
}

/// Survey values restricted to the anchors that survived in the series.
fn aligned_values(series: &TimeSeries, survey: &BTreeMap<NaiveDate, f64>) -> Vec<f64> {
    series
        .points()
        .iter()
        .map(|(date, _)| survey[date])
        .collect()
}

pub fn run_correlate(settings: &Settings, args: CorrelateArgs) -> CliResult<()> {
    let (surveys_path, indicator, survey) =
        indicator_points(settings, &args.surveys, &args.indicator)?;
    let counts = load_counts(&args.counts)?;
    let anchors: Vec<NaiveDate> = survey.keys().copied().collect();
    let level = settings.level();

    let hash = config_hash(&[
        ("command", "correlate".into()),
        path_entry("counts", &args.counts),
        path_entry("surveys", &surveys_path),
        ("indicator", indicator.as_str().into()),
        ("level", level.to_string()),
    ]);
    let mut out = OutputFile::start(&args.out, &hash, settings.seed, settings.deterministic)?;
    writeln!(out, "# indicator {}", indicator.as_str())?;
    writeln!(out, "interval\tr\tn\tci_low\tci_high\tp_value")?;

    let mut summaries = Vec::new();
    for (a, b) in [(1, 14), (1, 7), (7, 14)] {
        let interval = IntervalSpec::new(a, b).map_err(CliError::from)?;
        let (series, dropped) = build_ratio_series(&counts, &anchors, interval)?;
        write_dropped(&mut out, &dropped)?;
        let x = series.values();
        let y = aligned_values(&series, &survey);
        let result = correlate(&x, &y, level)?;
        writeln!(
            out,
            "{interval}\t{:.6}\t{}\t{:.6}\t{:.6}\t{}",
            result.r, result.n, result.ci_low, result.ci_high, result.p_value
        )?;
        summaries.push(format!("{interval}: r={:.3} n={}", result.r, result.n));
    }
    let path = out.finish()?;
    println!(
        "correlation with {}: {} -> {}",
        indicator.as_str(),
        summaries.join(", "),
        path.display()
    );
    Ok(())
}

pub fn run_peaks(settings: &Settings, args: PeaksArgs) -> CliResult<()> {
    let counts = load_counts(&args.counts)?;
    let window = settings.window(args.window);
    let k = settings.sigma_k(args.k);
    let series = build_daily_series(&counts);
    let peaks = detect_peaks(&series, window, k);

    let hash = config_hash(&[
        ("command", "peaks".into()),
        path_entry("counts", &args.counts),
        ("window", window.to_string()),
        ("k", k.to_string()),
    ]);
    let mut out = OutputFile::start(&args.out, &hash, settings.seed, settings.deterministic)?;
    writeln!(out, "# window {window} k {k}")?;
    writeln!(out, "{PEAKS_HEADER}")?;
    for peak in &peaks {
        writeln!(
            out,
            "{}\t{}\t{}\t{}",
            peak.date.format("%Y-%m-%d"),
            peak.value,
            peak.local_mean,
            peak.local_std
        )?;
    }
    let path = out.finish()?;
    println!(
        "{} peaks in a {}-day series -> {}",
        peaks.len(),
        series.len(),
        path.display()
    );
    Ok(())
}

fn read_peak_dates(path: &Path) -> CliResult<Vec<NaiveDate>> {
    let mut dates = Vec::new();
    for (i, row) in read_table_lines(path, PEAKS_HEADER)?.into_iter().enumerate() {
        let date = row.split('\t').next().unwrap_or("");
        let date = NaiveDate::parse_from_str(date, "%Y-%m-%d").map_err(|e| {
            CliError::Validation(format!(
                "{}: row {}: bad peak date {date:?}: {e}",
                path.display(),
                i + 1
            ))
        })?;
        dates.push(date);
    }
    Ok(dates)
}

pub fn run_link_news(settings: &Settings, args: LinkNewsArgs) -> CliResult<()> {
    let news_path = settings.input(&args.news, |p| p.news.as_ref(), "news")?;
    let tweets_path = settings.input(&args.tweets, |p| p.tweets.as_ref(), "tweets")?;
    let peak_dates = read_peak_dates(&args.peaks)?;
    if peak_dates.is_empty() {
        return Err(CliError::Validation(format!(
            "{}: no peaks to link",
            args.peaks.display()
        )));
    }
    let news = parse_news(open_reader(&news_path)?, None)?;
    let tweets = load_tweets(&tweets_path)?;

    // The idf map spans the union corpus: every news title and every tweet
    // of the sample is one document.
    let documents: Vec<Vec<String>> = news
        .iter()
        .map(|n| tokenize_words(&n.title))
        .chain(tweets.iter().map(|t| tokenize_words(&t.text)))
        .collect();
    let idf = build_idf(&documents)?;

    let hash = config_hash(&[
        ("command", "link-news".into()),
        path_entry("peaks", &args.peaks),
        path_entry("news", &news_path),
        path_entry("tweets", &tweets_path),
    ]);
    let mut out = OutputFile::start(&args.out, &hash, settings.seed, settings.deterministic)?;
    writeln!(out, "peak_date\tnews_date\ttitle\tscore")?;
    let mut linked_count = 0usize;
    for date in &peak_dates {
        match link_news(*date, &news, &tweets, &idf) {
            Ok(linked) => {
                writeln!(
                    out,
                    "{}\t{}\t{}\t{}",
                    date.format("%Y-%m-%d"),
                    linked.news.date.format("%Y-%m-%d"),
                    linked.news.title,
                    linked.score
                )?;
                linked_count += 1;
            }
            Err(e) => {
                // A peak without a matching headline is a finding, not a
                // failure; record it and move on.
                writeln!(out, "# no-link {} {e}", date.format("%Y-%m-%d"))?;
                eprintln!("warning: {}: {e}", date.format("%Y-%m-%d"));
            }
        }
    }
    if linked_count == 0 {
        return Err(CliError::Validation(
            "no peak could be linked to any news item".into(),
        ));
    }
    let path = out.finish()?;
    println!(
        "linked {linked_count} of {} peaks -> {}",
        peak_dates.len(),
        path.display()
    );
    Ok(())
}
