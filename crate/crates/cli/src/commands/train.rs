//! `train` and `eval`: stage-classifier training and 10-fold evaluation.

use std::io::Write;
use std::path::PathBuf;

use clap::Args;

use disaffection::chain::{political_stage_data, sentiment_stage_data, StageData};
use disaffection::corpus::{aggregate_labels, parse_annotations, parse_news, LabeledTweet};
use disaffection::learners::{kfold_evaluate, train_sweep};

use crate::commands::{load_normalization, load_tweets, path_entry};
use crate::config::{describe_algorithm, Settings};
use crate::output::{config_hash, open_reader, OutputFile};
use crate::{CliError, CliResult};

#[derive(Args)]
pub struct DatasetArgs {
    /// Classification task: political or sentiment.
    #[arg(long)]
    task: String,

    /// Tweet corpus (JSON lines).
    #[arg(long)]
    tweets: Option<PathBuf>,

    /// Annotation table.
    #[arg(long)]
    annotations: Option<PathBuf>,

    /// Newspaper titles; included as extra political-task examples.
    #[arg(long)]
    news: Option<PathBuf>,

    /// Synonym file (variant<TAB>canonical), sentiment task.
    #[arg(long)]
    synonyms: Option<PathBuf>,

    /// Sentiment-target entity list, sentiment task.
    #[arg(long)]
    entities: Option<PathBuf>,

    /// Learner: pa, alma, or pegasos.
    #[arg(long)]
    algorithm: Option<String>,
}

#[derive(Args)]
pub struct TrainArgs {
    #[command(flatten)]
    dataset: DatasetArgs,

    /// Where to write the trained model.
    #[arg(long)]
    model_out: PathBuf,

    /// Where to write the vocabulary the model indexes into.
    #[arg(long)]
    vocab_out: PathBuf,
}

#[derive(Args)]
pub struct EvalArgs {
    #[command(flatten)]
    dataset: DatasetArgs,

    /// Number of folds.
    #[arg(long)]
    folds: Option<usize>,

    /// Report file.
    #[arg(long)]
    out: PathBuf,
}

struct Assembled {
    stage: StageData,
    task: String,
    hash_entries: Vec<(&'static str, String)>,
}

fn assemble(settings: &Settings, args: &DatasetArgs) -> CliResult<Assembled> {
    if args.task != "political" && args.task != "sentiment" {
        return Err(CliError::Validation(format!(
            "unknown task {:?} (expected political or sentiment)",
            args.task
        )));
    }
    let tweets_path = settings.input(&args.tweets, |p| p.tweets.as_ref(), "tweets")?;
    let annotations_path =
        settings.input(&args.annotations, |p| p.annotations.as_ref(), "annotations")?;

    let tweets = load_tweets(&tweets_path)?;
    let annotations = parse_annotations(open_reader(&annotations_path)?)?;
    let (labeled, report) = aggregate_labels(&annotations, &tweets, settings.min_annotations())?;
    report_aggregation(&labeled, &report);

    let mut hash_entries = vec![
        ("task", args.task.clone()),
        path_entry("tweets", &tweets_path),
        path_entry("annotations", &annotations_path),
        ("min_annotations", settings.min_annotations().to_string()),
        ("seed", settings.seed.to_string()),
    ];

    let stage = if args.task == "political" {
        let news = match settings.optional_input(&args.news, |p| p.news.as_ref())? {
            Some(path) => {
                hash_entries.push(path_entry("news", &path));
                parse_news(open_reader(&path)?, None)?
            }
            None => Vec::new(),
        };
        political_stage_data(&labeled, &news)?
    } else {
        let norm = load_normalization(settings, &args.synonyms, &args.entities)?;
        hash_entries.push(("stemming", settings.stemming().to_string()));
        sentiment_stage_data(&labeled, &norm)?
    };
    Ok(Assembled {
        stage,
        task: args.task.clone(),
        hash_entries,
    })
}

fn report_aggregation(labeled: &[LabeledTweet], report: &disaffection::corpus::AggregateReport) {
    eprintln!(
        "labels: {} kept, {} below annotation minimum, {} without consensus, \
         {} sentiment ties, {} short on sentiment votes, {} unknown ids",
        labeled.len(),
        report.skipped_few_annotations.len(),
        report.discarded_no_consensus.len(),
        report.sentiment_ties.len(),
        report.insufficient_sentiment_votes.len(),
        report.unknown_tweet_ids.len()
    );
}

pub fn run_train(settings: &Settings, args: TrainArgs) -> CliResult<()> {
    let algorithm = settings.algorithm(&args.dataset.algorithm, &args.dataset.task)?;
    let assembled = assemble(settings, &args.dataset)?;
    let outcome = train_sweep(
        &assembled.stage.examples,
        algorithm,
        assembled.stage.fingerprint.clone(),
        settings.seed,
    )?;
    if outcome.skipped_zero_vectors > 0 {
        eprintln!(
            "skipped {} zero-vector examples during the sweep",
            outcome.skipped_zero_vectors
        );
    }

    let mut entries = assembled.hash_entries;
    entries.push(("algorithm", describe_algorithm(algorithm)));
    let hash = config_hash(&entries);

    let mut model_out = OutputFile::start(
        &args.model_out,
        &hash,
        settings.seed,
        settings.deterministic,
    )?;
    outcome.model.save(&mut model_out)?;
    let model_path = model_out.finish()?;

    let mut vocab_out = OutputFile::start(
        &args.vocab_out,
        &hash,
        settings.seed,
        settings.deterministic,
    )?;
    assembled.stage.vocabulary.save(&mut vocab_out)?;
    let vocab_path = vocab_out.finish()?;

    println!(
        "trained {} {} on {} examples ({} updates, vocabulary {}) -> {} / {}",
        describe_algorithm(algorithm),
        assembled.task,
        assembled.stage.examples.len(),
        outcome.model.update_count(),
        assembled.stage.vocabulary.len(),
        model_path.display(),
        vocab_path.display()
    );
    Ok(())
}

pub fn run_eval(settings: &Settings, args: EvalArgs) -> CliResult<()> {
    let algorithm = settings.algorithm(&args.dataset.algorithm, &args.dataset.task)?;
    let folds = settings.folds(args.folds);
    let assembled = assemble(settings, &args.dataset)?;
    let report = kfold_evaluate(&assembled.stage.examples, algorithm, folds, settings.seed)?;

    let mut entries = assembled.hash_entries;
    entries.push(("algorithm", describe_algorithm(algorithm)));
    entries.push(("folds", folds.to_string()));
    let hash = config_hash(&entries);

    let name = algorithm.name();
    let mut out = OutputFile::start(&args.out, &hash, settings.seed, settings.deterministic)?;
    writeln!(out, "classifier\tfold\taccuracy\tf_measure\tseconds")?;
    for (i, fold) in report.folds.iter().enumerate() {
        writeln!(
            out,
            "{name}\t{}\t{}\t{}\t",
            i + 1,
            fold.accuracy,
            fold.f_measure
        )?;
    }
    writeln!(
        out,
        "{name}\tmean\t{}\t{}\t{}",
        report.accuracy_mean, report.f_measure_mean, report.seconds
    )?;
    writeln!(
        out,
        "{name}\tstd\t{}\t{}\t",
        report.accuracy_std, report.f_measure_std
    )?;
    let path = out.finish()?;

    println!(
        "{name} {}-fold on {}: accuracy {:.3} +/- {:.3}, F {:.3} +/- {:.3}, {:.2}s -> {}",
        folds,
        assembled.task,
        report.accuracy_mean,
        report.accuracy_std,
        report.f_measure_mean,
        report.f_measure_std,
        report.seconds,
        path.display()
    );
    Ok(())
}
