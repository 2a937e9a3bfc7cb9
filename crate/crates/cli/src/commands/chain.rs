//! `chain`: run the three-stage relevance filter over a corpus.

use std::path::PathBuf;

use clap::Args;

use disaffection::chain::{
    load_keywords, run_chain, write_counts, write_verdicts, ChainConfig, StageModel,
};
use disaffection::features::Vocabulary;
use disaffection::learners::LinearModel;

use crate::commands::{load_normalization, load_tweets, path_entry};
use crate::config::Settings;
use crate::output::{config_hash, open_reader, OutputFile};
use crate::{CliError, CliResult};

#[derive(Args)]
pub struct ChainArgs {
    /// Tweet corpus (JSON lines).
    #[arg(long)]
    tweets: Option<PathBuf>,

    #[arg(long)]
    political_model: Option<PathBuf>,

    #[arg(long)]
    political_vocab: Option<PathBuf>,

    #[arg(long)]
    sentiment_model: Option<PathBuf>,

    #[arg(long)]
    sentiment_vocab: Option<PathBuf>,

    /// Generic-speech keyword list, one term per line.
    #[arg(long)]
    keywords: Option<PathBuf>,

    #[arg(long)]
    synonyms: Option<PathBuf>,

    #[arg(long)]
    entities: Option<PathBuf>,

    /// Classify retweets too instead of dropping them.
    #[arg(long)]
    keep_retweets: bool,

    /// Per-tweet verdict file.
    #[arg(long)]
    verdicts_out: PathBuf,

    /// Per-day counts file.
    #[arg(long)]
    counts_out: PathBuf,
}

fn load_stage(model_path: &PathBuf, vocab_path: &PathBuf) -> CliResult<StageModel> {
    let model = LinearModel::load(open_reader(model_path)?)?;
    let vocabulary = Vocabulary::load(open_reader(vocab_path)?)?;
    Ok(StageModel { model, vocabulary })
}

pub fn run(settings: &Settings, args: ChainArgs) -> CliResult<()> {
    let tweets_path = settings.input(&args.tweets, |p| p.tweets.as_ref(), "tweets")?;
    let political_model =
        settings.input(&args.political_model, |p| p.political_model.as_ref(), "political-model")?;
    let political_vocab =
        settings.input(&args.political_vocab, |p| p.political_vocab.as_ref(), "political-vocab")?;
    let sentiment_model =
        settings.input(&args.sentiment_model, |p| p.sentiment_model.as_ref(), "sentiment-model")?;
    let sentiment_vocab =
        settings.input(&args.sentiment_vocab, |p| p.sentiment_vocab.as_ref(), "sentiment-vocab")?;
    let keywords_path = settings.input(&args.keywords, |p| p.keywords.as_ref(), "keywords")?;

    let tweets = load_tweets(&tweets_path)?;
    let political = load_stage(&political_model, &political_vocab)?;
    let sentiment = load_stage(&sentiment_model, &sentiment_vocab)?;
    let keywords = load_keywords(open_reader(&keywords_path)?)?;
    let normalization = load_normalization(settings, &args.synonyms, &args.entities)?;
    let skip_retweets = !args.keep_retweets && settings.skip_retweets();

    let config = ChainConfig::new(political, sentiment, keywords, normalization, skip_retweets)?;
    let (verdicts, counts) = run_chain(&tweets, &config);

    // Nesting must hold by construction; a breach here is a bug.
    for (date, day) in counts.iter() {
        if day.relevant > day.political || day.political > day.total {
            return Err(CliError::Invariant(format!(
                "day {date}: counts {} relevant / {} political / {} total are not nested",
                day.relevant, day.political, day.total
            )));
        }
    }

    let hash = config_hash(&[
        ("command", "chain".into()),
        path_entry("tweets", &tweets_path),
        path_entry("political_model", &political_model),
        path_entry("sentiment_model", &sentiment_model),
        path_entry("keywords", &keywords_path),
        ("skip_retweets", skip_retweets.to_string()),
    ]);

    let mut verdicts_out = OutputFile::start(
        &args.verdicts_out,
        &hash,
        settings.seed,
        settings.deterministic,
    )?;
    write_verdicts(&mut verdicts_out, &verdicts)?;
    let verdicts_path = verdicts_out.finish()?;

    let mut counts_out = OutputFile::start(
        &args.counts_out,
        &hash,
        settings.seed,
        settings.deterministic,
    )?;
    write_counts(&mut counts_out, &counts)?;
    let counts_path = counts_out.finish()?;

    let political: u64 = counts.iter().map(|(_, d)| d.political).sum();
    let relevant: u64 = counts.iter().map(|(_, d)| d.relevant).sum();
    println!(
        "classified {} tweets over {} days: {} political, {} relevant -> {} / {}",
        verdicts.len(),
        counts.len(),
        political,
        relevant,
        verdicts_path.display(),
        counts_path.display()
    );
    Ok(())
}
