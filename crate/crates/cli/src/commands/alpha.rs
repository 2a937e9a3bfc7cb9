//! `alpha`: inter-coder reliability of an annotation file.

use std::io::Write;
use std::path::PathBuf;

use clap::Args;

use disaffection::corpus::{krippendorff_alpha, parse_annotations, AlphaVariable};

use crate::commands::path_entry;
use crate::config::Settings;
use crate::output::{config_hash, open_reader, OutputFile};
use crate::{CliError, CliResult};

#[derive(Args)]
pub struct AlphaArgs {
    /// Annotation table (tweet_id, coder_id, political, sentiment).
    #[arg(long)]
    annotations: Option<PathBuf>,

    /// Variable to measure agreement on: political or sentiment.
    #[arg(long)]
    variable: String,

    /// Output file.
    #[arg(long)]
    out: PathBuf,
}

pub fn run(settings: &Settings, args: AlphaArgs) -> CliResult<()> {
    let annotations_path =
        settings.input(&args.annotations, |p| p.annotations.as_ref(), "annotations")?;
    let variable = AlphaVariable::parse(&args.variable)
        .map_err(|e| CliError::Validation(e.to_string()))?;

    let annotations = parse_annotations(open_reader(&annotations_path)?)?;
    let alpha = krippendorff_alpha(&annotations, variable)?;

    let hash = config_hash(&[
        ("command", "alpha".into()),
        path_entry("annotations", &annotations_path),
        ("variable", variable.as_str().into()),
    ]);
    let mut out = OutputFile::start(&args.out, &hash, settings.seed, settings.deterministic)?;
    writeln!(out, "variable\talpha\tannotations")?;
    writeln!(out, "{}\t{alpha}\t{}", variable.as_str(), annotations.len())?;
    let path = out.finish()?;

    println!(
        "alpha({}) = {alpha:.4} over {} annotations -> {}",
        variable.as_str(),
        annotations.len(),
        path.display()
    );
    Ok(())
}
