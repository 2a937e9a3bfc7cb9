//! Political-disaffection analytics over short-text streams.
//!
//! The pipeline, end to end:
//!
//! 1. [`corpus`] parses tweets, coder annotations, newspaper titles, and
//!    survey points, merges annotations into training labels, and measures
//!    inter-coder reliability (Krippendorff's alpha).
//! 2. [`features`] turns text into sparse vectors: character 5-grams with
//!    boolean counting for the topic stage, normalized words (target
//!    removal, Italian stemming, synonym collapsing) with term frequency
//!    for the sentiment stage.
//! 3. [`learners`] trains one-sweep online linear classifiers (PA-I, ALMA,
//!    Pegasos) and cross-validates them.
//! 4. [`chain`] runs the three-stage relevance filter — political, negative
//!    sentiment, generic speech — and aggregates per-day counts.
//! 5. [`analysis`] builds survey-aligned and daily ratio series, computes
//!    Pearson correlations with Fisher confidence intervals and Student-t
//!    p-values, detects local mean-plus-2-sigma peaks, and links each peak
//!    to the headline its tweets discussed.

pub mod analysis;
pub mod chain;
pub mod corpus;
mod error;
pub mod features;
pub mod learners;

pub use error::{Error, Result};
