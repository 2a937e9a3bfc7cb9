//! Single-sweep training with a seeded shuffle.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Algorithm, FeatureFingerprint, Label, LinearModel, StepOutcome};
use crate::error::{Error, Result};
use crate::features::SparseVector;

/// A trained model plus what the sweep had to leave out.
#[derive(Debug)]
pub struct SweepOutcome {
    pub model: LinearModel,
    pub skipped_zero_vectors: usize,
}

/// Trains a fresh model with exactly one pass over the examples in
/// seeded-shuffle order. Deterministic given the seed.
///
/// Errors when the input is empty or only one class is present; zero
/// vectors are skipped and counted.
pub fn train_sweep(
    examples: &[(SparseVector, Label)],
    algorithm: Algorithm,
    fingerprint: FeatureFingerprint,
    seed: u64,
) -> Result<SweepOutcome> {
    if examples.is_empty() {
        return Err(Error::InsufficientData("no training examples".into()));
    }
    let positives = examples.iter().filter(|(_, y)| *y == Label::Positive).count();
    if positives == 0 || positives == examples.len() {
        return Err(Error::InsufficientData(
            "training data contains a single class".into(),
        ));
    }

    let mut order: Vec<usize> = (0..examples.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);

    let mut model = LinearModel::new(algorithm, fingerprint);
    let mut skipped = 0;
    for idx in order {
        let (x, y) = &examples[idx];
        if model.step(x, *y) == StepOutcome::SkippedZeroVector {
            skipped += 1;
        }
    }
    Ok(SweepOutcome {
        model,
        skipped_zero_vectors: skipped,
    })
}
