//! Stratified k-fold cross validation with accuracy and F-measure.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{train_sweep, Algorithm, FeatureFingerprint, Label, LinearModel};
use crate::error::{Error, Result};
use crate::features::SparseVector;

/// Held-out metrics for one fold.
#[derive(Debug, Clone, Copy)]
pub struct FoldMetrics {
    pub accuracy: f64,
    pub f_measure: f64,
}

/// Cross-validation summary: per-fold metrics, their mean and sample
/// standard deviation, and total wall-clock seconds spent training and
/// classifying.
#[derive(Debug, Clone)]
pub struct EvalReport {
    pub folds: Vec<FoldMetrics>,
    pub accuracy_mean: f64,
    pub accuracy_std: f64,
    pub f_measure_mean: f64,
    pub f_measure_std: f64,
    pub seconds: f64,
}

pub(crate) fn mean_and_sample_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Deals each class round-robin into `k` folds after a seeded shuffle, so
/// per-fold class proportions sit within one example of the global ones.
/// Returns the test-index set of every fold.
pub fn stratified_folds(labels: &[Label], k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(Error::InvalidInput("fold count must be at least 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds = vec![Vec::new(); k];
    for class in [Label::Positive, Label::Negative] {
        let mut indices: Vec<usize> = labels
            .iter()
            .enumerate()
            .filter(|(_, y)| **y == class)
            .map(|(i, _)| i)
            .collect();
        if indices.len() < k {
            return Err(Error::InsufficientData(format!(
                "class {class:?} has {} examples, fewer than {k} folds",
                indices.len()
            )));
        }
        indices.shuffle(&mut rng);
        for (pos, idx) in indices.into_iter().enumerate() {
            folds[pos % k].push(idx);
        }
    }
    Ok(folds)
}

fn fold_metrics(model: &LinearModel, test: &[&(SparseVector, Label)]) -> FoldMetrics {
    let mut correct = 0usize;
    let (mut tp, mut fp, mut fn_) = (0usize, 0usize, 0usize);
    for (x, y) in test {
        let (predicted, _) = model.predict(x);
        if predicted == *y {
            correct += 1;
        }
        match (predicted, *y) {
            (Label::Positive, Label::Positive) => tp += 1,
            (Label::Positive, Label::Negative) => fp += 1,
            (Label::Negative, Label::Positive) => fn_ += 1,
            (Label::Negative, Label::Negative) => {}
        }
    }
    let accuracy = correct as f64 / test.len() as f64;
    let precision = if tp + fp > 0 {
        tp as f64 / (tp + fp) as f64
    } else {
        0.0
    };
    let recall = if tp + fn_ > 0 {
        tp as f64 / (tp + fn_) as f64
    } else {
        0.0
    };
    let f_measure = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    FoldMetrics {
        accuracy,
        f_measure,
    }
}

/// Stratified k-fold evaluation: one-sweep training on k-1 folds, testing
/// on the held-out fold. F-measure is the harmonic mean of precision and
/// recall on the positive class.
pub fn kfold_evaluate(
    dataset: &[(SparseVector, Label)],
    algorithm: Algorithm,
    k: usize,
    seed: u64,
) -> Result<EvalReport> {
    let labels: Vec<Label> = dataset.iter().map(|(_, y)| *y).collect();
    let folds = stratified_folds(&labels, k, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_f01d);
    let fold_seeds: Vec<u64> = (0..k).map(|_| rng.gen()).collect();

    let started = Instant::now();
    let mut metrics = Vec::with_capacity(k);
    for (fold, test_indices) in folds.iter().enumerate() {
        let in_test: Vec<bool> = {
            let mut mask = vec![false; dataset.len()];
            for &i in test_indices {
                mask[i] = true;
            }
            mask
        };
        let train: Vec<(SparseVector, Label)> = dataset
            .iter()
            .enumerate()
            .filter(|(i, _)| !in_test[*i])
            .map(|(_, ex)| ex.clone())
            .collect();
        let test: Vec<&(SparseVector, Label)> =
            test_indices.iter().map(|&i| &dataset[i]).collect();
        let outcome = train_sweep(
            &train,
            algorithm,
            FeatureFingerprint::unspecified(),
            fold_seeds[fold],
        )?;
        metrics.push(fold_metrics(&outcome.model, &test));
    }
    let seconds = started.elapsed().as_secs_f64();

    let (accuracy_mean, accuracy_std) =
        mean_and_sample_std(&metrics.iter().map(|m| m.accuracy).collect::<Vec<_>>());
    let (f_measure_mean, f_measure_std) =
        mean_and_sample_std(&metrics.iter().map(|m| m.f_measure).collect::<Vec<_>>());
    Ok(EvalReport {
        folds: metrics,
        accuracy_mean,
        accuracy_std,
        f_measure_mean,
        f_measure_std,
        seconds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn sv(pairs: &[(u32, f64)]) -> SparseVector {
        SparseVector::from_pairs(pairs.to_vec()).unwrap()
    }

    /// Duplicated separable points: every classifier gets them all right.
    fn duplicated_separable(n: usize) -> Vec<(SparseVector, Label)> {
        (0..n)
            .map(|i| {
                if i % 2 == 0 {
                    (sv(&[(0, 1.0), (1, 2.0)]), Label::Positive)
                } else {
                    (sv(&[(0, 1.0), (2, 2.0)]), Label::Negative)
                }
            })
            .collect()
    }

    #[test]
    fn perfect_dataset_scores_one() {
        let data = duplicated_separable(100);
        let report = kfold_evaluate(&data, Algorithm::default_pa(), 10, 11).unwrap();
        assert_eq!(report.folds.len(), 10);
        assert_eq!(report.accuracy_mean, 1.0);
        assert_eq!(report.f_measure_mean, 1.0);
        assert_eq!(report.accuracy_std, 0.0);
    }

    #[test]
    fn folds_partition_dataset() {
        let labels: Vec<Label> = (0..53)
            .map(|i| Label::from_bool(i % 3 == 0))
            .collect();
        let folds = stratified_folds(&labels, 5, 2).unwrap();
        let mut seen = HashSet::new();
        for fold in &folds {
            for &i in fold {
                assert!(seen.insert(i), "index {i} in two folds");
            }
        }
        assert_eq!(seen.len(), labels.len());
    }

    #[test]
    fn folds_are_stratified_within_one() {
        let labels: Vec<Label> = (0..100)
            .map(|i| Label::from_bool(i % 10 < 3))
            .collect();
        let k = 10;
        let folds = stratified_folds(&labels, k, 4).unwrap();
        let global_pos = labels.iter().filter(|y| **y == Label::Positive).count();
        for fold in &folds {
            let pos = fold
                .iter()
                .filter(|&&i| labels[i] == Label::Positive)
                .count();
            let expected = global_pos as f64 / k as f64;
            assert!((pos as f64 - expected).abs() <= 1.0);
        }
    }

    #[test]
    fn class_smaller_than_k_errors() {
        let mut data = duplicated_separable(30);
        data.retain(|(_, y)| *y == Label::Negative);
        data.push((sv(&[(1, 1.0)]), Label::Positive));
        assert!(kfold_evaluate(&data, Algorithm::default_pa(), 10, 0).is_err());
        assert!(kfold_evaluate(&data, Algorithm::default_pa(), 1, 0).is_err());
    }

    #[test]
    fn mean_std_match_hand_computation() {
        let (m, s) = mean_and_sample_std(&[1.0, 2.0, 3.0, 4.0]);
        assert!((m - 2.5).abs() < 1e-12);
        // Sample variance = (2.25 + 0.25 + 0.25 + 2.25) / 3.
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn deterministic_given_seed() {
        let data = crate::learners::testdata::separable_cloud(120, 5);
        let a = kfold_evaluate(&data, Algorithm::default_alma(), 6, 77).unwrap();
        let b = kfold_evaluate(&data, Algorithm::default_alma(), 6, 77).unwrap();
        assert_eq!(a.accuracy_mean, b.accuracy_mean);
        assert_eq!(a.f_measure_mean, b.f_measure_mean);
    }
}
