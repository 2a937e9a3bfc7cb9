//! One-sweep online linear classifiers: PA-I, ALMA with p = 2, and
//! Pegasos, over sparse vectors.
//!
//! Vectors here live in *model space*: feature index 0 is reserved for the
//! always-on bias feature, vocabulary index `j` maps to model index `j + 1`
//! (see [`with_bias`]). The step functions work on exactly the vector they
//! are given and never augment.

mod eval;
mod persist;
mod sweep;

pub use eval::{kfold_evaluate, stratified_folds, EvalReport, FoldMetrics};
pub use sweep::{train_sweep, SweepOutcome};


use crate::features::SparseVector;

/// Binary class label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label {
    Positive,
    Negative,
}

impl Label {
    pub fn sign(self) -> f64 {
        match self {
            Label::Positive => 1.0,
            Label::Negative => -1.0,
        }
    }

    pub fn from_bool(positive: bool) -> Self {
        if positive {
            Label::Positive
        } else {
            Label::Negative
        }
    }
}

/// What a single online step did.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOutcome {
    /// The weight vector changed.
    Updated,
    /// Loss was zero (or the margin condition held); nothing changed.
    Unchanged,
    /// The example had a zero vector and was skipped.
    SkippedZeroVector,
}

/// Learning rule and hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Algorithm {
    /// Passive-aggressive, PA-I variant with aggressiveness cap `c`.
    Pa { c: f64 },
    /// Approximate large-margin algorithm, p = 2, accuracy parameter
    /// `alpha` in (0, 1].
    Alma { alpha: f64 },
    /// Pegasos single-example subgradient steps with regularization
    /// `lambda`; `project` keeps the weights inside the 1/sqrt(lambda) ball.
    Pegasos { lambda: f64, project: bool },
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Pa { .. } => "pa",
            Algorithm::Alma { .. } => "alma",
            Algorithm::Pegasos { .. } => "pegasos",
        }
    }

    /// Paper-motivated defaults: PA-I with C = 1, ALMA with alpha = 0.9,
    /// Pegasos with lambda = 1e-4 and projection on.
    pub fn default_pa() -> Self {
        Algorithm::Pa { c: 1.0 }
    }

    pub fn default_alma() -> Self {
        Algorithm::Alma { alpha: 0.9 }
    }

    pub fn default_pegasos() -> Self {
        Algorithm::Pegasos {
            lambda: 1e-4,
            project: true,
        }
    }
}

/// Identifies the feature configuration a model was trained under, so the
/// classification chain can refuse mismatched model/vocabulary pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureFingerprint {
    pub task: String,
    pub tokenizer: String,
    pub scheme: String,
    pub vocab_hash: String,
}

impl FeatureFingerprint {
    pub fn new(
        task: impl Into<String>,
        tokenizer: impl Into<String>,
        scheme: impl Into<String>,
        vocab_hash: impl Into<String>,
    ) -> Self {
        FeatureFingerprint {
            task: task.into(),
            tokenizer: tokenizer.into(),
            scheme: scheme.into(),
            vocab_hash: vocab_hash.into(),
        }
    }

    /// Placeholder for models trained on ad-hoc vector data.
    pub fn unspecified() -> Self {
        FeatureFingerprint::new("unspecified", "none", "none", "-")
    }
}

impl std::fmt::Display for FeatureFingerprint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}|{}|{}|{}",
            self.task, self.tokenizer, self.scheme, self.vocab_hash
        )
    }
}

/// Dense weight vector with lazy scaling and an incrementally tracked
/// squared norm, so shrink/project steps cost O(1) instead of O(dim).
#[derive(Debug, Clone)]
struct WeightVector {
    raw: Vec<f64>,
    scale: f64,
    squared_norm: f64,
}

impl WeightVector {
    fn new() -> Self {
        WeightVector {
            raw: Vec::new(),
            scale: 1.0,
            squared_norm: 0.0,
        }
    }

    fn get(&self, index: u32) -> f64 {
        self.raw
            .get(index as usize)
            .map(|&w| w * self.scale)
            .unwrap_or(0.0)
    }

    fn dot(&self, x: &SparseVector) -> f64 {
        let mut sum = 0.0;
        for (i, v) in x.iter() {
            if let Some(&w) = self.raw.get(i as usize) {
                sum += w * v;
            }
        }
        sum * self.scale
    }

    /// w += factor * x
    fn add_scaled(&mut self, x: &SparseVector, factor: f64) {
        if factor == 0.0 {
            return;
        }
        let wx = self.dot(x);
        if let Some(max) = x.max_index() {
            if self.raw.len() <= max as usize {
                self.raw.resize(max as usize + 1, 0.0);
            }
        }
        for (i, v) in x.iter() {
            self.raw[i as usize] += factor * v / self.scale;
        }
        self.squared_norm += 2.0 * factor * wx + factor * factor * x.squared_norm();
        self.squared_norm = self.squared_norm.max(0.0);
    }

    /// w *= factor
    fn scale_by(&mut self, factor: f64) {
        if factor == 0.0 {
            self.raw.iter_mut().for_each(|w| *w = 0.0);
            self.scale = 1.0;
            self.squared_norm = 0.0;
            return;
        }
        self.scale *= factor;
        self.squared_norm *= factor * factor;
        if self.scale.abs() < 1e-150 {
            self.fold_scale();
        }
    }

    /// Projects onto the ball of the given radius (no-op when inside).
    fn project_to_ball(&mut self, radius: f64) {
        let norm = self.norm();
        if norm > radius {
            self.scale_by(radius / norm);
            // Exact by definition of the projection.
            self.squared_norm = radius * radius;
        }
    }

    fn fold_scale(&mut self) {
        for w in &mut self.raw {
            *w *= self.scale;
        }
        self.scale = 1.0;
    }

    fn norm(&self) -> f64 {
        self.squared_norm.max(0.0).sqrt()
    }

    fn nonzero_entries(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.raw
            .iter()
            .enumerate()
            .filter(|&(_, &w)| w != 0.0)
            .map(|(i, &w)| (i as u32, w * self.scale))
    }

    fn from_entries(entries: &[(u32, f64)]) -> Self {
        let mut raw = Vec::new();
        if let Some(&(max, _)) = entries.iter().max_by_key(|&&(i, _)| i) {
            raw.resize(max as usize + 1, 0.0);
        }
        for &(i, w) in entries {
            raw[i as usize] = w;
        }
        let squared_norm = raw.iter().map(|w| w * w).sum();
        WeightVector {
            raw,
            scale: 1.0,
            squared_norm,
        }
    }
}

/// A linear classifier: weights, the rule that trains them, and the feature
/// configuration they expect.
///
/// `update_count` counts weight updates for PA and ALMA, and presented
/// (non-skipped) examples for Pegasos, whose learning rate decays with
/// every step.
#[derive(Debug, Clone)]
pub struct LinearModel {
    algorithm: Algorithm,
    weights: WeightVector,
    update_count: u64,
    fingerprint: FeatureFingerprint,
}

impl LinearModel {
    pub fn new(algorithm: Algorithm, fingerprint: FeatureFingerprint) -> Self {
        LinearModel {
            algorithm,
            weights: WeightVector::new(),
            update_count: 0,
            fingerprint,
        }
    }

    pub fn algorithm(&self) -> Algorithm {
        self.algorithm
    }

    pub fn fingerprint(&self) -> &FeatureFingerprint {
        &self.fingerprint
    }

    pub fn update_count(&self) -> u64 {
        self.update_count
    }

    /// Effective weight of one feature.
    pub fn weight(&self, index: u32) -> f64 {
        self.weights.get(index)
    }

    /// Tracked Euclidean norm of the weight vector.
    pub fn norm(&self) -> f64 {
        self.weights.norm()
    }

    /// Nonzero (index, weight) pairs in index order.
    pub fn nonzero_weights(&self) -> Vec<(u32, f64)> {
        self.weights.nonzero_entries().collect()
    }

    pub(crate) fn from_parts(
        algorithm: Algorithm,
        fingerprint: FeatureFingerprint,
        update_count: u64,
        entries: &[(u32, f64)],
    ) -> Self {
        LinearModel {
            algorithm,
            weights: WeightVector::from_entries(entries),
            update_count,
            fingerprint,
        }
    }

    /// PA-I step: with hinge loss `l = max(0, 1 - y w.x)`, applies
    /// `w += tau y x` where `tau = min(c, l / ||x||^2)`. Zero loss leaves
    /// the model bitwise unchanged.
    pub fn pa_step(&mut self, x: &SparseVector, y: Label, c: f64) -> StepOutcome {
        if x.is_empty() {
            return StepOutcome::SkippedZeroVector;
        }
        let margin = y.sign() * self.weights.dot(x);
        let loss = (1.0 - margin).max(0.0);
        if loss == 0.0 {
            return StepOutcome::Unchanged;
        }
        let tau = (loss / x.squared_norm()).min(c);
        self.weights.add_scaled(x, tau * y.sign());
        self.update_count += 1;
        StepOutcome::Updated
    }

    /// ALMA(alpha) step with p = 2, B = 1/alpha, C = sqrt(2). The example
    /// is normalized to unit norm; if the margin is at most
    /// `(1 - alpha) B sqrt(C / k)` the weights move by `eta = C / sqrt(k)`
    /// along it and are projected back onto the unit ball.
    pub fn alma_step(&mut self, x: &SparseVector, y: Label, alpha: f64) -> StepOutcome {
        if x.is_empty() {
            return StepOutcome::SkippedZeroVector;
        }
        let x_hat = x.normalized();
        let k = (self.update_count + 1) as f64;
        let b = 1.0 / alpha;
        let c = std::f64::consts::SQRT_2;
        let threshold = (1.0 - alpha) * b * (c / k).sqrt();
        let margin = y.sign() * self.weights.dot(&x_hat);
        if margin > threshold {
            return StepOutcome::Unchanged;
        }
        let eta = c / k.sqrt();
        self.weights.add_scaled(&x_hat, eta * y.sign());
        self.weights.project_to_ball(1.0);
        self.update_count += 1;
        StepOutcome::Updated
    }

    /// Pegasos step at t = update_count + 1: learning rate
    /// `eta = 1 / (lambda t)`, shrink by `(1 - eta lambda)`, add
    /// `eta y x` on a margin violation, then optionally project onto the
    /// `1/sqrt(lambda)` ball.
    pub fn pegasos_step(
        &mut self,
        x: &SparseVector,
        y: Label,
        lambda: f64,
        project: bool,
    ) -> StepOutcome {
        if x.is_empty() {
            return StepOutcome::SkippedZeroVector;
        }
        let t = (self.update_count + 1) as f64;
        let eta = 1.0 / (lambda * t);
        let margin = y.sign() * self.weights.dot(x);
        self.weights.scale_by(1.0 - eta * lambda);
        if margin < 1.0 {
            self.weights.add_scaled(x, eta * y.sign());
        }
        if project {
            self.weights.project_to_ball(1.0 / lambda.sqrt());
        }
        self.update_count += 1;
        StepOutcome::Updated
    }

    /// Runs the step matching the model's configured algorithm.
    pub fn step(&mut self, x: &SparseVector, y: Label) -> StepOutcome {
        match self.algorithm {
            Algorithm::Pa { c } => self.pa_step(x, y, c),
            Algorithm::Alma { alpha } => self.alma_step(x, y, alpha),
            Algorithm::Pegasos { lambda, project } => self.pegasos_step(x, y, lambda, project),
        }
    }

    /// Score and sign-rule label; a zero score predicts positive.
    pub fn predict(&self, x: &SparseVector) -> (Label, f64) {
        let score = self.weights.dot(x);
        (Label::from_bool(score >= 0.0), score)
    }
}

/// Shifts vocabulary-space indices up by one and prepends the always-on
/// bias feature at model index 0.
pub fn with_bias(x: &SparseVector) -> SparseVector {
    let mut pairs = Vec::with_capacity(x.nnz() + 1);
    pairs.push((0u32, 1.0));
    for (i, v) in x.iter() {
        pairs.push((i + 1, v));
    }
    SparseVector::from_pairs(pairs).expect("shifted indices stay strictly increasing")
}
