//! Partial-oracle predictor for synthetic benchmarks.
//!
//! A positive instance gets a score of exactly 1 with probability `alpha` and
//! otherwise a draw from `Uniform[0.25, 1]`. A negative instance gets exactly
//! 0 with probability `beta` and otherwise a draw from `Uniform[0, 0.75]`.
//!
//! Randomness is counter based: instance `i` reads its own ChaCha stream
//! keyed by the seed, so its draws do not depend on any other instance and
//! generation can be split across threads freely.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::confusion::{Dataset, Label, LabeledScore};
use crate::error::{EvalError, Result};

pub const POSITIVE_SUPPORT: (f64, f64) = (0.25, 1.0);
pub const NEGATIVE_SUPPORT: (f64, f64) = (0.0, 0.75);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictorParams {
    alpha: f64,
    beta: f64,
}

impl PredictorParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("beta", beta)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(EvalError::Config(format!("{name} must lie in [0, 1], got {v}")));
            }
        }
        Ok(Self { alpha, beta })
    }

    /// Probability that a positive is scored exactly 1.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Probability that a negative is scored exactly 0.
    pub fn beta(&self) -> f64 {
        self.beta
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    n: usize,
    prevalence: f64,
    seed: u64,
}

impl SimConfig {
    pub fn new(n: usize, prevalence: f64, seed: u64) -> Result<Self> {
        if !(prevalence > 0.0 && prevalence < 1.0) {
            return Err(EvalError::Config(format!(
                "prevalence must lie strictly between 0 and 1, got {prevalence}"
            )));
        }
        let n_pos = positive_count(n, prevalence);
        if n_pos < 1 || n_pos >= n {
            return Err(EvalError::Config(format!(
                "n={n} at prevalence {prevalence} gives {n_pos} positives and {} negatives; both must be at least 1",
                n.saturating_sub(n_pos)
            )));
        }
        Ok(Self { n, prevalence, seed })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn prevalence(&self) -> f64 {
        self.prevalence
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn n_pos(&self) -> usize {
        positive_count(self.n, self.prevalence)
    }
}

/// `round(n * prevalence)`, halves rounded up.
fn positive_count(n: usize, prevalence: f64) -> usize {
    (n as f64 * prevalence).round() as usize
}

/// Exactly `round(n * prevalence)` positives followed by the negatives.
pub fn gen_labels(cfg: &SimConfig) -> Vec<Label> {
    let n_pos = cfg.n_pos();
    let mut labels = vec![Label::Positive; n_pos];
    labels.resize(cfg.n, Label::Negative);
    labels
}

fn draw(base: &ChaCha8Rng, index: usize, label: Label, params: &PredictorParams) -> f64 {
    let mut rng = base.clone();
    rng.set_stream(index as u64);
    // Always two draws in the same order: raising alpha or beta only turns
    // more instances deterministic and never reshuffles the rest.
    let coin: f64 = rng.random();
    match label {
        Label::Positive => {
            let uniform = rng.random_range(POSITIVE_SUPPORT.0..=POSITIVE_SUPPORT.1);
            if coin < params.alpha {
                1.0
            } else {
                uniform
            }
        }
        Label::Negative => {
            let uniform = rng.random_range(NEGATIVE_SUPPORT.0..=NEGATIVE_SUPPORT.1);
            if coin < params.beta {
                0.0
            } else {
                uniform
            }
        }
    }
}

pub fn gen_scores(labels: &[Label], params: &PredictorParams, seed: u64) -> Dataset {
    let base = ChaCha8Rng::seed_from_u64(seed);
    labels
        .par_iter()
        .enumerate()
        .map(|(i, &label)| {
            let score = draw(&base, i, label, params);
            LabeledScore::new(score, label).expect("uniform draws are finite")
        })
        .collect::<Vec<_>>()
        .into()
}

/// Labels plus scores for one configuration.
pub fn simulate(cfg: &SimConfig, params: &PredictorParams) -> Dataset {
    gen_scores(&gen_labels(cfg), params, cfg.seed)
}

/// Closed-form AUROC of the predictor: `1 - (2/9)(1 - alpha)(1 - beta)`.
///
/// Only a pair of two non-deterministic instances can be misordered, and for
/// such a pair `P(pos > neg) = 7/9`.
pub fn analytic_auroc(params: &PredictorParams) -> f64 {
    1.0 - (2.0 / 9.0) * (1.0 - params.alpha) * (1.0 - params.beta)
}
