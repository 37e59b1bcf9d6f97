//! Datasets of scored instances, confusion matrices, and the scalar rates
//! derived from them.

use std::fmt;

use crate::error::{EvalError, Result};

/// Gold-standard class of an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Positive,
    Negative,
}

impl Label {
    pub fn is_positive(self) -> bool {
        matches!(self, Label::Positive)
    }

    /// Returns the opposite class.
    pub fn flipped(self) -> Label {
        match self {
            Label::Positive => Label::Negative,
            Label::Negative => Label::Positive,
        }
    }
}

impl From<bool> for Label {
    fn from(positive: bool) -> Self {
        if positive {
            Label::Positive
        } else {
            Label::Negative
        }
    }
}

/// A predictor's confidence score paired with the gold-standard label.
/// Higher scores mean more confidently positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabeledScore {
    score: f64,
    label: Label,
}

impl LabeledScore {
    pub fn new(score: f64, label: Label) -> Result<Self> {
        if !score.is_finite() {
            return Err(EvalError::NonFiniteScore { index: 0, score });
        }
        Ok(Self { score, label })
    }

    pub fn score(&self) -> f64 {
        self.score
    }

    pub fn label(&self) -> Label {
        self.label
    }
}

/// An ordered collection of labeled scores with cached class totals.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    items: Vec<LabeledScore>,
    n_pos: usize,
    n_neg: usize,
}

impl Dataset {
    pub fn new(items: Vec<LabeledScore>) -> Self {
        let n_pos = items.iter().filter(|i| i.label.is_positive()).count();
        let n_neg = items.len() - n_pos;
        Self { items, n_pos, n_neg }
    }

    /// Builds a dataset from `(score, is_positive)` pairs, rejecting
    /// non-finite scores.
    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, bool)>,
    {
        let items = pairs
            .into_iter()
            .enumerate()
            .map(|(index, (score, positive))| {
                LabeledScore::new(score, positive.into()).map_err(|_| EvalError::NonFiniteScore { index, score })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(items))
    }

    pub fn items(&self) -> &[LabeledScore] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn n_pos(&self) -> usize {
        self.n_pos
    }

    pub fn n_neg(&self) -> usize {
        self.n_neg
    }

    /// Fraction of gold positives. `None` for an empty dataset.
    pub fn prevalence(&self) -> Option<f64> {
        (!self.is_empty()).then(|| self.n_pos as f64 / self.len() as f64)
    }

    /// Fails unless both classes are present, which every curve and
    /// area computation needs.
    pub fn require_both_classes(&self) -> Result<()> {
        if self.n_pos == 0 || self.n_neg == 0 {
            return Err(EvalError::MissingClass {
                n_pos: self.n_pos,
                n_neg: self.n_neg,
            });
        }
        Ok(())
    }
}

impl From<Vec<LabeledScore>> for Dataset {
    fn from(items: Vec<LabeledScore>) -> Self {
        Self::new(items)
    }
}

impl FromIterator<LabeledScore> for Dataset {
    fn from_iter<T: IntoIterator<Item = LabeledScore>>(iter: T) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

/// Counts of a binary prediction against the gold standard at one threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ConfusionMatrix {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub tn: usize,
}

impl ConfusionMatrix {
    pub fn new(tp: usize, fp: usize, fn_: usize, tn: usize) -> Self {
        Self { tp, fp, fn_, tn }
    }

    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }

    pub fn predicted_positive(&self) -> usize {
        self.tp + self.fp
    }

    pub fn rates(&self) -> Result<RateBundle> {
        rates(self)
    }
}

/// Classifies every instance with `score >= threshold` as positive.
///
/// Instances sharing a score are always on the same side of the threshold.
pub fn confusion_at_threshold(data: &Dataset, threshold: f64) -> Result<ConfusionMatrix> {
    if data.is_empty() {
        return Err(EvalError::EmptyDataset);
    }
    if !threshold.is_finite() {
        return Err(EvalError::NonFiniteThreshold(threshold));
    }
    let mut cm = ConfusionMatrix::default();
    for item in data.items() {
        match (item.score >= threshold, item.label) {
            (true, Label::Positive) => cm.tp += 1,
            (true, Label::Negative) => cm.fp += 1,
            (false, Label::Positive) => cm.fn_ += 1,
            (false, Label::Negative) => cm.tn += 1,
        }
    }
    Ok(cm)
}

/// A ratio of two counts where the denominator may be zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ratio {
    Finite(f64),
    /// Positive numerator over a zero denominator.
    Infinite,
    /// Zero over zero.
    Undefined,
}

impl Ratio {
    pub fn of(numerator: usize, denominator: usize) -> Self {
        match (numerator, denominator) {
            (0, 0) => Ratio::Undefined,
            (_, 0) => Ratio::Infinite,
            (n, d) => Ratio::Finite(n as f64 / d as f64),
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Ratio::Finite(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ratio::Finite(v) => write!(f, "{v}"),
            Ratio::Infinite => f.write_str("infinite"),
            Ratio::Undefined => f.write_str("undefined"),
        }
    }
}

/// Scalar rates of one confusion matrix.
///
/// `sensitivity` (recall) is reported as 0 when the matrix holds no gold
/// positives, and `specificity` as 0 when it holds no gold negatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateBundle {
    pub accuracy: f64,
    pub sensitivity: f64,
    pub specificity: f64,
    /// `None` when nothing is predicted positive.
    pub precision: Option<f64>,
    pub tp_fp_ratio: Ratio,
    pub fp_tn_ratio: Ratio,
}

impl RateBundle {
    pub fn recall(&self) -> f64 {
        self.sensitivity
    }

    /// False positive rate, `fp / (fp + tn)`.
    pub fn fpr(&self) -> f64 {
        1.0 - self.specificity
    }
}

fn fraction_or_zero(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn rates(cm: &ConfusionMatrix) -> Result<RateBundle> {
    let total = cm.total();
    if total == 0 {
        return Err(EvalError::EmptyMatrix);
    }
    let predicted = cm.predicted_positive();
    Ok(RateBundle {
        accuracy: (cm.tp + cm.tn) as f64 / total as f64,
        sensitivity: fraction_or_zero(cm.tp, cm.tp + cm.fn_),
        specificity: fraction_or_zero(cm.tn, cm.fp + cm.tn),
        precision: (predicted > 0).then(|| cm.tp as f64 / predicted as f64),
        tp_fp_ratio: Ratio::of(cm.tp, cm.fp),
        fp_tn_ratio: Ratio::of(cm.fp, cm.tn),
    })
}
