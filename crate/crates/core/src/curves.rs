//! Threshold sweeps, ROC and precision-recall curves, and their areas.

use std::fmt;
use std::str::FromStr;

use crate::confusion::{ConfusionMatrix, Dataset, LabeledScore, RateBundle};
use crate::error::{EvalError, Result};

/// Confusion matrix and rates at one decision threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub threshold: f64,
    pub cm: ConfusionMatrix,
    pub rates: RateBundle,
}

/// One point per distinct score, ordered by strictly decreasing threshold.
///
/// The all-negative predictor never appears: the first threshold is the
/// maximum score, so at least one instance is predicted positive at every
/// point. The last point predicts everything positive.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    points: Vec<SweepPoint>,
    n_pos: usize,
    n_neg: usize,
}

impl Sweep {
    pub fn points(&self) -> &[SweepPoint] {
        &self.points
    }

    pub fn n_pos(&self) -> usize {
        self.n_pos
    }

    pub fn n_neg(&self) -> usize {
        self.n_neg
    }

    pub fn first(&self) -> &SweepPoint {
        &self.points[0]
    }

    pub fn last(&self) -> &SweepPoint {
        &self.points[self.points.len() - 1]
    }
}

pub fn threshold_sweep(data: &Dataset) -> Result<Sweep> {
    data.require_both_classes()?;
    let (n_pos, n_neg) = (data.n_pos(), data.n_neg());

    let mut sorted: Vec<_> = data.items().to_vec();
    sorted.sort_by(|a, b| b.score().total_cmp(&a.score()));

    let mut points = Vec::new();
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut i = 0;
    while i < sorted.len() {
        let threshold = sorted[i].score();
        // -0.0 and 0.0 are one score under `>=`
        while i < sorted.len() && sorted[i].score() == threshold {
            if sorted[i].label().is_positive() {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        let cm = ConfusionMatrix::new(tp, fp, n_pos - tp, n_neg - fp);
        points.push(SweepPoint {
            threshold,
            cm,
            rates: cm.rates()?,
        });
    }
    Ok(Sweep { points, n_pos, n_neg })
}

/// Ordered `(x, y)` pairs with `x` non-decreasing and both coordinates in
/// `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoints(Vec<(f64, f64)>);

impl CurvePoints {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(EvalError::InvalidCurve("no points".into()));
        }
        for (i, &(x, y)) in points.iter().enumerate() {
            if !(0.0..=1.0).contains(&x) || !(0.0..=1.0).contains(&y) {
                return Err(EvalError::InvalidCurve(format!(
                    "point {i} ({x}, {y}) outside the unit square"
                )));
            }
        }
        if let Some(i) = points.windows(2).position(|w| w[1].0 < w[0].0) {
            return Err(EvalError::InvalidCurve(format!(
                "x decreases between points {i} and {}",
                i + 1
            )));
        }
        Ok(Self(points))
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn require_unit_span(&self) -> Result<()> {
        let lo = self.0[0].0;
        let hi = self.0[self.0.len() - 1].0;
        if lo != 0.0 || hi != 1.0 {
            return Err(EvalError::CurveRange { lo, hi });
        }
        Ok(())
    }
}

/// ROC curve `(fpr, tpr)` with the `(0, 0)` anchor prepended.
///
/// The anchor stands for the limit of the excluded all-negative predictor and
/// only exists so the curve can be integrated from zero.
pub fn roc_curve(sweep: &Sweep) -> CurvePoints {
    let mut points = Vec::with_capacity(sweep.points.len() + 1);
    points.push((0.0, 0.0));
    points.extend(sweep.points.iter().map(|p| (p.rates.fpr(), p.rates.sensitivity)));
    CurvePoints(points)
}

fn trapezoid(points: &[(f64, f64)]) -> f64 {
    points
        .windows(2)
        .map(|w| (w[1].0 - w[0].0) * (w[0].1 + w[1].1) / 2.0)
        .sum()
}

/// Trapezoidal area under an ROC curve spanning `x` in `[0, 1]`.
pub fn auroc(curve: &CurvePoints) -> Result<f64> {
    curve.require_unit_span()?;
    Ok(trapezoid(curve.points()))
}

/// Probability that a random positive outscores a random negative, with
/// ties counted as one half. Brute force over all pairs.
pub fn auroc_pairwise(data: &Dataset) -> Result<f64> {
    data.require_both_classes()?;
    let (pos, neg): (Vec<&LabeledScore>, Vec<&LabeledScore>) =
        data.items().iter().partition(|i| i.label().is_positive());
    let mut wins = 0u64;
    let mut ties = 0u64;
    for p in &pos {
        for n in &neg {
            if p.score() > n.score() {
                wins += 1;
            } else if p.score() == n.score() {
                ties += 1;
            }
        }
    }
    let pairs = (pos.len() as u64 * neg.len() as u64) as f64;
    Ok((wins as f64 + 0.5 * ties as f64) / pairs)
}

/// Precision-recall curve `(recall, precision)`.
///
/// Points sharing a recall keep only their highest precision. An anchor at
/// recall 0 repeats the precision of the first (highest-threshold) point.
pub fn pr_curve(sweep: &Sweep) -> CurvePoints {
    let mut points: Vec<(f64, f64)> = Vec::with_capacity(sweep.points.len() + 1);
    let mut last_tp = None;
    for p in &sweep.points {
        let precision = p.rates.precision.unwrap_or(0.0);
        if last_tp == Some(p.cm.tp) {
            let top = points.last_mut().expect("grouped point");
            top.1 = top.1.max(precision);
        } else {
            points.push((p.rates.sensitivity, precision));
            last_tp = Some(p.cm.tp);
        }
    }
    let p_first = sweep.first().rates.precision.unwrap_or(0.0);
    if points[0].0 > 0.0 {
        points.insert(0, (0.0, p_first));
    }
    CurvePoints(points)
}

/// How the precision-recall curve is integrated between points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Interpolation {
    /// Trapezoid over recall.
    #[default]
    Linear,
    /// Each segment contributes its recall width times the precision at its
    /// higher-recall end.
    Step,
}

impl Interpolation {
    pub fn as_str(self) -> &'static str {
        match self {
            Interpolation::Linear => "linear",
            Interpolation::Step => "step",
        }
    }
}

impl fmt::Display for Interpolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Interpolation {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Interpolation::Linear),
            "step" => Ok(Interpolation::Step),
            other => Err(EvalError::Config(format!(
                "unknown interpolation mode {other:?} (expected linear or step)"
            ))),
        }
    }
}

pub fn auprc(curve: &CurvePoints, interpolation: Interpolation) -> Result<f64> {
    curve.require_unit_span()?;
    let points = curve.points();
    Ok(match interpolation {
        Interpolation::Linear => trapezoid(points),
        Interpolation::Step => points.windows(2).map(|w| (w[1].0 - w[0].0) * w[1].1).sum(),
    })
}
