//! Binary classifier evaluation.
//!
//! Threshold sweeps, ROC and precision-recall curves with their areas, and a
//! three-dimensional score built from the tp/fp ratio, the `1 - fp/tn`
//! false-positive penalty, and recall. The [`sim`] module provides a seeded
//! partial-oracle predictor for synthetic benchmarks, and [`experiments`]
//! runs the standard four evaluation sets over it.

pub mod confusion;
pub mod curves;
pub mod error;
pub mod experiments;
pub mod sim;
pub mod trimetric;

pub use confusion::{ConfusionMatrix, Dataset, Label, LabeledScore, RateBundle, Ratio};
pub use curves::{CurvePoints, Interpolation, Sweep, SweepPoint};
pub use error::{EvalError, Result};
pub use experiments::{ExperimentSpec, FigureKind, FigureSeries, MetricTable, SetId};
pub use sim::{PredictorParams, SimConfig};
pub use trimetric::{RatioMode, TriConfig, TriPoint, TriReport};
