//! Three-dimensional evaluation score.
//!
//! Each sweep point is mapped to three coordinates:
//!
//! * recall, `tp / (tp + fn)`;
//! * `g`, the tp/fp ratio passed through a capped-linear transform so it
//!   lands in `[0, 1]` (doubling `fp` halves `g` until the cap saturates);
//! * `d2 = 1 - fp/tn`, clamped to `[0, 1]`.
//!
//! The score is the product of the area under `g` over recall and the area
//! under `d2` over recall. In the default odds-normalized mode the ratio is
//! `(tp/fp) * (n_neg/n_pos)`, which is the positive likelihood ratio
//! `TPR/FPR` and does not move when the negative class is resampled.

use std::fmt;
use std::str::FromStr;

use crate::curves::Sweep;
use crate::error::{EvalError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RatioMode {
    /// `tp/fp` rescaled by `n_neg/n_pos`.
    #[default]
    OddsNormalized,
    /// Plain `tp/fp`.
    Raw,
}

impl RatioMode {
    pub fn as_str(self) -> &'static str {
        match self {
            RatioMode::OddsNormalized => "odds",
            RatioMode::Raw => "raw",
        }
    }
}

impl fmt::Display for RatioMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RatioMode {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "odds" | "odds_normalized" => Ok(RatioMode::OddsNormalized),
            "raw" => Ok(RatioMode::Raw),
            other => Err(EvalError::Config(format!(
                "unknown ratio mode {other:?} (expected odds or raw)"
            ))),
        }
    }
}

pub const DEFAULT_RATIO_CAP: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriConfig {
    ratio_cap: f64,
    ratio_mode: RatioMode,
    clamp_dim2: bool,
}

impl Default for TriConfig {
    fn default() -> Self {
        Self {
            ratio_cap: DEFAULT_RATIO_CAP,
            ratio_mode: RatioMode::default(),
            clamp_dim2: true,
        }
    }
}

impl TriConfig {
    pub fn new(ratio_cap: f64, ratio_mode: RatioMode, clamp_dim2: bool) -> Result<Self> {
        if !(ratio_cap.is_finite() && ratio_cap > 0.0) {
            return Err(EvalError::Config(format!(
                "ratio cap must be a positive finite number, got {ratio_cap}"
            )));
        }
        Ok(Self {
            ratio_cap,
            ratio_mode,
            clamp_dim2,
        })
    }

    pub fn ratio_cap(&self) -> f64 {
        self.ratio_cap
    }

    pub fn ratio_mode(&self) -> RatioMode {
        self.ratio_mode
    }

    /// With clamping off, `d2` is the raw `1 - fp/tn` wherever `tn > 0` and
    /// may go negative; points with `tn = 0` still map to 0.
    pub fn clamp_dim2(&self) -> bool {
        self.clamp_dim2
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriPoint {
    pub recall: f64,
    pub g: f64,
    pub d2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TriReport {
    /// Upper envelope per distinct recall, ordered by recall, starting with
    /// the recall-0 anchor.
    pub points: Vec<TriPoint>,
    pub area1: f64,
    pub area2: f64,
    pub score: f64,
    pub config: TriConfig,
}

/// Maps the tp/fp ratio onto `[0, 1]`.
///
/// Returns 1 when `fp = 0 < tp`, 0 when `tp = 0`, and otherwise
/// `min(r, cap) / cap` with `r` the (optionally odds-normalized) ratio.
pub fn ratio_transform(tp: usize, fp: usize, n_pos: usize, n_neg: usize, cfg: &TriConfig) -> Result<f64> {
    if n_pos == 0 || n_neg == 0 {
        return Err(EvalError::MissingClass { n_pos, n_neg });
    }
    if tp > n_pos || fp > n_neg {
        return Err(EvalError::Config(format!(
            "counts exceed class totals (tp={tp} of {n_pos}, fp={fp} of {n_neg})"
        )));
    }
    if tp == 0 {
        return Ok(0.0);
    }
    if fp == 0 {
        return Ok(1.0);
    }
    // Integer products keep the ratio a single correctly rounded division,
    // so scaling both counts of a class by k reproduces it bit for bit.
    let ratio = match cfg.ratio_mode {
        RatioMode::Raw => tp as f64 / fp as f64,
        RatioMode::OddsNormalized => (tp as u128 * n_neg as u128) as f64 / (fp as u128 * n_pos as u128) as f64,
    };
    Ok(ratio.min(cfg.ratio_cap) / cfg.ratio_cap)
}

fn dim2(fp: usize, tn: usize, clamp: bool) -> f64 {
    match (fp, tn) {
        (0, _) => 1.0,
        (_, 0) => 0.0,
        (fp, tn) => {
            let v = 1.0 - fp as f64 / tn as f64;
            if clamp {
                v.clamp(0.0, 1.0)
            } else {
                v
            }
        }
    }
}

fn area(points: &[TriPoint], value: impl Fn(&TriPoint) -> f64) -> f64 {
    points
        .windows(2)
        .map(|w| (w[1].recall - w[0].recall) * (value(&w[0]) + value(&w[1])) / 2.0)
        .sum()
}

pub fn tri_evaluate(sweep: &Sweep, cfg: &TriConfig) -> Result<TriReport> {
    let (n_pos, n_neg) = (sweep.n_pos(), sweep.n_neg());
    let mut points: Vec<TriPoint> = Vec::with_capacity(sweep.points().len() + 1);
    let mut last_tp = None;
    for p in sweep.points() {
        let g = ratio_transform(p.cm.tp, p.cm.fp, n_pos, n_neg, cfg)?;
        let d2 = dim2(p.cm.fp, p.cm.tn, cfg.clamp_dim2);
        if last_tp == Some(p.cm.tp) {
            let top = points.last_mut().expect("grouped point");
            top.g = top.g.max(g);
            top.d2 = top.d2.max(d2);
        } else {
            points.push(TriPoint {
                recall: p.rates.sensitivity,
                g,
                d2,
            });
            last_tp = Some(p.cm.tp);
        }
    }
    let first = points[0];
    if first.recall > 0.0 {
        points.insert(0, TriPoint { recall: 0.0, ..first });
    }

    let area1 = area(&points, |p| p.g);
    let area2 = area(&points, |p| p.d2);
    let score = area1 * area2;
    if !score.is_finite() {
        return Err(EvalError::Internal(format!(
            "non-finite tri score (area1={area1}, area2={area2})"
        )));
    }
    Ok(TriReport {
        points,
        area1,
        area2,
        score,
        config: *cfg,
    })
}
