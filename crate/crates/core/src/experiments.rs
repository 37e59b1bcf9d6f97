//! The four benchmark sets over the partial-oracle predictor.
//!
//! * **a**: `P(0.1, 0.1)` at prevalences 5%, 10%, 15%, 20%, 25%.
//! * **b**: increasing alpha with beta fixed at 0.1.
//! * **c**: decreasing beta with alpha fixed at 0.1.
//! * **d**: increasing alpha and decreasing beta with `alpha + beta = 0.5`.
//!
//! Sets b-d run at 10% prevalence. The alpha/beta grids are the ones whose
//! closed-form AUROC reproduces the published AUROC table.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::curves::{auprc, auroc, pr_curve, roc_curve, threshold_sweep, CurvePoints, Interpolation, Sweep};
use crate::error::{EvalError, Result};
use crate::sim::{gen_labels, gen_scores, PredictorParams, SimConfig};
use crate::trimetric::{tri_evaluate, TriConfig, TriPoint};

pub const ROWS_PER_SET: usize = 5;
pub const DEFAULT_N: usize = 10_000;
pub const DEFAULT_REPS: usize = 10;
pub const DEFAULT_SEED: u64 = 20_191_119;
const FIXED_PREVALENCE: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SetId {
    A,
    B,
    C,
    D,
}

impl SetId {
    pub const ALL: [SetId; 4] = [SetId::A, SetId::B, SetId::C, SetId::D];

    pub fn as_str(self) -> &'static str {
        match self {
            SetId::A => "a",
            SetId::B => "b",
            SetId::C => "c",
            SetId::D => "d",
        }
    }
}

impl fmt::Display for SetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SetId {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" | "A" => Ok(SetId::A),
            "b" | "B" => Ok(SetId::B),
            "c" | "C" => Ok(SetId::C),
            "d" | "D" => Ok(SetId::D),
            other => Err(EvalError::Config(format!(
                "unknown set id {other:?} (expected a, b, c or d)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRow {
    pub params: PredictorParams,
    pub prevalence: f64,
}

fn row(alpha: f64, beta: f64, prevalence: f64) -> GridRow {
    GridRow {
        params: PredictorParams::new(alpha, beta).expect("grid parameters lie in [0, 1]"),
        prevalence,
    }
}

pub fn grid_for_set(set: SetId) -> Vec<GridRow> {
    let p = FIXED_PREVALENCE;
    match set {
        SetId::A => [0.05, 0.10, 0.15, 0.20, 0.25]
            .into_iter()
            .map(|prev| row(0.1, 0.1, prev))
            .collect(),
        SetId::B => [0.05, 0.10, 0.15, 0.20, 0.25]
            .into_iter()
            .map(|a| row(a, 0.1, p))
            .collect(),
        SetId::C => [0.45, 0.40, 0.35, 0.30, 0.25]
            .into_iter()
            .map(|b| row(0.1, b, p))
            .collect(),
        SetId::D => [(0.05, 0.45), (0.10, 0.40), (0.15, 0.35), (0.20, 0.30), (0.25, 0.25)]
            .into_iter()
            .map(|(a, b)| row(a, b, p))
            .collect(),
    }
}

/// Which curve [`emit_figure_points`] produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureKind {
    Roc,
    Pr,
    Tri,
}

impl FigureKind {
    pub const ALL: [FigureKind; 3] = [FigureKind::Roc, FigureKind::Pr, FigureKind::Tri];

    pub fn as_str(self) -> &'static str {
        match self {
            FigureKind::Roc => "roc",
            FigureKind::Pr => "pr",
            FigureKind::Tri => "tri",
        }
    }
}

impl FromStr for FigureKind {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "roc" => Ok(FigureKind::Roc),
            "pr" => Ok(FigureKind::Pr),
            "tri" => Ok(FigureKind::Tri),
            other => Err(EvalError::Config(format!(
                "unknown curve kind {other:?} (expected roc, pr or tri)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub set_id: SetId,
    rows: Vec<GridRow>,
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
    pub tri_config: TriConfig,
    pub pr_interpolation: Interpolation,
}

impl ExperimentSpec {
    /// Default grid for `set_id`, `n = 10_000`, 10 replications.
    pub fn new(set_id: SetId) -> Self {
        Self {
            set_id,
            rows: grid_for_set(set_id),
            n: DEFAULT_N,
            reps: DEFAULT_REPS,
            seed: DEFAULT_SEED,
            tri_config: TriConfig::default(),
            pr_interpolation: Interpolation::default(),
        }
    }

    /// Replaces the grid. Set a must keep one predictor across rows; sets
    /// b-d must keep the prevalence fixed at 10%.
    pub fn with_rows(mut self, rows: Vec<GridRow>) -> Result<Self> {
        self.rows = rows;
        self.validate()?;
        Ok(self)
    }

    pub fn rows(&self) -> &[GridRow] {
        &self.rows
    }

    pub fn validate(&self) -> Result<()> {
        if self.rows.len() != ROWS_PER_SET {
            return Err(EvalError::Config(format!(
                "an experiment has exactly {ROWS_PER_SET} rows, got {}",
                self.rows.len()
            )));
        }
        if self.reps == 0 {
            return Err(EvalError::Config("reps must be at least 1".into()));
        }
        match self.set_id {
            SetId::A => {
                if self.rows.iter().any(|r| r.params != self.rows[0].params) {
                    return Err(EvalError::Config(
                        "set a varies prevalence only; predictor must be fixed".into(),
                    ));
                }
            }
            _ => {
                if self.rows.iter().any(|r| r.prevalence != FIXED_PREVALENCE) {
                    return Err(EvalError::Config(format!(
                        "set {} runs at fixed prevalence {FIXED_PREVALENCE}",
                        self.set_id
                    )));
                }
            }
        }
        for r in &self.rows {
            SimConfig::new(self.n, r.prevalence, 0)?;
        }
        Ok(())
    }

    fn sim_config(&self, row: usize, rep: usize) -> SimConfig {
        SimConfig::new(self.n, self.rows[row].prevalence, derive_seed(self.seed, rep as u64)).expect("validated spec")
    }

    fn sweep(&self, row: usize, rep: usize) -> Result<Sweep> {
        let cfg = self.sim_config(row, rep);
        let data = gen_scores(&gen_labels(&cfg), &self.rows[row].params, cfg.seed());
        threshold_sweep(&data)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for replication `rep` of an experiment.
///
/// All rows of one replication share the seed, so instance `i` reads the
/// same random stream in every row and rows differ only through their
/// parameters (common random numbers). Replications stay independent.
pub fn derive_seed(master: u64, rep: u64) -> u64 {
    splitmix64(splitmix64(master) ^ rep)
}

/// The three headline numbers computed from one sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scores {
    pub auprc: f64,
    pub auroc: f64,
    pub tri_score: f64,
}

pub fn score_sweep(sweep: &Sweep, tri: &TriConfig, interpolation: Interpolation) -> Result<Scores> {
    Ok(Scores {
        auprc: auprc(&pr_curve(sweep), interpolation)?,
        auroc: auroc(&roc_curve(sweep))?,
        tri_score: tri_evaluate(sweep, tri)?.score,
    })
}

/// Mean and sample standard deviation (0 for a single replication).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    pub std: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = if values.len() < 2 {
            0.0
        } else {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        };
        Self { mean, std }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowStats {
    pub row: GridRow,
    pub auprc: Summary,
    pub auroc: Summary,
    pub tri_score: Summary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricTable {
    pub spec: ExperimentSpec,
    pub rows: Vec<RowStats>,
}

impl MetricTable {
    pub fn column(&self, pick: impl Fn(&RowStats) -> Summary) -> Vec<Summary> {
        self.rows.iter().map(pick).collect()
    }

    pub fn means(&self, pick: impl Fn(&RowStats) -> Summary) -> Vec<f64> {
        self.rows.iter().map(|r| pick(r).mean).collect()
    }
}

/// Runs every (row, replication) cell and aggregates per row.
///
/// Cells run in parallel; results are gathered in row-major order, so the
/// table is identical under any schedule.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<MetricTable> {
    spec.validate()?;
    let cells: Vec<(usize, usize)> = (0..ROWS_PER_SET)
        .flat_map(|row| (0..spec.reps).map(move |rep| (row, rep)))
        .collect();
    let scores = cells
        .par_iter()
        .map(|&(row, rep)| score_sweep(&spec.sweep(row, rep)?, &spec.tri_config, spec.pr_interpolation))
        .collect::<Result<Vec<_>>>()?;

    let rows = scores
        .chunks(spec.reps)
        .zip(spec.rows())
        .map(|(cell, row)| {
            let summary = |f: fn(&Scores) -> f64| Summary::of(&cell.iter().map(f).collect::<Vec<_>>());
            RowStats {
                row: *row,
                auprc: summary(|s| s.auprc),
                auroc: summary(|s| s.auroc),
                tri_score: summary(|s| s.tri_score),
            }
        })
        .collect::<Vec<_>>();

    for r in &rows {
        for s in [r.auprc, r.auroc, r.tri_score] {
            if !(s.mean.is_finite() && s.std.is_finite()) {
                return Err(EvalError::Internal(format!("non-finite statistic in row {:?}", r.row)));
            }
        }
    }
    Ok(MetricTable {
        spec: spec.clone(),
        rows,
    })
}

/// Plot-ready points for one row.
#[derive(Debug, Clone, PartialEq)]
pub enum FigureSeries {
    Curve(CurvePoints),
    Tri(Vec<TriPoint>),
}

/// One series per row, drawn from the first replication's data.
pub fn emit_figure_points(spec: &ExperimentSpec, kind: FigureKind) -> Result<Vec<FigureSeries>> {
    spec.validate()?;
    (0..ROWS_PER_SET)
        .into_par_iter()
        .map(|row| {
            let sweep = spec.sweep(row, 0)?;
            Ok(match kind {
                FigureKind::Roc => FigureSeries::Curve(roc_curve(&sweep)),
                FigureKind::Pr => FigureSeries::Curve(pr_curve(&sweep)),
                FigureKind::Tri => FigureSeries::Tri(tri_evaluate(&sweep, &spec.tri_config)?.points),
            })
        })
        .collect()
}
