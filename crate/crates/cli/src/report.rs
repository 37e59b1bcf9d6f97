//! Text renderers: the key=value evaluation report and the CSV point and
//! table files.

use std::fmt::Write as _;

use triscore::confusion::confusion_at_threshold;
use triscore::curves::{auprc, auroc, pr_curve, roc_curve, threshold_sweep};
use triscore::experiments::{MetricTable, RowStats, Summary};
use triscore::trimetric::tri_evaluate;
use triscore::{
    ConfusionMatrix, CurvePoints, FigureKind, FigureSeries, Interpolation, RateBundle, TriConfig, TriPoint, TriReport,
};

use crate::error::CliError;
use crate::scorefile::ScoreFile;

pub const TOOL: &str = "triscore";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const DEFAULT_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone)]
pub struct Report {
    pub sha256: String,
    pub n: usize,
    pub n_pos: usize,
    pub n_neg: usize,
    pub threshold: f64,
    pub cm: ConfusionMatrix,
    pub rates: RateBundle,
    pub auroc: f64,
    pub auprc_linear: f64,
    pub auprc_step: f64,
    pub pr_interpolation: Interpolation,
    pub tri: TriReport,
}

impl Report {
    pub fn build(
        file: &ScoreFile,
        threshold: f64,
        tri_config: &TriConfig,
        pr_interpolation: Interpolation,
    ) -> Result<Self, CliError> {
        let data = &file.dataset;
        if data.is_empty() {
            return Err(CliError::Degenerate("score file has no records".into()));
        }
        if let Err(e) = data.require_both_classes() {
            return Err(CliError::Degenerate(e.to_string()));
        }
        let cm = confusion_at_threshold(data, threshold)?;
        let sweep = threshold_sweep(data)?;
        let pr = pr_curve(&sweep);
        Ok(Self {
            sha256: file.sha256.clone(),
            n: data.len(),
            n_pos: data.n_pos(),
            n_neg: data.n_neg(),
            threshold,
            cm,
            rates: cm.rates()?,
            auroc: auroc(&roc_curve(&sweep))?,
            auprc_linear: auprc(&pr, Interpolation::Linear)?,
            auprc_step: auprc(&pr, Interpolation::Step)?,
            pr_interpolation,
            tri: tri_evaluate(&sweep, tri_config)?,
        })
    }

    pub fn auprc(&self) -> f64 {
        match self.pr_interpolation {
            Interpolation::Linear => self.auprc_linear,
            Interpolation::Step => self.auprc_step,
        }
    }

    pub fn render(&self) -> String {
        let r = &self.rates;
        let cfg = &self.tri.config;
        let precision = r.precision.map_or_else(|| "undefined".to_string(), |p| p.to_string());
        let entries: Vec<(&str, String)> = vec![
            ("tool", TOOL.into()),
            ("version", VERSION.into()),
            ("input.sha256", self.sha256.clone()),
            ("dataset.n", self.n.to_string()),
            ("dataset.n_pos", self.n_pos.to_string()),
            ("dataset.n_neg", self.n_neg.to_string()),
            ("dataset.prevalence", (self.n_pos as f64 / self.n as f64).to_string()),
            ("threshold", self.threshold.to_string()),
            ("confusion.tp", self.cm.tp.to_string()),
            ("confusion.fp", self.cm.fp.to_string()),
            ("confusion.fn", self.cm.fn_.to_string()),
            ("confusion.tn", self.cm.tn.to_string()),
            ("rates.accuracy", r.accuracy.to_string()),
            ("rates.sensitivity", r.sensitivity.to_string()),
            ("rates.specificity", r.specificity.to_string()),
            ("rates.precision", precision),
            ("rates.tp_fp_ratio", r.tp_fp_ratio.to_string()),
            ("rates.fp_tn_ratio", r.fp_tn_ratio.to_string()),
            ("auroc", self.auroc.to_string()),
            ("auprc", self.auprc().to_string()),
            ("auprc.interpolation", self.pr_interpolation.to_string()),
            ("auprc.linear", self.auprc_linear.to_string()),
            ("auprc.step", self.auprc_step.to_string()),
            ("tri.ratio_cap", cfg.ratio_cap().to_string()),
            ("tri.ratio_mode", cfg.ratio_mode().to_string()),
            ("tri.clamp_dim2", cfg.clamp_dim2().to_string()),
            ("tri.area1", self.tri.area1.to_string()),
            ("tri.area2", self.tri.area2.to_string()),
            ("tri.score", self.tri.score.to_string()),
        ];
        let mut out = String::new();
        for (key, value) in entries {
            writeln!(out, "{key}={value}").expect("writing to a String");
        }
        out
    }
}

/// Parses a rendered report back into ordered key/value pairs.
pub fn parse_report(text: &str) -> Vec<(&str, &str)> {
    text.lines().filter_map(|l| l.split_once('=')).collect()
}

pub fn curve_csv(points: &CurvePoints) -> String {
    let mut out = String::from("x,y\n");
    for (x, y) in points.points() {
        writeln!(out, "{x},{y}").expect("writing to a String");
    }
    out
}

pub fn tri_csv(points: &[TriPoint]) -> String {
    let mut out = String::from("recall,g,d2\n");
    for p in points {
        writeln!(out, "{},{},{}", p.recall, p.g, p.d2).expect("writing to a String");
    }
    out
}

pub fn series_csv(series: &FigureSeries) -> String {
    match series {
        FigureSeries::Curve(c) => curve_csv(c),
        FigureSeries::Tri(points) => tri_csv(points),
    }
}

/// Curve points for one score file.
pub fn curve_for(file: &ScoreFile, kind: FigureKind, tri_config: &TriConfig) -> Result<String, CliError> {
    if let Err(e) = file.dataset.require_both_classes() {
        return Err(CliError::Degenerate(e.to_string()));
    }
    let sweep = threshold_sweep(&file.dataset)?;
    Ok(match kind {
        FigureKind::Roc => curve_csv(&roc_curve(&sweep)),
        FigureKind::Pr => curve_csv(&pr_curve(&sweep)),
        FigureKind::Tri => tri_csv(&tri_evaluate(&sweep, tri_config)?.points),
    })
}

pub const TABLE_HEADER: &str = "row,alpha,beta,prevalence,mean,std";

/// One metric column of an experiment as CSV, five rows.
pub fn table_csv(table: &MetricTable, pick: fn(&RowStats) -> Summary) -> String {
    let mut out = String::from(TABLE_HEADER);
    out.push('\n');
    for (i, row) in table.rows.iter().enumerate() {
        let s = pick(row);
        writeln!(
            out,
            "{},{},{},{},{},{}",
            i + 1,
            row.row.params.alpha(),
            row.row.params.beta(),
            row.row.prevalence,
            s.mean,
            s.std
        )
        .expect("writing to a String");
    }
    out
}
