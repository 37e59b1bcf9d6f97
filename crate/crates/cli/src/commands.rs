use std::ffi::OsString;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use triscore::experiments::{
    emit_figure_points, run_experiment, RowStats, Summary, DEFAULT_N, DEFAULT_REPS, DEFAULT_SEED,
};
use triscore::sim::{simulate, PredictorParams, SimConfig};
use triscore::trimetric::DEFAULT_RATIO_CAP;
use triscore::{ExperimentSpec, FigureKind, Interpolation, RatioMode, SetId, TriConfig};

use crate::error::{CliError, ExitCode};
use crate::report::{self, Report, DEFAULT_THRESHOLD};
use crate::scorefile;

#[derive(Debug, Parser)]
#[command(name = "triscore", version, about = "Evaluate binary classifier scores")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct TriArgs {
    /// Saturation point of the tp/fp ratio transform
    #[arg(long, default_value_t = DEFAULT_RATIO_CAP, value_parser = positive_finite)]
    ratio_cap: f64,
    /// `odds` rescales tp/fp by n_neg/n_pos; `raw` uses tp/fp as is
    #[arg(long, default_value = "odds", value_parser = parse_with::<RatioMode>)]
    ratio_mode: RatioMode,
}

impl TriArgs {
    fn config(&self) -> Result<TriConfig, CliError> {
        Ok(TriConfig::new(self.ratio_cap, self.ratio_mode, true)?)
    }
}

#[derive(Debug, Args)]
struct PrArgs {
    /// How the precision-recall curve is integrated
    #[arg(long = "pr-interpolation", default_value = "linear", value_parser = parse_with::<Interpolation>)]
    interpolation: Interpolation,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print a key=value report for a score file
    Eval {
        /// Score file (`-` or omitted reads standard input)
        file: Option<PathBuf>,
        /// Decision threshold for the scalar rates (score >= threshold is positive)
        #[arg(long, default_value_t = DEFAULT_THRESHOLD, value_parser = finite)]
        threshold: f64,
        #[command(flatten)]
        tri: TriArgs,
        #[command(flatten)]
        pr: PrArgs,
    },
    /// Print ROC, precision-recall, or tri-metric points as CSV
    Curve {
        #[arg(value_parser = parse_with::<FigureKind>)]
        kind: FigureKind,
        file: Option<PathBuf>,
        #[command(flatten)]
        tri: TriArgs,
    },
    /// Print a synthetic score file from the partial-oracle predictor
    Simulate {
        #[arg(long, value_parser = unit_interval)]
        alpha: f64,
        #[arg(long, value_parser = unit_interval)]
        beta: f64,
        #[arg(long, default_value_t = DEFAULT_N)]
        n: usize,
        #[arg(long, default_value_t = 0.1, value_parser = open_unit_interval)]
        prevalence: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run one benchmark set and write its metric tables
    Experiment {
        #[arg(long, value_parser = parse_with::<SetId>)]
        set: SetId,
        #[arg(long, default_value_t = DEFAULT_N)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_REPS as u64, value_parser = clap::value_parser!(u64).range(1..))]
        reps: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        tri: TriArgs,
        #[command(flatten)]
        pr: PrArgs,
        #[arg(long)]
        out_dir: PathBuf,
        /// Also write per-row roc/pr/tri point files
        #[arg(long)]
        emit_curves: bool,
    },
}

fn parse_with<T: std::str::FromStr<Err = triscore::EvalError>>(s: &str) -> Result<T, String> {
    s.parse().map_err(|e: triscore::EvalError| e.to_string())
}

fn finite(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err("must be finite".into())
    }
}

fn positive_finite(s: &str) -> Result<f64, String> {
    finite(s).and_then(|v| if v > 0.0 { Ok(v) } else { Err("must be > 0".into()) })
}

fn unit_interval(s: &str) -> Result<f64, String> {
    finite(s).and_then(|v| {
        if (0.0..=1.0).contains(&v) {
            Ok(v)
        } else {
            Err("must lie in [0, 1]".into())
        }
    })
}

fn open_unit_interval(s: &str) -> Result<f64, String> {
    finite(s).and_then(|v| {
        if v > 0.0 && v < 1.0 {
            Ok(v)
        } else {
            Err("must lie strictly between 0 and 1".into())
        }
    })
}

type MetricColumn = (&'static str, fn(&RowStats) -> Summary);

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            code: ExitCode::Success.code(),
            stdout,
            stderr: String::new(),
        }
    }

    fn failed(err: &CliError) -> Self {
        Self {
            code: err.exit_code().code(),
            stdout: String::new(),
            stderr: format!("error: {err}\n"),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome::ok(rendered),
                _ => Outcome {
                    code: ExitCode::Usage.code(),
                    stdout: String::new(),
                    stderr: rendered,
                },
            };
        }
    };
    match execute(cli.command, stdin) {
        Ok(stdout) => Outcome::ok(stdout),
        Err(e) => Outcome::failed(&e),
    }
}

fn read_input(file: Option<&Path>, stdin: &mut dyn Read) -> Result<scorefile::ScoreFile, CliError> {
    let mut bytes = Vec::new();
    match file {
        None => stdin.read_to_end(&mut bytes),
        Some(p) if p == Path::new("-") => stdin.read_to_end(&mut bytes),
        Some(p) => fs::File::open(p).and_then(|mut f| f.read_to_end(&mut bytes)),
    }
    .map_err(|e| {
        let name = file.map_or_else(|| "standard input".into(), |p| p.display().to_string());
        CliError::Usage(format!("cannot read {name}: {e}"))
    })?;
    scorefile::parse(&bytes)
}

fn write_file(path: PathBuf, contents: &str) -> Result<(), CliError> {
    fs::write(&path, contents).map_err(|source| CliError::OutputIo { path, source })
}

fn execute(command: Command, stdin: &mut dyn Read) -> Result<String, CliError> {
    match command {
        Command::Eval {
            file,
            threshold,
            tri,
            pr,
        } => {
            let input = read_input(file.as_deref(), stdin)?;
            let report = Report::build(&input, threshold, &tri.config()?, pr.interpolation)?;
            Ok(report.render())
        }
        Command::Curve { kind, file, tri } => {
            let input = read_input(file.as_deref(), stdin)?;
            report::curve_for(&input, kind, &tri.config()?)
        }
        Command::Simulate {
            alpha,
            beta,
            n,
            prevalence,
            seed,
        } => {
            let params = PredictorParams::new(alpha, beta)?;
            let cfg = SimConfig::new(n, prevalence, seed)
                .map_err(|e| CliError::Usage(format!("invalid --n/--prevalence: {e}")))?;
            Ok(scorefile::render(&simulate(&cfg, &params)))
        }
        Command::Experiment {
            set,
            n,
            reps,
            seed,
            tri,
            pr,
            out_dir,
            emit_curves,
        } => {
            let mut spec = ExperimentSpec::new(set);
            spec.n = n;
            spec.reps = reps as usize;
            spec.seed = seed;
            spec.tri_config = tri.config()?;
            spec.pr_interpolation = pr.interpolation;
            spec.validate()
                .map_err(|e| CliError::Usage(format!("invalid --n for set {set}: {e}")))?;

            let table = run_experiment(&spec)?;
            fs::create_dir_all(&out_dir).map_err(|source| CliError::OutputIo {
                path: out_dir.clone(),
                source,
            })?;
            let columns: [MetricColumn; 3] = [
                ("auprc", |r| r.auprc),
                ("auroc", |r| r.auroc),
                ("tri_score", |r| r.tri_score),
            ];
            for (name, pick) in columns {
                write_file(out_dir.join(format!("{name}.csv")), &report::table_csv(&table, pick))?;
            }
            if emit_curves {
                for kind in FigureKind::ALL {
                    for (i, series) in emit_figure_points(&spec, kind)?.iter().enumerate() {
                        let path = out_dir.join(format!("{}_row{}.csv", kind.as_str(), i + 1));
                        write_file(path, &report::series_csv(series))?;
                    }
                }
            }
            Ok(report::table_csv(&table, |r| r.tri_score))
        }
    }
}
