//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any criterion fails.

use std::io::Write;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, Output, Stdio};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use triscore::curves::{auprc, auroc, auroc_pairwise, pr_curve, roc_curve, threshold_sweep};
use triscore::experiments::{run_experiment, MetricTable};
use triscore::sim::{analytic_auroc, simulate, PredictorParams, SimConfig};
use triscore::trimetric::{ratio_transform, tri_evaluate};
use triscore::{ConfusionMatrix, Dataset, ExperimentSpec, Interpolation, LabeledScore, RatioMode, SetId, TriConfig};

type Verdict = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fmt(values: &[f64]) -> String {
    let parts: Vec<_> = values.iter().map(|v| format!("{v:.4}")).collect();
    format!("[{}]", parts.join(", "))
}

fn strictly_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] > w[0])
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn timed_run(set: SetId) -> (MetricTable, Duration) {
    let start = Instant::now();
    let table = run_experiment(&ExperimentSpec::new(set)).expect("default spec runs");
    (table, start.elapsed())
}

struct Tables {
    a: (MetricTable, Duration),
    b: MetricTable,
    c: MetricTable,
    d: MetricTable,
}

fn ac1_auroc_constancy(t: &Tables) -> Verdict {
    let (table, elapsed) = &t.a;
    let means = table.means(|r| r.auroc);
    ensure(means.iter().all(|m| (m - 0.820).abs() <= 0.01), || {
        format!("auroc means {}", fmt(&means))
    })?;
    ensure(*elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("auroc means {} in {elapsed:.2?}", fmt(&means)))
}

fn ac2_auprc_prevalence(t: &Tables) -> Verdict {
    let (table, elapsed) = &t.a;
    let published = [0.496, 0.557, 0.614, 0.656, 0.695];
    let means = table.means(|r| r.auprc);
    for (m, p) in means.iter().zip(published) {
        ensure((m - p).abs() <= 0.03, || format!("auprc {m:.4} vs published {p}"))?;
    }
    ensure(strictly_increasing(&means), || {
        format!("not increasing {}", fmt(&means))
    })?;
    ensure(*elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("auprc means {}", fmt(&means)))
}

fn ac3_closed_form() -> Verdict {
    let start = Instant::now();
    // independent gate on the overlap constant: midpoint quadrature of
    // P(U[0.25,1] > U[0,0.75])
    let steps = 2_000_000;
    let h = 1.0 / steps as f64;
    let overlap: f64 = (0..steps)
        .map(|i| ((0.25 + 0.75 * (i as f64 + 0.5) * h) / 0.75).min(1.0) * h)
        .sum();
    ensure((overlap - 7.0 / 9.0).abs() < 1e-9, || {
        format!("quadrature gives {overlap}")
    })?;

    let levels = [0.0, 0.25, 0.5, 0.75, 1.0];
    let mut worst: f64 = 0.0;
    for (i, &a) in levels.iter().enumerate() {
        for (j, &b) in levels.iter().enumerate() {
            let p = PredictorParams::new(a, b).unwrap();
            let cfg = SimConfig::new(100_000, 0.1, 1000 + (5 * i + j) as u64).unwrap();
            let d = simulate(&cfg, &p);
            let e = auroc(&roc_curve(&threshold_sweep(&d).unwrap())).unwrap();
            let gap = (e - analytic_auroc(&p)).abs();
            ensure(gap <= 0.01, || {
                format!("({a}, {b}): empirical {e:.5}, closed form {:.5}", analytic_auroc(&p))
            })?;
            worst = worst.max(gap);
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "overlap {overlap:.12}; worst |gap| {worst:.5} over 25 grid points in {elapsed:.2?}"
    ))
}

fn ac4_table3(t: &Tables) -> Verdict {
    let published = [
        (&t.b, [0.811, 0.820, 0.829, 0.840, 0.850]),
        (&t.c, [0.889, 0.880, 0.870, 0.860, 0.849]),
        (&t.d, [0.883, 0.880, 0.877, 0.874, 0.874]),
    ];
    let mut worst: f64 = 0.0;
    for (table, column) in published {
        for (i, (m, p)) in table.means(|r| r.auroc).iter().zip(column).enumerate() {
            let gap = (m - p).abs();
            ensure(gap <= 0.01, || {
                format!("set {} row {}: {m:.4} vs {p}", table.spec.set_id, i + 1)
            })?;
            worst = worst.max(gap);
        }
    }
    Ok(format!("15 entries, worst |gap| {worst:.4}"))
}

fn ac5_tri_trends(t: &Tables) -> Verdict {
    let b = t.b.means(|r| r.tri_score);
    let c = t.c.means(|r| r.tri_score);
    let d = t.d.means(|r| r.tri_score);
    let a = t.a.0.means(|r| r.tri_score);
    ensure(strictly_increasing(&b), || format!("set b {}", fmt(&b)))?;
    ensure(strictly_decreasing(&c), || format!("set c {}", fmt(&c)))?;
    ensure(strictly_increasing(&d), || format!("set d {}", fmt(&d)))?;
    let spread = a.iter().cloned().fold(f64::MIN, f64::max) - a.iter().cloned().fold(f64::MAX, f64::min);
    ensure(spread <= 0.05, || format!("set a spread {spread:.4}"))?;
    Ok(format!(
        "b {} c {} d {} a-spread {spread:.4}",
        fmt(&b),
        fmt(&c),
        fmt(&d)
    ))
}

fn ac6_disagreement(t: &Tables) -> Verdict {
    let roc = t.d.means(|r| r.auroc);
    let tri = t.d.means(|r| r.tri_score);
    ensure(strictly_decreasing(&roc), || format!("auroc {}", fmt(&roc)))?;
    ensure(strictly_increasing(&tri), || format!("tri {}", fmt(&tri)))?;
    Ok(format!("auroc {} vs tri {}", fmt(&roc), fmt(&tri)))
}

fn random_tied_dataset(rng: &mut ChaCha8Rng) -> Dataset {
    let len = rng.random_range(2..=200);
    let levels = rng.random_range(1..=40u32);
    let mut pairs: Vec<(f64, bool)> = (0..len)
        .map(|_| (rng.random_range(0..levels) as f64 / levels as f64, rng.random_bool(0.4)))
        .collect();
    pairs[0].1 = true;
    pairs[1].1 = false;
    Dataset::from_pairs(pairs).unwrap()
}

fn ac7_oracle_equivalence() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for i in 0..1000 {
        let d = random_tied_dataset(&mut rng);
        let trapezoid = auroc(&roc_curve(&threshold_sweep(&d).unwrap())).unwrap();
        let pairwise = auroc_pairwise(&d).unwrap();
        let gap = (trapezoid - pairwise).abs();
        ensure(gap <= 1e-9, || format!("dataset {i}: {trapezoid} vs {pairwise}"))?;
        worst = worst.max(gap);
    }
    Ok(format!("1000 datasets, worst |gap| {worst:e}"))
}

fn repeated(data: &Dataset, k: usize, only_negatives: bool) -> Dataset {
    data.items()
        .iter()
        .flat_map(|i| {
            let copies = if only_negatives && i.label().is_positive() {
                1
            } else {
                k
            };
            std::iter::repeat_n(*i, copies)
        })
        .collect()
}

fn ac8_exact_invariants() -> Verdict {
    let cfg = TriConfig::default();

    for (n_pos, n_neg) in [(1, 1), (3, 17), (40, 5)] {
        let d: Dataset = (0..n_pos)
            .map(|i| LabeledScore::new(0.6 + i as f64 * 1e-3, true.into()).unwrap())
            .chain((0..n_neg).map(|i| LabeledScore::new(0.4 - i as f64 * 1e-3, false.into()).unwrap()))
            .collect();
        let s = threshold_sweep(&d).unwrap();
        let values = [
            auroc(&roc_curve(&s)).unwrap(),
            auprc(&pr_curve(&s), Interpolation::Linear).unwrap(),
            auprc(&pr_curve(&s), Interpolation::Step).unwrap(),
            tri_evaluate(&s, &cfg).unwrap().score,
        ];
        ensure(values.iter().all(|&v| v == 1.0), || {
            format!("perfect separation gave {values:?}")
        })?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut samples: Vec<Dataset> = (0..100).map(|_| random_tied_dataset(&mut rng)).collect();
    samples.push(simulate(
        &SimConfig::new(2000, 0.1, 4).unwrap(),
        &PredictorParams::new(0.1, 0.1).unwrap(),
    ));
    for (i, d) in samples.iter().enumerate() {
        let s1 = threshold_sweep(d).unwrap();
        let tri1 = tri_evaluate(&s1, &cfg).unwrap();
        for k in [2, 3, 7] {
            let sk = threshold_sweep(&repeated(d, k, false)).unwrap();
            ensure(roc_curve(&s1) == roc_curve(&sk), || {
                format!("dataset {i} x{k}: roc moved")
            })?;
            ensure(pr_curve(&s1) == pr_curve(&sk), || format!("dataset {i} x{k}: pr moved"))?;
            ensure(
                auroc(&roc_curve(&s1)).unwrap() == auroc(&roc_curve(&sk)).unwrap()
                    && auprc(&pr_curve(&s1), Interpolation::Linear).unwrap()
                        == auprc(&pr_curve(&sk), Interpolation::Linear).unwrap(),
                || format!("dataset {i} x{k}: areas moved"),
            )?;
            ensure(tri1 == tri_evaluate(&sk, &cfg).unwrap(), || {
                format!("dataset {i} x{k}: tri moved")
            })?;
            let neg = threshold_sweep(&repeated(d, k, true)).unwrap();
            ensure(tri1 == tri_evaluate(&neg, &cfg).unwrap(), || {
                format!("dataset {i} negatives x{k}: tri moved")
            })?;
        }
    }

    for mode in [RatioMode::OddsNormalized, RatioMode::Raw] {
        let cfg = TriConfig::new(100.0, mode, true).unwrap();
        for tp in 1..=40 {
            for fp in 1..=40 {
                let (n_pos, n_neg) = (40, 80);
                let single = ratio_transform(tp, fp, n_pos, n_neg, &cfg).unwrap();
                if single >= 1.0 {
                    continue;
                }
                let double = ratio_transform(tp, 2 * fp, n_pos, n_neg, &cfg).unwrap();
                ensure(double * 2.0 == single, || {
                    format!("halving failed at tp={tp} fp={fp} ({mode})")
                })?;
            }
        }
    }

    for tp in 0..=30 {
        for fp in 0..=30 {
            let r = ConfusionMatrix::new(tp, fp, 3, 3).rates().unwrap();
            if let Some(p) = r.precision.filter(|&p| p < 1.0) {
                let ratio = r.tp_fp_ratio.finite().ok_or("ratio marker with precision < 1")?;
                ensure((ratio - p / (1.0 - p)).abs() <= 1e-12, || {
                    format!("tp={tp} fp={fp}: {ratio} vs {p}")
                })?;
            }
        }
    }
    Ok("perfect separation, x2/x3/x7 duplication, negative duplication, halving law, precision odds identity".into())
}

fn triscore_cmd() -> Command {
    Command::new(env!("CARGO_BIN_EXE_triscore"))
}

fn run_with_stdin(args: &[&str], stdin: &[u8]) -> Output {
    let mut child = triscore_cmd()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn triscore");
    child.stdin.take().unwrap().write_all(stdin).unwrap();
    child.wait_with_output().unwrap()
}

fn code_of(out: &Output) -> i32 {
    out.status.code().unwrap_or(-1)
}

fn ac9_cli_contract() -> Verdict {
    let sim_args = [
        "simulate",
        "--alpha",
        "0.1",
        "--beta",
        "0.1",
        "--n",
        "3000",
        "--prevalence",
        "0.1",
        "--seed",
        "11",
    ];
    let sim = run_with_stdin(&sim_args, b"");
    ensure(code_of(&sim) == 0, || format!("simulate exit {}", code_of(&sim)))?;
    let sim_again = run_with_stdin(&sim_args, b"");
    ensure(sim.stdout == sim_again.stdout, || {
        "simulate output differs between runs".into()
    })?;

    let eval = run_with_stdin(&["eval"], &sim.stdout);
    ensure(code_of(&eval) == 0, || {
        format!(
            "eval exit {}: {}",
            code_of(&eval),
            String::from_utf8_lossy(&eval.stderr)
        )
    })?;
    ensure(run_with_stdin(&["eval"], &sim.stdout).stdout == eval.stdout, || {
        "eval rerun differs".into()
    })?;
    for kind in ["roc", "pr", "tri"] {
        let out = run_with_stdin(&["curve", kind], &sim.stdout);
        ensure(code_of(&out) == 0, || format!("curve {kind} exit {}", code_of(&out)))?;
    }

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let exp = |sub: &str| {
        let out_dir = dir.path().join(sub);
        let out = run_with_stdin(
            &[
                "experiment",
                "--set",
                "d",
                "--n",
                "500",
                "--reps",
                "2",
                "--seed",
                "3",
                "--emit-curves",
                "--out-dir",
                out_dir.to_str().unwrap(),
            ],
            b"",
        );
        (out, out_dir)
    };
    let (first, d1) = exp("one");
    let (second, d2) = exp("two");
    ensure(code_of(&first) == 0 && first.stdout == second.stdout, || {
        "experiment reruns differ".into()
    })?;
    for name in [
        "auprc.csv",
        "auroc.csv",
        "tri_score.csv",
        "roc_row1.csv",
        "pr_row5.csv",
        "tri_row3.csv",
    ] {
        let read = |p: &Path| std::fs::read(p.join(name)).map_err(|e| format!("{name}: {e}"));
        ensure(read(&d1)? == read(&d2)?, || format!("{name} differs between runs"))?;
    }

    let bad_label = b"score,label\n0.1,0\n0.2,1\n0.3,0\n0.4,1\n0.5,0\n0.6,2\n";
    let out = run_with_stdin(&["eval"], bad_label);
    let stderr = String::from_utf8_lossy(&out.stderr);
    ensure(code_of(&out) == 2 && stderr.contains("line 7"), || {
        format!("bad label: exit {} {stderr}", code_of(&out))
    })?;

    let out = run_with_stdin(&["eval"], b"score,label\n0.9,1\n0.3,1\n");
    ensure(code_of(&out) == 3, || format!("single class: exit {}", code_of(&out)))?;

    let out = run_with_stdin(&["eval", "--no-such-flag"], b"");
    ensure(code_of(&out) == 64, || format!("unknown flag: exit {}", code_of(&out)))?;

    let out = run_with_stdin(&["simulate", "--alpha", "0.1", "--beta", "7"], b"");
    let stderr = String::from_utf8_lossy(&out.stderr);
    ensure(code_of(&out) == 64 && stderr.contains("--beta"), || {
        format!("out of range: exit {} {stderr}", code_of(&out))
    })?;

    let blocker = dir.path().join("file");
    std::fs::write(&blocker, b"not a directory").unwrap();
    let out = run_with_stdin(
        &[
            "experiment",
            "--set",
            "a",
            "--n",
            "200",
            "--reps",
            "1",
            "--out-dir",
            blocker.join("out").to_str().unwrap(),
        ],
        b"",
    );
    ensure(code_of(&out) == 73, || {
        format!("unwritable out dir: exit {}", code_of(&out))
    })?;

    Ok("round trip, byte-identical reruns, exit codes 2/3/64/73".into())
}

fn main() {
    let mut failures = 0;
    let mut report = |id: &str, name: &str, verdict: Result<Verdict, String>| {
        let verdict = verdict.and_then(|v| v);
        match &verdict {
            Ok(detail) => println!("PASS {id} {name}: {detail}"),
            Err(detail) => {
                failures += 1;
                println!("FAIL {id} {name}: {detail}");
            }
        }
    };
    let guarded = |f: &dyn Fn() -> Verdict| {
        panic::catch_unwind(AssertUnwindSafe(f)).map_err(|e| {
            e.downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into())
        })
    };

    let tables = Tables {
        a: timed_run(SetId::A),
        b: timed_run(SetId::B).0,
        c: timed_run(SetId::C).0,
        d: timed_run(SetId::D).0,
    };

    report(
        "AC1",
        "auroc constant across prevalence (set a)",
        guarded(&|| ac1_auroc_constancy(&tables)),
    );
    report(
        "AC2",
        "auprc tracks prevalence (set a)",
        guarded(&|| ac2_auprc_prevalence(&tables)),
    );
    report("AC3", "closed-form auroc oracle", guarded(&ac3_closed_form));
    report("AC4", "auroc table for sets b/c/d", guarded(&|| ac4_table3(&tables)));
    report("AC5", "tri-score trends", guarded(&|| ac5_tri_trends(&tables)));
    report(
        "AC6",
        "roc and tri disagree on set d",
        guarded(&|| ac6_disagreement(&tables)),
    );
    report(
        "AC7",
        "trapezoid auroc equals pairwise auroc",
        guarded(&ac7_oracle_equivalence),
    );
    report("AC8", "exact invariants", guarded(&ac8_exact_invariants));
    report("AC9", "cli contract", guarded(&ac9_cli_contract));

    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
