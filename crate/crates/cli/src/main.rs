use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sparsiboost_cli::compare::Status;
use sparsiboost_cli::io::{
    load_dataset, load_margin_matrix, load_model, save_curve, save_dataset, save_model, write_json,
    ModelFile,
};
use sparsiboost_cli::synthetic::synthetic_dataset;
use sparsiboost_cli::{run_compare, write_outputs, CliError, Result, RunConfig};
use sparsiboost_core::{
    accuracy, adaboost_v, auc, bias_correct, build_margin_matrix, cumulative_margin_curve,
    importance_sample, margins, predict_scores, sparsify, BoostConfig, Ensemble, MarginMatrix,
    Seed, WeightVector,
};

#[derive(Parser)]
#[command(
    name = "sparsiboost",
    version,
    about = "Sparsify boosted voting classifiers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train AdaBoostV on decision stumps.
    Train {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value_t = 100)]
        rounds: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Reduce a model or margin-matrix weights to at most T hypotheses.
    Sparsify {
        #[command(flatten)]
        input: WeightedInput,
        #[arg(short = 'T', long)]
        target: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        ks: Option<f64>,
        #[arg(long)]
        kh: Option<f64>,
        #[arg(long)]
        out: PathBuf,
        /// Where to write the sparsification report.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Importance-sample T hypotheses.
    Sample {
        #[command(flatten)]
        input: WeightedInput,
        #[arg(short = 'T', long)]
        target: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Accuracy, corrected accuracy and AUC of a model on a dataset.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        /// Dataset used to pick the decision offset (defaults to --data).
        #[arg(long)]
        calibrate: Option<PathBuf>,
    },
    /// Cumulative margin curve as CSV.
    Margins {
        #[command(flatten)]
        input: WeightedInput,
        #[arg(long)]
        out: PathBuf,
    },
    /// Full, truncated, sparsified and sampled models side by side.
    Compare(CompareArgs),
    /// Write a seeded synthetic dataset.
    Synth {
        #[arg(long, default_value_t = 500)]
        n: usize,
        #[arg(long, default_value_t = 5)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct WeightedInput {
    /// Margin-matrix file (weights included).
    #[arg(long, conflicts_with_all = ["model", "data"])]
    matrix: Option<PathBuf>,
    #[arg(long, requires = "data")]
    model: Option<PathBuf>,
    #[arg(long, requires = "model")]
    data: Option<PathBuf>,
}

enum Loaded {
    Matrix(MarginMatrix, WeightVector),
    Model(Ensemble, MarginMatrix),
}

impl Loaded {
    fn margin_matrix(&self) -> &MarginMatrix {
        match self {
            Loaded::Matrix(u, _) | Loaded::Model(_, u) => u,
        }
    }

    fn weights(&self) -> &WeightVector {
        match self {
            Loaded::Matrix(_, w) => w,
            Loaded::Model(e, _) => e.weights(),
        }
    }

    fn output(&self, w: WeightVector) -> Result<ModelFile> {
        Ok(match self {
            Loaded::Matrix(..) => ModelFile::from_weights(&w),
            Loaded::Model(e, _) => ModelFile::from_ensemble(&e.with_weights(w)?.pruned()),
        })
    }
}

impl WeightedInput {
    fn load(&self) -> Result<Loaded> {
        match (&self.matrix, &self.model, &self.data) {
            (Some(m), _, _) => {
                let (u, w) = load_margin_matrix(m)?;
                Ok(Loaded::Matrix(u, w))
            }
            (None, Some(model), Some(data)) => {
                let e = load_model(model)?.to_ensemble()?.normalized();
                let ds = load_dataset(data)?;
                let u = build_margin_matrix(&ds, e.hypotheses())?;
                Ok(Loaded::Model(e, u))
            }
            _ => Err(CliError::Config(
                "give --matrix, or --model with --data".into(),
            )),
        }
    }
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long)]
    test: Option<PathBuf>,
    #[arg(long)]
    matrix: Option<PathBuf>,
    #[arg(long)]
    matrix_mode: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    rounds: Option<usize>,
    #[arg(short = 'T', long)]
    target: Option<usize>,
    #[arg(long)]
    ks: Option<f64>,
    #[arg(long)]
    kh: Option<f64>,
    #[arg(long)]
    cv: Option<f64>,
    #[arg(long)]
    cb: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl CompareArgs {
    fn config(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        let cwd = Path::new("");
        let paths = [
            ("dataset", &self.data),
            ("test", &self.test),
            ("matrix", &self.matrix),
            ("out", &self.out),
        ];
        for (key, p) in paths {
            if let Some(p) = p {
                cfg.set(key, &p.to_string_lossy(), cwd)?;
            }
        }
        if self.matrix_mode || self.matrix.is_some() && self.data.is_none() {
            cfg.matrix_mode = true;
        }
        if let Some(s) = self.seed {
            cfg.seed = Seed(s);
        }
        if self.rounds.is_some() {
            cfg.rounds = self.rounds;
        }
        if let Some(t) = self.target {
            cfg.target = t;
        }
        for (slot, v) in [
            (&mut cfg.ks, self.ks),
            (&mut cfg.kh, self.kh),
            (&mut cfg.cv, self.cv),
            (&mut cfg.cb, self.cb),
        ] {
            if let Some(v) = v {
                *slot = v;
            }
        }
        Ok(cfg)
    }
}

fn print_json(value: &serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("json value")
    );
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Train { data, rounds, out } => {
            let ds = load_dataset(&data)?;
            let outcome = adaboost_v(&ds, &BoostConfig::new(rounds))?;
            save_model(&ModelFile::from_ensemble(&outcome.ensemble), &out)?;
            if outcome.early_stopped {
                eprintln!(
                    "stopped after {} rounds: no stump with positive edge",
                    outcome.ensemble.len()
                );
            }
        }
        Command::Sparsify {
            input,
            target,
            seed,
            ks,
            kh,
            out,
            report,
        } => {
            let mut cfg = RunConfig::default();
            cfg.ks = ks.unwrap_or(cfg.ks);
            cfg.kh = kh.unwrap_or(cfg.kh);
            let loaded = input.load()?;
            let t = target.min(loaded.weights().len());
            let (w, rep) = sparsify(
                loaded.margin_matrix(),
                loaded.weights(),
                t,
                &cfg.sparsify_config(),
                Seed(seed),
            )?;
            save_model(&loaded.output(w)?, &out)?;
            match report {
                Some(p) => write_json(&rep, &p)?,
                None => eprintln!(
                    "support {} -> {} in {} rounds, error {}",
                    rep.initial_support, rep.final_support, rep.halving_rounds, rep.achieved_error
                ),
            }
        }
        Command::Sample {
            input,
            target,
            seed,
            out,
        } => {
            let loaded = input.load()?;
            let w = importance_sample(loaded.weights(), target, Seed(seed))?;
            save_model(&loaded.output(w)?, &out)?;
        }
        Command::Eval {
            model,
            data,
            calibrate,
        } => {
            let e = load_model(&model)?.to_ensemble()?.normalized();
            let ds = load_dataset(&data)?;
            let scores = predict_scores(&e, &ds)?;
            let offset = match &calibrate {
                Some(p) => {
                    let cal = load_dataset(p)?;
                    bias_correct(&predict_scores(&e, &cal)?, cal.labels())?.0
                }
                None => bias_correct(&scores, ds.labels())?.0,
            };
            print_json(&serde_json::json!({
                "hypotheses": e.len(),
                "accuracy": accuracy(&scores, ds.labels(), 0.0)?,
                "offset": offset,
                "corrected_accuracy": accuracy(&scores, ds.labels(), offset)?,
                "auc": auc(&scores, ds.labels()).ok(),
            }));
        }
        Command::Margins { input, out } => {
            let loaded = input.load()?;
            let m = margins(loaded.margin_matrix(), loaded.weights())?;
            save_curve(&cumulative_margin_curve(&m)?, &out)?;
        }
        Command::Compare(args) => {
            let cfg = args.config()?;
            let report = run_compare(&cfg)?;
            let dir = cfg
                .out
                .clone()
                .unwrap_or_else(|| PathBuf::from("compare-out"));
            write_outputs(&report, &dir)?;
            for r in &report.records {
                eprintln!(
                    "{:<10} hypotheses {:>4}  min margin {:>8.4}  sup error {:>7.4}  test acc {}",
                    r.method.name(),
                    r.hypotheses,
                    r.min_margin,
                    r.sup_norm_error,
                    r.test_accuracy.map_or("-".into(), |a| format!("{a:.4}")),
                );
            }
            if report.status == Status::Failed {
                eprintln!(
                    "compare failed: {}",
                    report.error.as_deref().unwrap_or("unknown error")
                );
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Synth { n, d, seed, out } => {
            save_dataset(&synthetic_dataset(n, d, Seed(seed))?, &out)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
