//! The comparison driver: a full boosted model against three models with at
//! most `T` hypotheses (retrained, sparsified, importance-sampled).

use std::fs;
use std::path::Path;
use std::time::Instant;

use rand::seq::SliceRandom;
use serde::Serialize;
use sparsiboost_core::margin::sup_diff;
use sparsiboost_core::{
    accuracy, adaboost_v, auc, bias_correct, build_margin_matrix, cumulative_margin_curve,
    dictionary_multiplier, importance_sample, lp_optimal_margin, margins, predict_scores,
    sparsification_rate, sparsify, truncate_top, BoostConfig, Dataset, Ensemble, MarginMatrix,
    SparsifyReport, WeightVector,
};

use crate::config::RunConfig;
use crate::error::{io_err, Result};
use crate::io::{load_dataset, load_margin_matrix, save_curve, write_json};

pub const SCHEMA_VERSION: u32 = 1;

// seed streams
const SPLIT: u64 = 0;
const SPARSIFY: u64 = 1;
const SAMPLE: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Full,
    Truncated,
    Sparsified,
    Sampled,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Full => "full",
            Method::Truncated => "truncated",
            Method::Sparsified => "sparsified",
            Method::Sampled => "sampled",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodRecord {
    pub method: Method,
    pub hypotheses: usize,
    pub hypothesis_bound: usize,
    pub min_margin: f64,
    /// `‖m_full - m‖∞` over the training margins.
    pub sup_norm_error: f64,
    /// `ρ* - min_margin` against the LP optimum over the full dictionary.
    pub gap: Option<f64>,
    pub gap_bound: Option<f64>,
    /// Decision offset chosen on the training scores.
    pub offset: f64,
    pub train_accuracy: Option<f64>,
    pub test_accuracy: Option<f64>,
    pub train_auc: Option<f64>,
    pub test_auc: Option<f64>,
    /// Sorted training margins with their cumulative fractions.
    pub curve: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Failed,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Timing {
    pub total_seconds: f64,
    pub methods: Vec<(String, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    pub schema_version: u32,
    pub status: Status,
    pub error: Option<String>,
    pub mode: &'static str,
    pub config: RunConfig,
    pub n_train: usize,
    pub n_test: Option<usize>,
    pub dictionary_multiplier: Option<usize>,
    pub rounds: Option<usize>,
    pub boost_early_stopped: bool,
    pub optimal_margin: Option<f64>,
    pub sparsify: Option<SparsifyReport>,
    pub records: Vec<MethodRecord>,
    /// Wall-clock only; the one field that differs between identical runs.
    pub timing: Timing,
}

impl CompareReport {
    fn new(cfg: &RunConfig) -> Self {
        CompareReport {
            schema_version: SCHEMA_VERSION,
            status: Status::Ok,
            error: None,
            mode: if cfg.matrix_mode { "matrix" } else { "dataset" },
            config: cfg.clone(),
            n_train: 0,
            n_test: None,
            dictionary_multiplier: None,
            rounds: None,
            boost_early_stopped: false,
            optimal_margin: None,
            sparsify: None,
            records: Vec::new(),
            timing: Timing::default(),
        }
    }

    pub fn record(&self, method: Method) -> Option<&MethodRecord> {
        self.records.iter().find(|r| r.method == method)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Report JSON with the `timing` field removed, for run-to-run comparison.
pub fn without_timing(json: &str) -> serde_json::Result<String> {
    let mut v: serde_json::Value = serde_json::from_str(json)?;
    if let Some(obj) = v.as_object_mut() {
        obj.remove("timing");
    }
    serde_json::to_string(&v)
}

/// Seeded train/test split; the test side gets `⌊fraction·n⌋` points, at
/// least one, and the training side keeps at least one.
pub fn split_dataset(
    ds: &Dataset,
    fraction: f64,
    rng: &mut impl rand::Rng,
) -> sparsiboost_core::Result<(Dataset, Dataset)> {
    let n = ds.len();
    if n < 2 {
        return Err(sparsiboost_core::Error::InvalidArgument(
            "need at least two points to split".into(),
        ));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let n_test = ((fraction * n as f64).floor() as usize).clamp(1, n - 1);
    let (test, train) = order.split_at(n_test);
    let mut train = train.to_vec();
    let mut test = test.to_vec();
    train.sort_unstable();
    test.sort_unstable();
    Ok((ds.subset(&train)?, ds.subset(&test)?))
}

struct Scored {
    train: Vec<f64>,
    test: Option<Vec<f64>>,
}

fn label_margins(scores: &[f64], labels: &[i8]) -> Vec<f64> {
    scores
        .iter()
        .zip(labels)
        .map(|(s, &y)| s * f64::from(y))
        .collect()
}

/// Scores of one model and the labels they are judged against.
struct Labelled<'a> {
    scores: &'a Scored,
    train: &'a [i8],
    test: Option<&'a [i8]>,
    correct_bias: bool,
}

struct Inputs {
    full_margins: Vec<f64>,
    rho: Option<f64>,
}

impl Inputs {
    fn record(
        &self,
        method: Method,
        hypotheses: usize,
        bound: usize,
        train_margins: Vec<f64>,
        gap_bound: Option<f64>,
        labelled: Option<Labelled>,
    ) -> sparsiboost_core::Result<MethodRecord> {
        let min_margin = train_margins.iter().copied().fold(f64::INFINITY, f64::min);
        let sup_norm_error = sup_diff(&self.full_margins, &train_margins);
        let mut rec = MethodRecord {
            method,
            hypotheses,
            hypothesis_bound: bound,
            min_margin,
            sup_norm_error,
            gap: self.rho.map(|r| r - min_margin),
            gap_bound,
            offset: 0.0,
            train_accuracy: None,
            test_accuracy: None,
            train_auc: None,
            test_auc: None,
            curve: cumulative_margin_curve(&train_margins)?,
        };
        if let Some(Labelled {
            scores,
            train: train_labels,
            test: test_labels,
            correct_bias,
        }) = labelled
        {
            let offset = if correct_bias {
                bias_correct(&scores.train, train_labels)?.0
            } else {
                0.0
            };
            rec.offset = offset;
            rec.train_accuracy = Some(accuracy(&scores.train, train_labels, offset)?);
            rec.train_auc = auc(&scores.train, train_labels).ok();
            if let (Some(test), Some(labels)) = (&scores.test, test_labels) {
                rec.test_accuracy = Some(accuracy(test, labels, offset)?);
                rec.test_auc = auc(test, labels).ok();
            }
        }
        Ok(rec)
    }
}

fn timed<T>(timing: &mut Timing, name: &str, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    timing
        .methods
        .push((name.to_string(), start.elapsed().as_secs_f64()));
    out
}

fn run_dataset(cfg: &RunConfig, report: &mut CompareReport) -> Result<()> {
    let data = load_dataset(cfg.dataset.as_deref().expect("validated"))?;
    let (train, test) = match &cfg.test {
        Some(p) => (data, load_dataset(p)?),
        None => split_dataset(&data, cfg.test_fraction, &mut cfg.seed.derive(SPLIT).rng())?,
    };
    if test.dim() != train.dim() {
        return Err(sparsiboost_core::Error::DimensionMismatch {
            expected: train.dim(),
            found: test.dim(),
        }
        .into());
    }
    let n = train.len();
    let t = cfg.target;
    report.n_train = n;
    report.n_test = Some(test.len());
    let c = dictionary_multiplier(n, t);
    let rounds = cfg.rounds.unwrap_or(c * t);
    report.dictionary_multiplier = Some(c);
    report.rounds = Some(rounds);

    let scored = |e: &Ensemble| -> sparsiboost_core::Result<Scored> {
        Ok(Scored {
            train: predict_scores(e, &train)?.into_vec(),
            test: Some(predict_scores(e, &test)?.into_vec()),
        })
    };

    let mut timing = Timing::default();
    let boosted = timed(&mut timing, "full", || {
        adaboost_v(&train, &BoostConfig::new(rounds))
    })?;
    report.boost_early_stopped = boosted.early_stopped;
    let full = boosted.ensemble.normalized();
    let u: MarginMatrix = build_margin_matrix(&train, full.hypotheses())?;
    let full_scores = scored(&full)?;
    let full_margins = label_margins(&full_scores.train, train.labels());
    let rho = lp_optimal_margin(&u)?.0;
    report.optimal_margin = Some(rho);
    let inputs = Inputs {
        full_margins: full_margins.clone(),
        rho: Some(rho),
    };
    let labels = Some(test.labels());
    let ln_n = (n.max(2) as f64).ln();
    report.records.push(inputs.record(
        Method::Full,
        full.len(),
        rounds,
        full_margins,
        Some(cfg.cv * (ln_n / full.len() as f64).sqrt()),
        Some(Labelled {
            scores: &full_scores,
            train: train.labels(),
            test: labels,
            correct_bias: false,
        }),
    )?);

    let truncated = timed(&mut timing, "truncated", || {
        adaboost_v(&train, &BoostConfig::new(t))
    })?
    .ensemble
    .normalized();
    let s = scored(&truncated)?;
    let m = label_margins(&s.train, train.labels());
    report.records.push(inputs.record(
        Method::Truncated,
        truncated.len(),
        t,
        m,
        None,
        Some(Labelled {
            scores: &s,
            train: train.labels(),
            test: labels,
            correct_bias: false,
        }),
    )?);

    let target = t.min(full.len());
    let (w, sreport) = timed(&mut timing, "sparsified", || {
        sparsify(
            &u,
            full.weights(),
            target,
            &cfg.sparsify_config(),
            cfg.seed.derive(SPARSIFY),
        )
    })?;
    report.sparsify = Some(sreport);
    let sparse = full.with_weights(w)?.pruned();
    let s = scored(&sparse)?;
    let m = label_margins(&s.train, train.labels());
    report.records.push(inputs.record(
        Method::Sparsified,
        sparse.len(),
        t,
        m,
        Some(cfg.cb * sparsification_rate(n, t)),
        Some(Labelled {
            scores: &s,
            train: train.labels(),
            test: labels,
            correct_bias: true,
        }),
    )?);

    let w = timed(&mut timing, "sampled", || {
        importance_sample(full.weights(), t, cfg.seed.derive(SAMPLE))
    })?;
    let sampled = full.with_weights(w)?.pruned();
    let s = scored(&sampled)?;
    let m = label_margins(&s.train, train.labels());
    report.records.push(inputs.record(
        Method::Sampled,
        sampled.len(),
        t,
        m,
        None,
        Some(Labelled {
            scores: &s,
            train: train.labels(),
            test: labels,
            correct_bias: true,
        }),
    )?);
    report.timing.methods = timing.methods;
    Ok(())
}

fn run_matrix(cfg: &RunConfig, report: &mut CompareReport) -> Result<()> {
    let (u, w) = load_margin_matrix(cfg.matrix.as_deref().expect("validated"))?;
    let n = u.n_points();
    let t = cfg.target.min(u.n_hypotheses());
    report.n_train = n;
    let rho = lp_optimal_margin(&u)?.0;
    report.optimal_margin = Some(rho);
    let full_margins = margins(&u, &w)?.into_vec();
    let inputs = Inputs {
        full_margins: full_margins.clone(),
        rho: Some(rho),
    };
    let mut timing = Timing::default();
    report.records.push(inputs.record(
        Method::Full,
        w.support_len(),
        w.len(),
        full_margins,
        None,
        None,
    )?);

    let push = |report: &mut CompareReport, method, w2: &WeightVector, gap_bound| -> Result<()> {
        let m = margins(&u, w2)?.into_vec();
        report
            .records
            .push(inputs.record(method, w2.support_len(), t, m, gap_bound, None)?);
        Ok(())
    };
    let w2 = timed(&mut timing, "truncated", || truncate_top(&w, t))?;
    push(report, Method::Truncated, &w2, None)?;
    let (w2, sreport) = timed(&mut timing, "sparsified", || {
        sparsify(&u, &w, t, &cfg.sparsify_config(), cfg.seed.derive(SPARSIFY))
    })?;
    report.sparsify = Some(sreport);
    push(
        report,
        Method::Sparsified,
        &w2,
        Some(cfg.cb * sparsification_rate(n, t)),
    )?;
    let w2 = timed(&mut timing, "sampled", || {
        importance_sample(&w, t, cfg.seed.derive(SAMPLE))
    })?;
    push(report, Method::Sampled, &w2, None)?;
    report.timing.methods = timing.methods;
    Ok(())
}

/// Runs the comparison. Configuration problems are returned as errors;
/// failures after work has started yield a report with status `failed` and
/// whatever records were completed.
pub fn run_compare(cfg: &RunConfig) -> Result<CompareReport> {
    cfg.validate()?;
    let start = Instant::now();
    let mut report = CompareReport::new(cfg);
    let outcome = if cfg.matrix_mode {
        run_matrix(cfg, &mut report)
    } else {
        run_dataset(cfg, &mut report)
    };
    if let Err(e) = outcome {
        report.status = Status::Failed;
        report.error = Some(e.to_string());
    }
    report.timing.total_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Writes `report.json` and one `curve_<method>.csv` per record into `dir`.
pub fn write_outputs(report: &CompareReport, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    write_json(report, &dir.join("report.json"))?;
    for r in &report.records {
        save_curve(
            &r.curve,
            &dir.join(format!("curve_{}.csv", r.method.name())),
        )?;
    }
    Ok(())
}
