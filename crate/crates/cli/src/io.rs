//! File formats: label-first dataset CSV, the plain-text margin matrix,
//! JSON model files and cumulative-margin CSV curves.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sparsiboost_core::{Dataset, DecisionStump, Ensemble, MarginMatrix, Matrix, WeightVector};

use crate::error::{io_err, CliError, Result};

/// Entries this far outside `[-1, 1]` are clamped instead of rejected.
pub const RANGE_TOL: f64 = 1e-9;

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> CliError {
    CliError::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn parse_label(cell: &str) -> Option<i8> {
    let v = cell.parse::<f64>().ok()?;
    if v == 1.0 {
        Some(1)
    } else if v == -1.0 || v == 0.0 {
        Some(-1)
    } else {
        None
    }
}

pub fn parse_dataset(text: &str, path: &Path) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut labels = Vec::new();
    let mut first = true;
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_err(path, line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        if std::mem::take(&mut first) && record.get(0).is_some_and(|c| c.parse::<f64>().is_err()) {
            continue;
        }
        let label = record.get(0).and_then(parse_label).ok_or_else(|| {
            parse_err(
                path,
                line,
                format!("label {:?} is not -1/+1 or 0/1", &record[0]),
            )
        })?;
        let features = record
            .iter()
            .skip(1)
            .map(|c| {
                c.parse::<f64>()
                    .map_err(|_| parse_err(path, line, format!("feature {c:?} is not a number")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(prev) = rows.first() {
            if prev.len() != features.len() {
                return Err(parse_err(
                    path,
                    line,
                    format!("expected {} features, found {}", prev.len(), features.len()),
                ));
            }
        }
        rows.push(features);
        labels.push(label);
    }
    if rows.is_empty() {
        return Err(parse_err(path, 1, "no data rows"));
    }
    if rows[0].is_empty() {
        return Err(parse_err(path, 1, "rows have no feature columns"));
    }
    Ok(Dataset::from_rows(&rows, labels)?)
}

pub fn load_dataset(path: &Path) -> Result<Dataset> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_dataset(&text, path)
}

pub fn format_dataset(dataset: &Dataset) -> String {
    let mut out = String::new();
    for i in 0..dataset.len() {
        write!(out, "{}", dataset.labels()[i]).unwrap();
        for v in dataset.point(i) {
            write!(out, ",{v}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn save_dataset(dataset: &Dataset, path: &Path) -> Result<()> {
    fs::write(path, format_dataset(dataset)).map_err(io_err(path))
}

fn parse_numbers(line: &str, path: &Path, lineno: usize) -> Result<Vec<f64>> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| parse_err(path, lineno, format!("{t:?} is not a number")))
        })
        .collect()
}

/// `n m`, then `m` weights, then `n` rows of `m` entries. Weights are
/// rescaled to unit ℓ1 norm unless they already have it.
pub fn parse_margin_matrix(text: &str, path: &Path) -> Result<(MarginMatrix, WeightVector)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (lineno, header) = lines
        .next()
        .ok_or_else(|| parse_err(path, 1, "empty file"))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| parse_err(path, lineno, "header must be two counts \"n m\""))?;
    let [n, m] = dims[..] else {
        return Err(parse_err(path, lineno, "header must be two counts \"n m\""));
    };
    if n == 0 || m == 0 {
        return Err(parse_err(path, lineno, "dimensions must be positive"));
    }

    let (lineno, wline) = lines
        .next()
        .ok_or_else(|| parse_err(path, lineno + 1, "missing weights line"))?;
    let weights = parse_numbers(wline, path, lineno)?;
    if weights.len() != m {
        return Err(parse_err(
            path,
            lineno,
            format!("expected {m} weights, found {}", weights.len()),
        ));
    }

    let mut data = Vec::with_capacity(n * m);
    let mut last = lineno;
    for r in 0..n {
        let (lineno, row) = lines.next().ok_or_else(|| {
            parse_err(
                path,
                last + 1,
                format!("expected {n} matrix rows, found {r}"),
            )
        })?;
        last = lineno;
        let values = parse_numbers(row, path, lineno)?;
        if values.len() != m {
            return Err(parse_err(
                path,
                lineno,
                format!("expected {m} entries, found {}", values.len()),
            ));
        }
        for (c, v) in values.into_iter().enumerate() {
            if !(v.abs() <= 1.0 + RANGE_TOL) {
                return Err(CliError::Core(sparsiboost_core::Error::EntryOutOfRange {
                    row: r,
                    col: c,
                    value: v,
                }));
            }
            data.push(v.clamp(-1.0, 1.0));
        }
    }
    if let Some((lineno, _)) = lines.next() {
        return Err(parse_err(
            path,
            lineno,
            format!("more than {n} matrix rows"),
        ));
    }

    let u = MarginMatrix::new(Matrix::from_vec(n, m, data)?)?;
    let w = WeightVector::new(weights);
    let w = if w.is_normalized() {
        w
    } else {
        w.normalized()?
    };
    Ok((u, w))
}

pub fn load_margin_matrix(path: &Path) -> Result<(MarginMatrix, WeightVector)> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_margin_matrix(&text, path)
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(f64::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn format_margin_matrix(u: &MarginMatrix, w: &WeightVector) -> String {
    let mut out = format!(
        "{} {}\n{}\n",
        u.n_points(),
        u.n_hypotheses(),
        join(w.as_slice())
    );
    for i in 0..u.n_points() {
        out.push_str(&join(u.row(i)));
        out.push('\n');
    }
    out
}

pub fn save_margin_matrix(u: &MarginMatrix, w: &WeightVector, path: &Path) -> Result<()> {
    fs::write(path, format_margin_matrix(u, w)).map_err(io_err(path))
}

/// Weights plus the stumps they belong to. `stumps` is empty for weights
/// over the columns of a margin-matrix file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub weights: Vec<f64>,
    #[serde(default)]
    pub stumps: Vec<DecisionStump>,
}

impl ModelFile {
    pub fn from_ensemble(e: &Ensemble) -> Self {
        ModelFile {
            weights: e.weights().as_slice().to_vec(),
            stumps: e.hypotheses().to_vec(),
        }
    }

    pub fn from_weights(w: &WeightVector) -> Self {
        ModelFile {
            weights: w.as_slice().to_vec(),
            stumps: Vec::new(),
        }
    }

    pub fn to_ensemble(&self) -> Result<Ensemble> {
        Ok(Ensemble::new(
            self.stumps.clone(),
            WeightVector::new(self.weights.clone()),
        )?)
    }
}

pub fn load_model(path: &Path) -> Result<ModelFile> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.to_path_buf(),
        source,
    })
}

pub fn save_model(model: &ModelFile, path: &Path) -> Result<()> {
    write_json(model, path)
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|source| CliError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    text.push('\n');
    fs::write(path, text).map_err(io_err(path))
}

pub fn format_curve(curve: &[(f64, f64)]) -> String {
    let mut out = String::from("margin,cumulative_fraction\n");
    for (m, f) in curve {
        writeln!(out, "{m},{f}").unwrap();
    }
    out
}

pub fn save_curve(curve: &[(f64, f64)], path: &Path) -> Result<()> {
    fs::write(path, format_curve(curve)).map_err(io_err(path))
}
