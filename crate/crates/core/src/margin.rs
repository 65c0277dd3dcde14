//! Margin matrices, weight vectors and the arithmetic between them.
//!
//! Entry `(i, j)` of a [`MarginMatrix`] is `y_i * h_j(x_i)`, so for a
//! weight vector `w` with unit l1 norm the product `U w` holds the margin of
//! every training point under the weighted vote.

use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Hypothesis};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Global tolerance for l1 normalization checks.
pub const NORM_TOL: f64 = 1e-9;

/// `n x m` matrix of margins with every entry in `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginMatrix(Matrix);

impl MarginMatrix {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if matrix.rows() == 0 || matrix.cols() == 0 {
            return Err(Error::Empty(
                "margin matrix needs at least one row and column",
            ));
        }
        matrix.check_unit_range(0.0)?;
        Ok(MarginMatrix(matrix))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        MarginMatrix::new(Matrix::from_rows(rows)?)
    }

    #[inline]
    pub fn n_points(&self) -> usize {
        self.0.rows()
    }

    #[inline]
    pub fn n_hypotheses(&self) -> usize {
        self.0.cols()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_inner(self) -> Matrix {
        self.0
    }
}

impl Deref for MarginMatrix {
    type Target = Matrix;

    fn deref(&self) -> &Matrix {
        &self.0
    }
}

/// Hypothesis weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(values: Vec<f64>) -> Self {
        WeightVector(values)
    }

    pub fn uniform(m: usize) -> Self {
        WeightVector(vec![1.0 / m as f64; m])
    }

    /// Indicator of hypothesis `j` among `m`.
    pub fn unit(m: usize, j: usize) -> Self {
        let mut v = vec![0.0; m];
        v[j] = 1.0;
        WeightVector(v)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn l1(&self) -> f64 {
        self.0.iter().map(|v| v.abs()).sum()
    }

    /// `‖w‖₀`
    pub fn support_len(&self) -> usize {
        self.0.iter().filter(|&&v| v != 0.0).count()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&j| self.0[j] != 0.0).collect()
    }

    pub fn is_normalized(&self) -> bool {
        (self.l1() - 1.0).abs() <= NORM_TOL
    }

    pub fn ensure_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::NotNormalized(self.l1()))
        }
    }

    /// Copy scaled to unit l1 norm.
    pub fn normalized(&self) -> Result<WeightVector> {
        let l1 = self.l1();
        if !(l1 > 0.0) || !l1.is_finite() {
            return Err(Error::NotNormalized(l1));
        }
        Ok(WeightVector(self.0.iter().map(|v| v / l1).collect()))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&v| v >= 0.0)
    }
}

impl From<Vec<f64>> for WeightVector {
    fn from(values: Vec<f64>) -> Self {
        WeightVector(values)
    }
}

/// Per-point margins `(U w)_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginVector(Vec<f64>);

impl MarginVector {
    pub fn new(values: Vec<f64>) -> Self {
        MarginVector(values)
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

impl Deref for MarginVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Margin matrix of `hypotheses` on `dataset`: entry `(i, j) = y_i h_j(x_i)`.
pub fn build_margin_matrix<H: Hypothesis>(
    dataset: &Dataset,
    hypotheses: &[H],
) -> Result<MarginMatrix> {
    if hypotheses.is_empty() {
        return Err(Error::Empty("no hypotheses"));
    }
    let n = dataset.len();
    let m = hypotheses.len();
    let mut u = Matrix::zeros(n, m);
    for i in 0..n {
        let x = dataset.point(i);
        let y = dataset.label(i);
        for (j, h) in hypotheses.iter().enumerate() {
            let out = h.predict(x);
            if !(out.abs() <= 1.0) {
                return Err(Error::DomainViolation {
                    hypothesis: j,
                    point: i,
                    value: out,
                });
            }
            u.set(i, j, y * out);
        }
    }
    Ok(MarginMatrix(u))
}

fn check_len(u: &MarginMatrix, w: &WeightVector) -> Result<()> {
    if w.len() != u.n_hypotheses() {
        return Err(Error::DimensionMismatch {
            expected: u.n_hypotheses(),
            found: w.len(),
        });
    }
    Ok(())
}

/// `U w`
pub fn margins(u: &MarginMatrix, w: &WeightVector) -> Result<MarginVector> {
    check_len(u, w)?;
    Ok(MarginVector(u.mul_vec(w.as_slice())?))
}

/// `min_i (U w)_i`
pub fn min_margin(u: &MarginMatrix, w: &WeightVector) -> Result<f64> {
    Ok(margins(u, w)?.min())
}

/// `‖U w - U w2‖∞`
pub fn sup_norm_diff(u: &MarginMatrix, w: &WeightVector, w2: &WeightVector) -> Result<f64> {
    let a = margins(u, w)?;
    let b = margins(u, w2)?;
    Ok(sup_diff(&a, &b))
}

/// `max_i |a_i - b_i|` over equal-length slices.
pub fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .fold(0.0_f64, |acc, (x, y)| acc.max((x - y).abs()))
}

/// Empirical CDF of the margins: the `k`-th smallest margin paired with
/// `k / n`. Equal margins stay as separate steps.
pub fn cumulative_margin_curve(margins: &[f64]) -> Result<Vec<(f64, f64)>> {
    if margins.is_empty() {
        return Err(Error::Empty("margin vector"));
    }
    let mut sorted = margins.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    Ok(sorted
        .into_iter()
        .enumerate()
        .map(|(k, v)| (v, (k + 1) as f64 / n))
        .collect())
}
