use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// `n` labeled points with features in `R^d` and labels in `{-1, +1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Matrix,
    labels: Vec<i8>,
}

impl Dataset {
    pub fn new(features: Matrix, labels: Vec<i8>) -> Result<Self> {
        if features.rows() == 0 {
            return Err(Error::Empty("dataset has no points"));
        }
        if features.cols() == 0 {
            return Err(Error::Empty("dataset has no features"));
        }
        if labels.len() != features.rows() {
            return Err(Error::DimensionMismatch {
                expected: features.rows(),
                found: labels.len(),
            });
        }
        if let Some(bad) = labels.iter().find(|&&y| y != 1 && y != -1) {
            return Err(Error::InvalidArgument(format!(
                "label {bad} is not -1 or +1"
            )));
        }
        Ok(Dataset { features, labels })
    }

    pub fn from_rows(rows: &[Vec<f64>], labels: Vec<i8>) -> Result<Self> {
        Dataset::new(Matrix::from_rows(rows)?, labels)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.features.cols()
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        self.features.row(i)
    }

    #[inline]
    pub fn label(&self, i: usize) -> f64 {
        f64::from(self.labels[i])
    }

    pub fn labels(&self) -> &[i8] {
        &self.labels
    }

    pub fn features(&self) -> &Matrix {
        &self.features
    }

    /// Points at the given indices, in that order.
    pub fn subset(&self, indices: &[usize]) -> Result<Dataset> {
        let rows: Vec<Vec<f64>> = indices.iter().map(|&i| self.point(i).to_vec()).collect();
        let labels = indices.iter().map(|&i| self.labels[i]).collect();
        Dataset::from_rows(&rows, labels)
    }
}

/// A base classifier evaluable on a single point.
pub trait Hypothesis {
    fn predict(&self, x: &[f64]) -> f64;
}
