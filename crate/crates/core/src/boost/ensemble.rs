use serde::{Deserialize, Serialize};

use super::stump::DecisionStump;
use crate::error::{Error, Result};
use crate::margin::WeightVector;

/// Weighted vote `Σ_t w_t h_t(x)` over decision stumps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ensemble {
    hypotheses: Vec<DecisionStump>,
    weights: WeightVector,
}

impl Ensemble {
    pub fn new(hypotheses: Vec<DecisionStump>, weights: WeightVector) -> Result<Self> {
        if hypotheses.is_empty() {
            return Err(Error::Empty("ensemble has no hypotheses"));
        }
        if hypotheses.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                expected: hypotheses.len(),
                found: weights.len(),
            });
        }
        if !weights.is_nonnegative() || weights.as_slice().iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(
                "ensemble weights must be finite and nonnegative".into(),
            ));
        }
        if weights.l1() == 0.0 {
            return Err(Error::InvalidArgument(
                "ensemble weights are all zero".into(),
            ));
        }
        Ok(Ensemble {
            hypotheses,
            weights,
        })
    }

    pub fn len(&self) -> usize {
        self.hypotheses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hypotheses.is_empty()
    }

    pub fn hypotheses(&self) -> &[DecisionStump] {
        &self.hypotheses
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    /// Same hypotheses with l1-normalized weights.
    pub fn normalized(&self) -> Ensemble {
        Ensemble {
            hypotheses: self.hypotheses.clone(),
            weights: self.weights.normalized().expect("nonzero weights"),
        }
    }

    /// Replaces the weights, e.g. with a sparsified vector over the same hypotheses.
    pub fn with_weights(&self, weights: WeightVector) -> Result<Ensemble> {
        Ensemble::new(self.hypotheses.clone(), weights)
    }

    /// Drops hypotheses whose weight is zero.
    pub fn pruned(&self) -> Ensemble {
        let (hypotheses, weights): (Vec<_>, Vec<_>) = self
            .hypotheses
            .iter()
            .zip(self.weights.as_slice())
            .filter(|(_, &w)| w != 0.0)
            .map(|(h, &w)| (*h, w))
            .unzip();
        Ensemble {
            hypotheses,
            weights: WeightVector::new(weights),
        }
    }

    /// First `t` hypotheses and their weights.
    pub fn prefix(&self, t: usize) -> Result<Ensemble> {
        let t = t.min(self.len());
        Ensemble::new(
            self.hypotheses[..t].to_vec(),
            WeightVector::new(self.weights.as_slice()[..t].to_vec()),
        )
    }
}
