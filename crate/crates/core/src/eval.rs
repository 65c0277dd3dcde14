//! Scores, accuracy with a corrected decision offset, and AUC.

use std::ops::Deref;

use crate::boost::Ensemble;
use crate::dataset::{Dataset, Hypothesis};
use crate::error::{Error, Result};

/// Pre-threshold classifier outputs, one per point.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector(Vec<f64>);

impl ScoreVector {
    pub fn new(values: Vec<f64>) -> Self {
        ScoreVector(values)
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for ScoreVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// `Σ_t w_t h_t(x_i)` for every point.
pub fn predict_scores(ensemble: &Ensemble, dataset: &Dataset) -> Result<ScoreVector> {
    if let Some(h) = ensemble
        .hypotheses()
        .iter()
        .find(|h| h.feature >= dataset.dim())
    {
        return Err(Error::DimensionMismatch {
            expected: dataset.dim(),
            found: h.feature + 1,
        });
    }
    let w = ensemble.weights().as_slice();
    Ok(ScoreVector(
        (0..dataset.len())
            .map(|i| {
                let x = dataset.point(i);
                ensemble
                    .hypotheses()
                    .iter()
                    .zip(w)
                    .map(|(h, wt)| wt * h.predict(x))
                    .sum()
            })
            .collect(),
    ))
}

fn check_lengths(scores: &[f64], labels: &[i8]) -> Result<()> {
    if scores.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: scores.len(),
            found: labels.len(),
        });
    }
    Ok(())
}

/// Fraction of points with `sign(score - offset) = label`, `sign(0) = +1`.
pub fn accuracy(scores: &[f64], labels: &[i8], offset: f64) -> Result<f64> {
    check_lengths(scores, labels)?;
    if scores.is_empty() {
        return Err(Error::Empty("no scores"));
    }
    let hits = scores
        .iter()
        .zip(labels)
        .filter(|(&s, &y)| (if s - offset >= 0.0 { 1 } else { -1 }) == y)
        .count();
    Ok(hits as f64 / scores.len() as f64)
}

/// Offset candidates: one below the minimum, the midpoints between
/// consecutive distinct sorted scores, and one above the maximum.
pub fn candidate_offsets(scores: &[f64]) -> Vec<f64> {
    let mut sorted = scores.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    let mut out = Vec::with_capacity(sorted.len() + 1);
    if let (Some(&lo), Some(&hi)) = (sorted.first(), sorted.last()) {
        out.push(lo - 1.0);
        for w in sorted.windows(2) {
            out.push(midpoint(w[0], w[1]));
        }
        out.push(hi + 1.0);
    }
    out
}

fn midpoint(a: f64, b: f64) -> f64 {
    let m = a + (b - a) / 2.0;
    if m <= a {
        b
    } else {
        m
    }
}

/// Decision offset maximizing training accuracy, found by one sorted scan.
/// Returns the smallest maximizing candidate and its accuracy.
pub fn bias_correct(scores: &[f64], labels: &[i8]) -> Result<(f64, f64)> {
    check_lengths(scores, labels)?;
    let n = scores.len();
    if n == 0 {
        return Err(Error::Empty("no scores"));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));

    // offset below every score: everything predicted +1
    let mut correct = labels.iter().filter(|&&y| y == 1).count() as i64;
    let mut best_correct = correct;
    let mut best_offset = scores[order[0]] - 1.0;
    let mut p = 0;
    while p < n {
        let v = scores[order[p]];
        while p < n && scores[order[p]] == v {
            correct += if labels[order[p]] == 1 { -1 } else { 1 };
            p += 1;
        }
        if correct > best_correct {
            best_correct = correct;
            best_offset = if p < n {
                midpoint(v, scores[order[p]])
            } else {
                v + 1.0
            };
        }
    }
    Ok((best_offset, best_correct as f64 / n as f64))
}

/// Probability that a random positive outscores a random negative, ties
/// counting one half (Mann–Whitney with midranks).
pub fn auc(scores: &[f64], labels: &[i8]) -> Result<f64> {
    check_lengths(scores, labels)?;
    let positives = labels.iter().filter(|&&y| y == 1).count();
    let negatives = labels.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(Error::UndefinedMetric("AUC needs both classes"));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));

    let mut positive_rank_sum = 0.0;
    let mut p = 0;
    while p < order.len() {
        let start = p;
        let v = scores[order[p]];
        while p < order.len() && scores[order[p]] == v {
            p += 1;
        }
        // ranks start+1 ..= p share their mean
        let midrank = (start + 1 + p) as f64 / 2.0;
        let tied_pos = order[start..p].iter().filter(|&&i| labels[i] == 1).count();
        positive_rank_sum += midrank * tied_pos as f64;
    }
    let (pf, nf) = (positives as f64, negatives as f64);
    Ok((positive_rank_sum - pf * (pf + 1.0) / 2.0) / (pf * nf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boost::DecisionStump;
    use crate::margin::WeightVector;

    #[test]
    fn separable_offset_is_midpoint() {
        let (b, acc) = bias_correct(&[-2.0, -1.0, 1.0, 2.0], &[-1, -1, 1, 1]).unwrap();
        assert_eq!(b, 0.0);
        assert_eq!(acc, 1.0);
    }

    #[test]
    fn one_sided_labels_use_lower_sentinel() {
        let (b, acc) = bias_correct(&[0.3, -0.2, 0.9], &[1, 1, 1]).unwrap();
        assert_eq!(b, -1.2);
        assert_eq!(acc, 1.0);
    }

    #[test]
    fn all_negative_uses_upper_sentinel() {
        let (b, acc) = bias_correct(&[0.3, -0.2, 0.9], &[-1, -1, -1]).unwrap();
        assert_eq!(b, 1.9);
        assert_eq!(acc, 1.0);
    }

    #[test]
    fn accuracy_examples() {
        let s = [-1.0, -0.5, 0.5, 1.0];
        let y = [-1, -1, 1, 1];
        assert_eq!(accuracy(&s, &y, 0.0).unwrap(), 1.0);
        let neg: Vec<f64> = s.iter().map(|v| -v).collect();
        assert_eq!(accuracy(&neg, &y, 0.0).unwrap(), 0.0);
        // sign(0) = +1
        assert_eq!(accuracy(&[0.0], &[1], 0.0).unwrap(), 1.0);
    }

    #[test]
    fn auc_examples() {
        let y = [-1, -1, 1, 1];
        assert_eq!(auc(&[0.1, 0.2, 0.3, 0.4], &y).unwrap(), 1.0);
        assert_eq!(auc(&[0.4, 0.3, 0.2, 0.1], &y).unwrap(), 0.0);
        assert_eq!(auc(&[0.5; 4], &y).unwrap(), 0.5);
        assert!(matches!(
            auc(&[0.1, 0.2], &[1, 1]),
            Err(Error::UndefinedMetric(_))
        ));
    }

    #[test]
    fn opposite_stumps_cancel() {
        let ds = Dataset::from_rows(&[vec![0.0], vec![5.0]], vec![1, -1]).unwrap();
        let up = DecisionStump::new(0, 1.0, 1).unwrap();
        let down = DecisionStump::new(0, 1.0, -1).unwrap();
        let e = Ensemble::new(vec![up, down], WeightVector::new(vec![0.5, 0.5])).unwrap();
        assert_eq!(&*predict_scores(&e, &ds).unwrap(), &[0.0, 0.0]);
    }

    #[test]
    fn single_stump_scores_are_outputs() {
        let ds = Dataset::from_rows(&[vec![0.0], vec![5.0]], vec![1, -1]).unwrap();
        let h = DecisionStump::new(0, 1.0, -1).unwrap();
        let e = Ensemble::new(vec![h], WeightVector::new(vec![1.0])).unwrap();
        assert_eq!(&*predict_scores(&e, &ds).unwrap(), &[1.0, -1.0]);
    }

    #[test]
    fn feature_out_of_range() {
        let ds = Dataset::from_rows(&[vec![0.0]], vec![1]).unwrap();
        let h = DecisionStump::new(3, 1.0, 1).unwrap();
        let e = Ensemble::new(vec![h], WeightVector::new(vec![1.0])).unwrap();
        assert!(predict_scores(&e, &ds).is_err());
    }
}
