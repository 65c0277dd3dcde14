//! Margin-preserving sparsification of a weight vector.
//!
//! [`sparsify`] repeatedly [`halve`]s the support of `w` until at most `T`
//! entries remain. One halving keeps the largest third of the entries
//! untouched and, twice in a row, splits the remaining entries with a
//! low-discrepancy coloring: entries on the minority side are doubled, the
//! others dropped. The coloring is taken over the columns of `U` scaled by
//! their weights plus one extra row holding `|w_j|`, so every margin and the
//! l1 mass are preserved up to the coloring's discrepancy.

use std::cmp::Ordering;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use serde::{Deserialize, Serialize};

use crate::discrepancy::{halve_columns, ColoringConfig};
use crate::error::{Error, Result};
use crate::margin::{sup_norm_diff, MarginMatrix, WeightVector};
use crate::matrix::Matrix;
use crate::seed::Seed;

/// Smallest support on which [`halve`] operates.
pub const MIN_HALVING_SUPPORT: usize = 6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparsifyConfig {
    pub coloring: ColoringConfig,
    /// `K_H`: reporting constant for the `K_H √(log(2 + n/T) / T)` bound.
    pub halving_constant: f64,
    /// Fresh-seed retries of a halving round that fails to shrink the support.
    pub round_retries: usize,
}

impl Default for SparsifyConfig {
    fn default() -> Self {
        SparsifyConfig {
            coloring: ColoringConfig::default(),
            halving_constant: 24.0,
            round_retries: 8,
        }
    }
}

/// `√(ln(2 + n/T) / T)`, the rate every error bound in this module scales with.
pub fn sparsification_rate(n: usize, t: usize) -> f64 {
    let (n, t) = (n as f64, t as f64);
    ((2.0 + n / t).ln() / t).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparsifyReport {
    pub initial_support: usize,
    pub final_support: usize,
    pub halving_rounds: usize,
    /// `‖U w - U w'‖∞`
    pub achieved_error: f64,
    /// `‖U w⁽ʳ⁾ - U w⁽ʳ⁺¹⁾‖∞` for every halving round `r`.
    pub per_round_errors: Vec<f64>,
    /// Support entering each halving round.
    pub per_round_supports: Vec<usize>,
    /// Set when the tail of the reduction fell back to [`truncate_top`].
    pub truncation_fallback: bool,
    pub seed: Seed,
}

/// Indices of the nonzero entries ordered by decreasing `|w_j|`, ties by index.
fn support_by_magnitude(w: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..w.len()).filter(|&j| w[j] != 0.0).collect();
    order.sort_by(|&a, &b| match w[b].abs().total_cmp(&w[a].abs()) {
        Ordering::Equal => a.cmp(&b),
        o => o,
    });
    order
}

/// The coloring input for one split: `(n+1) x k` with
/// `a_ij = u_{i,π(j)} w_{π(j)} / scale` and last row `|w_{π(j)}| / scale`.
pub fn split_matrix(u: &MarginMatrix, w: &[f64], columns: &[usize], scale: f64) -> Matrix {
    let n = u.n_points();
    Matrix::from_fn(n + 1, columns.len(), |i, j| {
        let c = columns[j];
        if i < n {
            u.get(i, c) * w[c] / scale
        } else {
            w[c].abs() / scale
        }
    })
}

/// One halving round: `‖w'‖₀ ≤ ⌈‖w‖₀/2⌉`, `‖w'‖₁ = 1`, support and signs
/// inherited from `w`.
pub fn halve(
    u: &MarginMatrix,
    w: &WeightVector,
    cfg: &SparsifyConfig,
    seed: Seed,
) -> Result<WeightVector> {
    if w.len() != u.n_hypotheses() {
        return Err(Error::DimensionMismatch {
            expected: u.n_hypotheses(),
            found: w.len(),
        });
    }
    w.ensure_normalized()?;
    let order = support_by_magnitude(w.as_slice());
    if order.len() < MIN_HALVING_SUPPORT {
        return Err(Error::InvalidArgument(format!(
            "halving needs support of at least {MIN_HALVING_SUPPORT}, got {}",
            order.len()
        )));
    }

    let kept = order.len().div_ceil(3);
    let mut rest = order[kept..].to_vec();
    let omega = w.as_slice()[rest[0]].abs();
    if omega == 0.0 {
        return Ok(w.clone());
    }
    rest.sort_unstable();

    let mut out = w.as_slice().to_vec();
    // entries doubled in the first split reach 2ω, so the second split
    // scales by 2ω to stay inside [-1, 1]
    for pass in 0..2u32 {
        let free: Vec<usize> = rest.iter().copied().filter(|&j| out[j] != 0.0).collect();
        if free.is_empty() {
            break;
        }
        let scale = omega * f64::from(1u32 << pass);
        let a = split_matrix(u, &out, &free, scale);
        let subset = halve_columns(&a, &cfg.coloring, seed.derive(u64::from(pass)))?;
        for (p, &j) in free.iter().enumerate() {
            if subset.contains(p) {
                out[j] *= 2.0;
            } else {
                out[j] = 0.0;
            }
        }
    }
    WeightVector::new(out).normalized()
}

/// Reduces `w` to at most `t` nonzero entries while keeping every margin
/// `(U w)_i` within `O(√(log(2 + n/t) / t))`.
pub fn sparsify(
    u: &MarginMatrix,
    w: &WeightVector,
    t: usize,
    cfg: &SparsifyConfig,
    seed: Seed,
) -> Result<(WeightVector, SparsifyReport)> {
    if w.len() != u.n_hypotheses() {
        return Err(Error::DimensionMismatch {
            expected: u.n_hypotheses(),
            found: w.len(),
        });
    }
    if t == 0 || t > w.len() {
        return Err(Error::InvalidArgument(format!(
            "target {t} must lie in 1..={}",
            w.len()
        )));
    }
    w.ensure_normalized()?;

    let initial_support = w.support_len();
    let mut report = SparsifyReport {
        initial_support,
        final_support: initial_support,
        halving_rounds: 0,
        achieved_error: 0.0,
        per_round_errors: Vec::new(),
        per_round_supports: Vec::new(),
        truncation_fallback: false,
        seed,
    };
    if initial_support <= t {
        return Ok((w.clone(), report));
    }

    let mut current = w.clone();
    let mut round = 0u64;
    while current.support_len() > t {
        let support = current.support_len();
        if support < MIN_HALVING_SUPPORT {
            current = truncate_top(&current, t)?;
            report.truncation_fallback = true;
            break;
        }
        let round_seed = seed.derive(round);
        let mut next = None;
        for attempt in 0..=cfg.round_retries {
            if let Ok(candidate) = halve(u, &current, cfg, round_seed.derive(attempt as u64)) {
                if candidate.support_len() < support {
                    next = Some(candidate);
                    break;
                }
            }
        }
        let Some(next) = next else {
            current = truncate_top(&current, t)?;
            report.truncation_fallback = true;
            break;
        };
        report
            .per_round_errors
            .push(sup_norm_diff(u, &current, &next)?);
        report.per_round_supports.push(support);
        current = next;
        round += 1;
    }

    report.halving_rounds = report.per_round_errors.len();
    report.final_support = current.support_len();
    report.achieved_error = sup_norm_diff(u, w, &current)?;
    Ok((current, report))
}

/// Draws `t` indices with replacement, index `i` with probability `|w_i|`,
/// and returns `w'_i = sign(w_i) n_i / t` together with the counts `n_i`.
pub fn importance_sample_counts(
    w: &WeightVector,
    t: usize,
    seed: Seed,
) -> Result<(WeightVector, Vec<usize>)> {
    if t == 0 {
        return Err(Error::InvalidArgument(
            "sample size must be positive".into(),
        ));
    }
    w.ensure_normalized()?;
    let dist = WeightedIndex::new(w.as_slice().iter().map(|v| v.abs()))
        .map_err(|e| Error::InvalidArgument(format!("sampling weights: {e}")))?;
    let mut counts = vec![0usize; w.len()];
    let mut rng = seed.rng();
    for _ in 0..t {
        counts[dist.sample(&mut rng)] += 1;
    }
    let tf = t as f64;
    let values = w
        .as_slice()
        .iter()
        .zip(&counts)
        .map(|(&wi, &c)| {
            if c == 0 {
                0.0
            } else {
                wi.signum() * c as f64 / tf
            }
        })
        .collect();
    Ok((WeightVector::new(values), counts))
}

/// Importance-sampling baseline: see [`importance_sample_counts`].
pub fn importance_sample(w: &WeightVector, t: usize, seed: Seed) -> Result<WeightVector> {
    importance_sample_counts(w, t, seed).map(|(v, _)| v)
}

/// Keeps the `t` largest-magnitude entries (ties to the lower index) and
/// renormalizes. Returns `w` untouched when its support already fits.
pub fn truncate_top(w: &WeightVector, t: usize) -> Result<WeightVector> {
    if t == 0 {
        return Err(Error::InvalidArgument("target must be positive".into()));
    }
    let order = support_by_magnitude(w.as_slice());
    if order.len() <= t {
        return Ok(w.clone());
    }
    let mut out = vec![0.0; w.len()];
    for &j in &order[..t] {
        out[j] = w.as_slice()[j];
    }
    WeightVector::new(out).normalized()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::margin::margins;
    use rand::Rng;

    fn random_u(n: usize, m: usize, seed: u64) -> MarginMatrix {
        let mut rng = Seed(seed).rng();
        MarginMatrix::new(Matrix::from_fn(n, m, |_, _| rng.random_range(-1.0..=1.0))).unwrap()
    }

    #[test]
    fn truncate_example() {
        let w = WeightVector::new(vec![0.5, 0.3, 0.2]);
        let out = truncate_top(&w, 2).unwrap();
        assert!((out.as_slice()[0] - 0.625).abs() < 1e-15);
        assert!((out.as_slice()[1] - 0.375).abs() < 1e-15);
        assert_eq!(out.as_slice()[2], 0.0);
        assert_eq!(truncate_top(&w, 3).unwrap(), w);
    }

    #[test]
    fn truncate_keeps_top_by_sort_oracle() {
        let mut rng = Seed(3).rng();
        let raw: Vec<f64> = (0..30).map(|_| rng.random_range(-1.0..1.0)).collect();
        let w = WeightVector::new(raw).normalized().unwrap();
        let out = truncate_top(&w, 7).unwrap();
        let mut mags: Vec<f64> = w.as_slice().iter().map(|v| v.abs()).collect();
        mags.sort_by(|a, b| b.total_cmp(a));
        let threshold = mags[6];
        for (a, b) in w.as_slice().iter().zip(out.as_slice()) {
            assert_eq!(*b != 0.0, a.abs() >= threshold);
        }
        assert!(out.is_normalized());
    }

    #[test]
    fn six_equal_entries_halve_to_three() {
        let u = random_u(10, 6, 1);
        let w = WeightVector::uniform(6);
        let out = halve(&u, &w, &SparsifyConfig::default(), Seed(4)).unwrap();
        assert!(out.support_len() <= 3);
        assert!(out.is_normalized());
        assert!(out.is_nonnegative());
    }

    #[test]
    fn halve_rejects_small_support() {
        let u = random_u(4, 5, 1);
        let w = WeightVector::uniform(5);
        assert!(halve(&u, &w, &SparsifyConfig::default(), Seed(0)).is_err());
    }

    #[test]
    fn constant_columns_lose_nothing() {
        let u = MarginMatrix::new(Matrix::from_fn(8, 40, |_, _| 0.25)).unwrap();
        let w = WeightVector::uniform(40);
        let (out, report) = sparsify(&u, &w, 5, &SparsifyConfig::default(), Seed(9)).unwrap();
        assert!(out.support_len() <= 5);
        assert!(report.achieved_error < 1e-12);
    }

    #[test]
    fn split_matrix_row_sums_reproduce_margins() {
        let u = random_u(12, 20, 5);
        let w = WeightVector::new((1..=20).map(|j| j as f64).collect())
            .normalized()
            .unwrap();
        let cols: Vec<usize> = (7..20).collect();
        let omega = w.as_slice()[19];
        let a = split_matrix(&u, w.as_slice(), &cols, omega);
        let mut restricted = vec![0.0; 20];
        for &j in &cols {
            restricted[j] = w.as_slice()[j];
        }
        let expected = margins(&u, &WeightVector::new(restricted.clone())).unwrap();
        for i in 0..12 {
            let s: f64 = a.row(i).iter().sum();
            assert!((omega * s - expected[i]).abs() < 1e-10);
        }
        let l1: f64 = a.row(12).iter().sum::<f64>() * omega;
        assert!((l1 - restricted.iter().sum::<f64>()).abs() < 1e-12);
        a.check_unit_range(1e-12).unwrap();
    }

    #[test]
    fn importance_sample_one_hot_is_fixed() {
        let w = WeightVector::unit(5, 2);
        for s in 0..10 {
            assert_eq!(importance_sample(&w, 17, Seed(s)).unwrap(), w);
        }
    }

    #[test]
    fn importance_sample_counts_sum_to_t() {
        let w = WeightVector::new(vec![0.1, -0.4, 0.2, -0.3]);
        let (out, counts) = importance_sample_counts(&w, 101, Seed(3)).unwrap();
        assert_eq!(counts.iter().sum::<usize>(), 101);
        assert!((out.l1() - 1.0).abs() < 1e-12);
        for (a, b) in w.as_slice().iter().zip(out.as_slice()) {
            assert!(*b == 0.0 || a.signum() == b.signum());
        }
    }

    #[test]
    fn sparsify_rejects_bad_target() {
        let u = random_u(4, 8, 0);
        let w = WeightVector::uniform(8);
        assert!(sparsify(&u, &w, 0, &SparsifyConfig::default(), Seed(0)).is_err());
        assert!(sparsify(&u, &w, 9, &SparsifyConfig::default(), Seed(0)).is_err());
    }

    #[test]
    fn tiny_target_falls_back_to_truncation() {
        let u = random_u(6, 12, 2);
        let w = WeightVector::uniform(12);
        let (out, report) = sparsify(&u, &w, 2, &SparsifyConfig::default(), Seed(1)).unwrap();
        assert!(out.support_len() <= 2);
        assert!(report.truncation_fallback);
        assert!(out.is_normalized());
    }
}
