//! Constructive combinatorial discrepancy minimization.
//!
//! [`full_coloring`] finds signs `x ∈ {-1,+1}^k` with `‖Ax‖∞` within a
//! constant of `√(k ln(e n / k))` (or `√n` when `k > n`). Small instances are
//! solved exactly by enumeration; larger ones run repeated phases of a
//! partial-coloring random walk in the cube (see [`partial_coloring`]),
//! followed by a greedy sign-flip refinement that never increases `‖Ax‖∞`.
//!
//! [`halve_columns`] turns a coloring into a column subset of at most half
//! the columns whose row sums track half of the full row sums.

mod exhaustive;
mod local;
mod walk;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{sup_norm, Matrix};
use crate::seed::Seed;

pub use exhaustive::bruteforce_min_discrepancy;
pub use walk::partial_coloring;

/// Tuning of the coloring machinery.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColoringConfig {
    /// `K_S`: accepted colorings satisfy `‖Ax‖∞ ≤ K_S · spencer_scale(n, k)`.
    pub spencer_constant: f64,
    /// Per-phase row drift cap is `phase_constant · spencer_scale(n + 1, k_p)`.
    pub phase_constant: f64,
    /// Walk step is `step_scale / √(max steps)`.
    pub step_scale: f64,
    /// Step budget per phase is `iters_per_coord · max(k_p, 4)`.
    pub iters_per_coord: usize,
    /// Coordinates within this distance of ±1 are snapped and frozen.
    pub freeze_delta: f64,
    /// Fresh-seed attempts before giving up with a bound violation.
    pub retry_budget: usize,
    /// Instances with at most this many columns are solved exactly.
    pub exhaustive_max: usize,
    /// Greedy sign-flip refinement after the walk.
    pub local_search: bool,
    /// Perturb-and-refine rounds after the first refinement.
    pub refine_kicks: usize,
}

impl Default for ColoringConfig {
    fn default() -> Self {
        ColoringConfig {
            spencer_constant: 12.0,
            phase_constant: 8.0,
            step_scale: 4.0,
            iters_per_coord: 64,
            freeze_delta: 1e-6,
            retry_budget: 16,
            exhaustive_max: 16,
            local_search: true,
            refine_kicks: 8,
        }
    }
}

/// `√(k ln(e n / k))` when `k ≤ n`, else `√n`.
pub fn spencer_scale(rows: usize, cols: usize) -> f64 {
    let (n, k) = (rows as f64, cols as f64);
    if cols == 0 {
        0.0
    } else if cols <= rows {
        (k * (1.0 + (n / k).ln())).sqrt()
    } else {
        n.sqrt()
    }
}

/// A full sign vector in `{-1, +1}^k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coloring(Vec<i8>);

impl Coloring {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if let Some(bad) = signs.iter().find(|&&s| s != 1 && s != -1) {
            return Err(Error::InvalidArgument(format!(
                "coloring entry {bad} is not ±1"
            )));
        }
        Ok(Coloring(signs))
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.0.iter().map(|&s| f64::from(s)).collect()
    }

    pub fn count(&self, sign: i8) -> usize {
        self.0.iter().filter(|&&s| s == sign).count()
    }

    /// `‖A x‖∞`
    pub fn discrepancy(&self, a: &Matrix) -> Result<f64> {
        Ok(sup_norm(&a.mul_vec(&self.as_f64())?))
    }
}

/// Fractional coloring in `[-1, 1]^k` with some coordinates frozen at ±1.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialColoring {
    values: Vec<f64>,
    frozen: Vec<bool>,
}

impl PartialColoring {
    /// Everything free at the origin.
    pub fn new(k: usize) -> Self {
        PartialColoring {
            values: vec![0.0; k],
            frozen: vec![false; k],
        }
    }

    pub fn from_parts(values: Vec<f64>, frozen: Vec<bool>) -> Result<Self> {
        if values.len() != frozen.len() {
            return Err(Error::DimensionMismatch {
                expected: values.len(),
                found: frozen.len(),
            });
        }
        for (j, (&v, &f)) in values.iter().zip(&frozen).enumerate() {
            if !(v.abs() <= 1.0) || (f && v.abs() != 1.0) {
                return Err(Error::InvalidArgument(format!(
                    "partial coloring entry {j} = {v} (frozen: {f})"
                )));
            }
        }
        Ok(PartialColoring { values, frozen })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn frozen(&self) -> &[bool] {
        &self.frozen
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn free_count(&self) -> usize {
        self.frozen.iter().filter(|f| !**f).count()
    }

    /// The sign vector, once every coordinate is frozen.
    pub fn to_coloring(&self) -> Option<Coloring> {
        if self.free_count() > 0 {
            return None;
        }
        Some(Coloring(
            self.values
                .iter()
                .map(|&v| if v > 0.0 { 1 } else { -1 })
                .collect(),
        ))
    }
}

/// Strictly increasing column indices into a host matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnSubset {
    indices: Vec<usize>,
    host_cols: usize,
}

impl ColumnSubset {
    pub fn new(indices: Vec<usize>, host_cols: usize) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "column indices must be strictly increasing".into(),
            ));
        }
        if indices.last().is_some_and(|&j| j >= host_cols) {
            return Err(Error::InvalidArgument("column index out of bounds".into()));
        }
        if indices.len() > host_cols.div_ceil(2) {
            return Err(Error::InvalidArgument(format!(
                "{} columns exceed half of {host_cols}",
                indices.len()
            )));
        }
        Ok(ColumnSubset { indices, host_cols })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn host_cols(&self) -> usize {
        self.host_cols
    }

    pub fn contains(&self, j: usize) -> bool {
        self.indices.binary_search(&j).is_ok()
    }

    /// Row sums of `a` restricted to the subset.
    pub fn row_sums(&self, a: &Matrix) -> Vec<f64> {
        (0..a.rows())
            .map(|i| self.indices.iter().map(|&j| a.get(i, j)).sum())
            .collect()
    }
}

/// Signs with `‖Ax‖∞ ≤ K_S · spencer_scale(n, k)`.
pub fn full_coloring(a: &Matrix, cfg: &ColoringConfig, seed: Seed) -> Result<Coloring> {
    let k = a.cols();
    if k == 0 {
        return Err(Error::Empty("coloring needs at least one column"));
    }
    a.check_unit_range(0.0)?;
    let bound = cfg.spencer_constant * spencer_scale(a.rows(), k);

    if k <= cfg.exhaustive_max.min(exhaustive::MAX_COLUMNS) {
        let (disc, x) = bruteforce_min_discrepancy(a)?;
        if disc > bound {
            return Err(Error::BoundViolation {
                achieved: disc,
                bound,
                attempts: 1,
            });
        }
        return Ok(x);
    }

    let columns = a.transpose();
    let mut best = f64::INFINITY;
    for attempt in 0..cfg.retry_budget.max(1) {
        let attempt_seed = seed.derive(attempt as u64);
        let Some(mut signs) = walk_to_coloring(a, cfg, attempt_seed) else {
            continue;
        };
        if cfg.local_search {
            local::refine_with_kicks(
                a,
                &columns,
                &mut signs,
                cfg.refine_kicks,
                attempt_seed.derive(u64::MAX),
            );
        }
        let x = Coloring(
            signs
                .iter()
                .map(|&s| if s > 0.0 { 1 } else { -1 })
                .collect(),
        );
        let disc = x.discrepancy(a)?;
        if disc <= bound {
            return Ok(x);
        }
        best = best.min(disc);
    }
    Err(Error::BoundViolation {
        achieved: best,
        bound,
        attempts: cfg.retry_budget.max(1),
    })
}

/// Runs partial-coloring phases until every coordinate is frozen. `None`
/// when a phase fails.
fn walk_to_coloring(a: &Matrix, cfg: &ColoringConfig, seed: Seed) -> Option<Vec<f64>> {
    let mut state = PartialColoring::new(a.cols());
    let mut phase = 0u64;
    while state.free_count() > 0 {
        state = partial_coloring(a, &state, cfg, seed.derive(phase)).ok()?;
        phase += 1;
    }
    Some(state.values)
}

/// Sign occurring at most `⌊k/2⌋` times; `-1` on ties.
pub fn minority_sign(x: &Coloring) -> i8 {
    if x.count(-1) <= x.len() / 2 {
        -1
    } else {
        1
    }
}

/// At most `⌈T/2⌉` columns whose row sums stay within
/// `½ (full row sum) ± ½ ‖Ax‖∞`.
pub fn halve_columns(a: &Matrix, cfg: &ColoringConfig, seed: Seed) -> Result<ColumnSubset> {
    let x = full_coloring(a, cfg, seed)?;
    let sigma = minority_sign(&x);
    let indices = (0..x.len()).filter(|&j| x.signs()[j] == sigma).collect();
    ColumnSubset::new(indices, a.cols())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn random_signs(rows: usize, cols: usize, seed: u64) -> Matrix {
        let mut rng = Seed(seed).rng();
        Matrix::from_fn(
            rows,
            cols,
            |_, _| if rng.random::<bool>() { 1.0 } else { -1.0 },
        )
    }

    #[test]
    fn minority_sign_examples() {
        let c = |v: Vec<i8>| Coloring::new(v).unwrap();
        assert_eq!(minority_sign(&c(vec![1, 1, -1])), -1);
        assert_eq!(minority_sign(&c(vec![1, 1, 1])), -1);
        assert_eq!(minority_sign(&c(vec![1, -1])), -1);
        assert_eq!(minority_sign(&c(vec![-1, -1, 1])), 1);
    }

    #[test]
    fn coloring_rejects_zero() {
        assert!(Coloring::new(vec![1, 0]).is_err());
    }

    #[test]
    fn zero_matrix_has_zero_discrepancy() {
        let a = Matrix::zeros(4, 4);
        let x = full_coloring(&a, &ColoringConfig::default(), Seed(1)).unwrap();
        assert_eq!(x.discrepancy(&a).unwrap(), 0.0);
    }

    #[test]
    fn single_row_of_ones_is_balanced() {
        let a = Matrix::from_rows(&[vec![1.0; 4]]).unwrap();
        let x = full_coloring(&a, &ColoringConfig::default(), Seed(2)).unwrap();
        assert_eq!(x.discrepancy(&a).unwrap(), 0.0);
        assert_eq!(x.count(1), 2);
    }

    #[test]
    fn random_8x8_between_optimum_and_bound() {
        let cfg = ColoringConfig::default();
        for seed in 0..5 {
            let a = random_signs(8, 8, seed);
            let x = full_coloring(&a, &cfg, Seed(seed)).unwrap();
            let disc = x.discrepancy(&a).unwrap();
            let (opt, _) = bruteforce_min_discrepancy(&a).unwrap();
            assert!(disc >= opt);
            assert!(disc <= 12.0 * 8f64.sqrt());
        }
    }

    #[test]
    fn walk_path_outputs_signs_within_bound() {
        let cfg = ColoringConfig {
            exhaustive_max: 0,
            ..ColoringConfig::default()
        };
        let a = random_signs(40, 30, 9);
        let x = full_coloring(&a, &cfg, Seed(3)).unwrap();
        assert!(x.signs().iter().all(|&s| s == 1 || s == -1));
        assert!(x.discrepancy(&a).unwrap() <= 12.0 * spencer_scale(40, 30));
    }

    #[test]
    fn walk_path_is_seed_deterministic() {
        let cfg = ColoringConfig {
            exhaustive_max: 0,
            ..ColoringConfig::default()
        };
        let a = random_signs(20, 24, 4);
        let x = full_coloring(&a, &cfg, Seed(5)).unwrap();
        let y = full_coloring(&a, &cfg, Seed(5)).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn out_of_range_entry_is_rejected() {
        let a = Matrix::from_rows(&[vec![0.5, 1.5]]).unwrap();
        let err = full_coloring(&a, &ColoringConfig::default(), Seed(0)).unwrap_err();
        assert!(matches!(err, Error::EntryOutOfRange { col: 1, .. }));
    }

    #[test]
    fn impossible_bound_reports_violation() {
        let cfg = ColoringConfig {
            spencer_constant: 1e-6,
            exhaustive_max: 0,
            retry_budget: 2,
            ..ColoringConfig::default()
        };
        let a = random_signs(10, 20, 1);
        match full_coloring(&a, &cfg, Seed(0)) {
            Err(Error::BoundViolation {
                achieved, attempts, ..
            }) => {
                assert!(achieved > 0.0);
                assert_eq!(attempts, 2);
            }
            other => panic!("expected bound violation, got {other:?}"),
        }
    }

    #[test]
    fn spencer_scale_branches() {
        assert!((spencer_scale(4, 4) - 2.0).abs() < 1e-12);
        assert!((spencer_scale(4, 9) - 2.0).abs() < 1e-12);
        let e = std::f64::consts::E;
        assert!((spencer_scale(10, 2) - (2.0 * (e * 5.0).ln()).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn column_subset_validation() {
        assert!(ColumnSubset::new(vec![0, 2], 4).is_ok());
        assert!(ColumnSubset::new(vec![2, 0], 4).is_err());
        assert!(ColumnSubset::new(vec![0, 4], 4).is_err());
        assert!(ColumnSubset::new(vec![0, 1, 2], 4).is_err());
        assert!(ColumnSubset::new(vec![0, 1, 2], 5).is_ok());
    }
}
