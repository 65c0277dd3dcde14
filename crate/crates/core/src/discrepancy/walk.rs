//! One phase of the partial-coloring random walk.
//!
//! The walk moves the free coordinates by small Gaussian steps projected
//! orthogonally to (a) rows whose drift in this phase has reached the phase
//! cap and (b) coordinates already frozen. A coordinate freezes once it gets
//! within `freeze_delta` of ±1, where it is snapped to the sign. The phase
//! ends as soon as half of the initially free coordinates are frozen.

use rand::Rng;
use rand_distr::StandardNormal;

use super::{spencer_scale, ColoringConfig, PartialColoring};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::seed::Seed;

pub fn partial_coloring(
    a: &Matrix,
    state: &PartialColoring,
    cfg: &ColoringConfig,
    seed: Seed,
) -> Result<PartialColoring> {
    if state.len() != a.cols() {
        return Err(Error::DimensionMismatch {
            expected: a.cols(),
            found: state.len(),
        });
    }
    a.check_unit_range(0.0)?;
    let n = a.rows();
    let mut active: Vec<usize> = (0..state.len()).filter(|&j| !state.frozen[j]).collect();
    let initially_free = active.len();
    if initially_free == 0 {
        return Err(Error::InvalidArgument(
            "partial coloring has no free coordinate".into(),
        ));
    }
    let required = initially_free.div_ceil(2);
    let max_steps = cfg.iters_per_coord.max(1) * initially_free.max(4);
    let gamma = cfg.step_scale / (max_steps as f64).sqrt();
    let cap = cfg.phase_constant * spencer_scale(n + 1, initially_free);
    let limit = 1.0 - cfg.freeze_delta;

    let columns = a.transpose();
    let mut values = state.values.clone();
    let mut frozen = state.frozen.clone();
    let mut drift = vec![0.0; n];
    let mut is_tight = vec![false; n];
    let mut tight: Vec<usize> = Vec::new();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut direction = vec![0.0; initially_free];
    let mut newly_frozen = 0;
    let mut rng = seed.rng();
    let mut steps = 0;

    while newly_frozen < required && steps < max_steps {
        let f = active.len();
        if basis.len() >= f {
            break;
        }
        steps += 1;
        let g = &mut direction[..f];
        for gi in g.iter_mut() {
            *gi = rng.sample(StandardNormal);
        }
        for q in &basis {
            let dot = dot(q, g);
            for (gi, qi) in g.iter_mut().zip(q) {
                *gi -= dot * qi;
            }
        }

        let mut froze_any = false;
        for (p, &j) in active.iter().enumerate() {
            let old = values[j];
            let mut new = old + gamma * g[p];
            if new.abs() >= limit {
                new = new.signum();
                frozen[j] = true;
                froze_any = true;
                newly_frozen += 1;
            }
            let delta = new - old;
            if delta != 0.0 {
                values[j] = new;
                for (d, c) in drift.iter_mut().zip(columns.row(j)) {
                    *d += delta * c;
                }
            }
        }
        if froze_any {
            active.retain(|&j| !frozen[j]);
        }

        let mut new_tight = false;
        for i in 0..n {
            if !is_tight[i] && drift[i].abs() >= cap {
                is_tight[i] = true;
                tight.push(i);
                new_tight = true;
            }
        }
        if froze_any || new_tight {
            basis = orthonormal_rows(a, &tight, &active);
        }
    }

    if newly_frozen < required {
        return Err(Error::PhaseFailure {
            frozen: newly_frozen,
            required,
            iterations: steps,
        });
    }
    Ok(PartialColoring { values, frozen })
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Orthonormal basis of the given rows restricted to `active` columns.
/// Numerically dependent rows are dropped.
fn orthonormal_rows(a: &Matrix, rows: &[usize], active: &[usize]) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for &i in rows {
        if basis.len() >= active.len() {
            break;
        }
        let row = a.row(i);
        let mut v: Vec<f64> = active.iter().map(|&j| row[j]).collect();
        let original = dot(&v, &v).sqrt();
        if original == 0.0 {
            continue;
        }
        // two passes of classical Gram-Schmidt
        for _ in 0..2 {
            for q in &basis {
                let d = dot(q, &v);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= d * qi;
                }
            }
        }
        let norm = dot(&v, &v).sqrt();
        if norm > 1e-9 * original {
            v.iter_mut().for_each(|x| *x /= norm);
            basis.push(v);
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn zero_matrix_phase_freezes_half() {
        let a = Matrix::zeros(3, 10);
        let out = partial_coloring(
            &a,
            &PartialColoring::new(10),
            &ColoringConfig::default(),
            Seed(1),
        )
        .unwrap();
        assert!(out.free_count() <= 5);
    }

    #[test]
    fn single_free_coordinate_freezes() {
        let a = Matrix::from_fn(4, 5, |i, j| if (i + j) % 2 == 0 { 1.0 } else { -1.0 });
        let state = PartialColoring::from_parts(
            vec![1.0, -1.0, 0.0, 1.0, -1.0],
            vec![true, true, false, true, true],
        )
        .unwrap();
        let out = partial_coloring(&a, &state, &ColoringConfig::default(), Seed(2)).unwrap();
        assert_eq!(out.free_count(), 0);
        assert_eq!(&out.values()[..2], &[1.0, -1.0]);
        assert_eq!(&out.values()[3..], &[1.0, -1.0]);
        assert!(out.values()[2].abs() == 1.0);
    }

    #[test]
    fn seeded_6x6_postconditions() {
        let mut rng = Seed(6).rng();
        let a = Matrix::from_fn(6, 6, |_, _| rng.random_range(-1.0..=1.0));
        let state = PartialColoring::new(6);
        let out = partial_coloring(&a, &state, &ColoringConfig::default(), Seed(7)).unwrap();
        assert!(out.free_count() <= 3);
        for (v, f) in out.values().iter().zip(out.frozen()) {
            assert!(v.abs() <= 1.0);
            if *f {
                assert_eq!(v.abs(), 1.0);
            }
        }
    }

    #[test]
    fn fully_frozen_state_is_rejected() {
        let a = Matrix::zeros(2, 2);
        let state = PartialColoring::from_parts(vec![1.0, -1.0], vec![true, true]).unwrap();
        assert!(partial_coloring(&a, &state, &ColoringConfig::default(), Seed(0)).is_err());
    }

    #[test]
    fn starved_budget_reports_phase_failure() {
        let cfg = ColoringConfig {
            iters_per_coord: 1,
            step_scale: 1e-3,
            ..ColoringConfig::default()
        };
        let a = Matrix::zeros(2, 8);
        let err = partial_coloring(&a, &PartialColoring::new(8), &cfg, Seed(0)).unwrap_err();
        assert!(matches!(err, Error::PhaseFailure { required: 4, .. }));
    }

    #[test]
    fn basis_is_orthonormal() {
        let a = Matrix::from_fn(4, 6, |i, j| ((i * 5 + j * 3) % 7) as f64 / 7.0 - 0.4);
        let b = orthonormal_rows(&a, &[0, 1, 2, 3], &[0, 2, 3, 5]);
        for (p, q) in b.iter().enumerate() {
            for (r, s) in b.iter().enumerate() {
                let expect = if p == r { 1.0 } else { 0.0 };
                assert!((dot(q, s) - expect).abs() < 1e-10);
            }
        }
    }
}
