use proptest::prelude::*;
use rand::Rng;

use sparsiboost_core::discrepancy::spencer_scale;
use sparsiboost_core::{
    bruteforce_min_discrepancy, full_coloring, halve_columns, minority_sign, partial_coloring,
    Coloring, ColoringConfig, Matrix, PartialColoring, Seed,
};

fn random_signs(n: usize, k: usize, seed: u64) -> Matrix {
    let mut rng = Seed(seed).rng();
    Matrix::from_fn(n, k, |_, _| if rng.random::<bool>() { 1.0 } else { -1.0 })
}

fn random_unit(n: usize, k: usize, seed: u64) -> Matrix {
    let mut rng = Seed(seed).rng();
    Matrix::from_fn(n, k, |_, _| rng.random_range(-1.0..=1.0))
}

// Every ±1 vector of length k, first coordinate fixed (global sign symmetry).
fn oracle_min_discrepancy(a: &Matrix) -> f64 {
    let k = a.cols();
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << (k - 1)) {
        let x: Vec<f64> = (0..k)
            .map(|j| {
                if j > 0 && mask >> (j - 1) & 1 == 1 {
                    -1.0
                } else {
                    1.0
                }
            })
            .collect();
        let d = a
            .mul_vec(&x)
            .unwrap()
            .iter()
            .fold(0.0f64, |acc, v| acc.max(v.abs()));
        best = best.min(d);
    }
    best
}

#[test]
fn exhaustive_matches_independent_enumeration() {
    for seed in 0..10 {
        let a = random_unit(5, 9, seed);
        let (disc, x) = bruteforce_min_discrepancy(&a).unwrap();
        assert!((disc - oracle_min_discrepancy(&a)).abs() < 1e-12);
        assert!((x.discrepancy(&a).unwrap() - disc).abs() < 1e-12);
    }
}

#[test]
fn walk_path_respects_bound() {
    let cfg = ColoringConfig::default();
    for seed in 0..5 {
        let a = random_signs(48, 40, seed);
        let x = full_coloring(&a, &cfg, Seed(seed)).unwrap();
        assert!(x.discrepancy(&a).unwrap() <= 12.0 * spencer_scale(48, 40));
    }
}

#[test]
fn wide_matrix_uses_sqrt_n_branch() {
    let cfg = ColoringConfig::default();
    let a = random_signs(8, 40, 3);
    let x = full_coloring(&a, &cfg, Seed(3)).unwrap();
    assert!(x.discrepancy(&a).unwrap() <= 12.0 * 8f64.sqrt());
}

#[test]
fn duplicated_block_halves_exactly() {
    // [B | B]: one copy of every column is a perfect half, so the best
    // coloring has discrepancy 0 and the minority side sums to half.
    let b = random_signs(6, 5, 11);
    let a = Matrix::from_fn(6, 10, |i, j| b.get(i, j % 5));
    let subset = halve_columns(&a, &ColoringConfig::default(), Seed(0)).unwrap();
    assert_eq!(subset.len(), 5);
    let full: Vec<f64> = (0..6).map(|i| a.row(i).iter().sum()).collect();
    for (s, f) in subset.row_sums(&a).iter().zip(&full) {
        assert!((s - f / 2.0).abs() < 1e-12);
    }
}

#[test]
fn negated_block_balances() {
    // [B | -B]: all-ones coloring already cancels; full row sums are 0.
    let b = random_signs(6, 5, 12);
    let a = Matrix::from_fn(
        6,
        10,
        |i, j| if j < 5 { b.get(i, j) } else { -b.get(i, j - 5) },
    );
    let (disc, _) = bruteforce_min_discrepancy(&a).unwrap();
    assert_eq!(disc, 0.0);
    let subset = halve_columns(&a, &ColoringConfig::default(), Seed(0)).unwrap();
    assert!(subset.len() <= 5);
    for s in subset.row_sums(&a) {
        assert!(s.abs() < 1e-12);
    }
}

#[test]
fn small_halving_against_subset_oracle() {
    let a = random_unit(4, 6, 21);
    let full: Vec<f64> = (0..4).map(|i| a.row(i).iter().sum()).collect();
    let err = |cols: &[usize]| {
        (0..4)
            .map(|i| (cols.iter().map(|&j| a.get(i, j)).sum::<f64>() - full[i] / 2.0).abs())
            .fold(0.0f64, f64::max)
    };
    let mut best = f64::INFINITY;
    for mask in 0u32..64 {
        if mask.count_ones() <= 3 {
            let cols: Vec<usize> = (0..6).filter(|&j| mask >> j & 1 == 1).collect();
            best = best.min(err(&cols));
        }
    }
    let subset = halve_columns(&a, &ColoringConfig::default(), Seed(5)).unwrap();
    let got = err(subset.indices());
    assert!(subset.len() <= 3);
    assert!(got >= best - 1e-12);
    let (disc, _) = bruteforce_min_discrepancy(&a).unwrap();
    assert!((got - disc / 2.0).abs() < 1e-12);
}

#[test]
fn partial_coloring_seeded_determinism() {
    let a = random_unit(20, 24, 9);
    let cfg = ColoringConfig::default();
    let start = PartialColoring::new(24);
    let p = partial_coloring(&a, &start, &cfg, Seed(4)).unwrap();
    let q = partial_coloring(&a, &start, &cfg, Seed(4)).unwrap();
    assert_eq!(p.values(), q.values());
    assert!(p.free_count() <= 12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn minority_sign_is_minority(signs in prop::collection::vec(prop::bool::ANY, 1..40)) {
        let x = Coloring::new(signs.iter().map(|&b| if b { 1 } else { -1 }).collect()).unwrap();
        let s = minority_sign(&x);
        prop_assert!(x.count(s) <= x.len() / 2);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn partial_coloring_only_freezes(
        n in 1usize..12,
        k in 1usize..20,
        pre in prop::collection::vec(prop::option::of(prop::bool::ANY), 20),
        seed in any::<u64>(),
    ) {
        let a = random_unit(n, k, seed);
        let mut values = vec![0.0; k];
        let mut frozen = vec![false; k];
        for j in 0..k {
            if let Some(b) = pre[j] {
                values[j] = if b { 1.0 } else { -1.0 };
                frozen[j] = true;
            }
        }
        prop_assume!(frozen.iter().any(|f| !f));
        let start = PartialColoring::from_parts(values, frozen).unwrap();
        let next = partial_coloring(&a, &start, &ColoringConfig::default(), Seed(seed)).unwrap();
        let free = start.free_count();
        for j in 0..k {
            prop_assert!(next.values()[j].abs() <= 1.0);
            if start.frozen()[j] {
                prop_assert!(next.frozen()[j]);
                prop_assert_eq!(next.values()[j], start.values()[j]);
            }
            if next.frozen()[j] {
                prop_assert_eq!(next.values()[j].abs(), 1.0);
            }
        }
        prop_assert!(free - next.free_count() >= free.div_ceil(2));
    }

    #[test]
    fn full_coloring_within_bound(n in 1usize..30, k in 1usize..40, seed in any::<u64>()) {
        let a = random_unit(n, k, seed);
        let x = full_coloring(&a, &ColoringConfig::default(), Seed(seed)).unwrap();
        prop_assert_eq!(x.len(), k);
        prop_assert!(x.discrepancy(&a).unwrap() <= 12.0 * spencer_scale(n, k) + 1e-12);
    }
}
