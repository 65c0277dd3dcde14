//! Seeded synthetic classification data.

use rand::Rng;
use sparsiboost_core::{Dataset, Error, Result, Seed};

/// Uniform points in `[-1, 1]^d` labelled by a tilted wavy boundary, with
/// 5% of the labels flipped.
pub fn synthetic_dataset(n: usize, d: usize, seed: Seed) -> Result<Dataset> {
    if n == 0 || d == 0 {
        return Err(Error::Empty("synthetic data needs n, d >= 1"));
    }
    let mut rng = seed.rng();
    let mut rows = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let x: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let s: f64 = x
            .iter()
            .enumerate()
            .map(|(k, v)| v / (k as f64 + 1.0))
            .sum::<f64>()
            + 0.4 * (4.0 * x[0]).sin();
        let y = if s >= 0.0 { 1 } else { -1 };
        labels.push(if rng.random_bool(0.05) { -y } else { y });
        rows.push(x);
    }
    Dataset::from_rows(&rows, labels)
}
