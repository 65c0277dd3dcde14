use rand::Rng;

use crate::matrix::Matrix;
use crate::seed::Seed;

const EPS: f64 = 1e-12;

/// [`refine`], then `kicks` rounds of: flip a few random signs of the best
/// coloring so far, refine again, keep the result if `‖Ax‖∞` dropped.
pub(super) fn refine_with_kicks(
    a: &Matrix,
    columns: &Matrix,
    signs: &mut [f64],
    kicks: usize,
    seed: Seed,
) {
    refine(a, columns, signs);
    if kicks == 0 || signs.len() < 2 {
        return;
    }
    let k = signs.len();
    let flips = (k / 10).max(2).min(k);
    let mut best = discrepancy(a, signs);
    let mut trial = signs.to_vec();
    let mut rng = seed.rng();
    for _ in 0..kicks {
        trial.copy_from_slice(signs);
        for _ in 0..flips {
            let j = rng.random_range(0..k);
            trial[j] = -trial[j];
        }
        refine(a, columns, &mut trial);
        let d = discrepancy(a, &trial);
        if d < best - EPS {
            best = d;
            signs.copy_from_slice(&trial);
        }
    }
}

fn discrepancy(a: &Matrix, signs: &[f64]) -> f64 {
    a.mul_vec(signs)
        .expect("coloring length matches columns")
        .iter()
        .fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// Greedy single-sign flips. Each accepted flip strictly decreases
/// `(max_i |r_i|, Σ r_i²)` lexicographically, with `r = A x`.
pub(super) fn refine(a: &Matrix, columns: &Matrix, signs: &mut [f64]) {
    let k = signs.len();
    let mut r = a.mul_vec(signs).expect("coloring length matches columns");
    let mut max = r.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let mut sumsq: f64 = r.iter().map(|v| v * v).sum();

    for _ in 0..4 * k {
        let mut best: Option<(usize, f64, f64)> = None;
        for (j, &sign) in signs.iter().enumerate() {
            let shift = -2.0 * sign;
            let col = columns.row(j);
            let cutoff = best.map_or(max + EPS, |b| b.1 + EPS);
            let mut cand_max = 0.0_f64;
            let mut cand_sumsq = 0.0;
            let mut pruned = false;
            for (ri, c) in r.iter().zip(col) {
                let v = ri + shift * c;
                cand_max = cand_max.max(v.abs());
                if cand_max > cutoff {
                    pruned = true;
                    break;
                }
                cand_sumsq += v * v;
            }
            if pruned {
                continue;
            }
            let (ref_max, ref_sumsq) = best.map_or((max, sumsq), |b| (b.1, b.2));
            if better(cand_max, cand_sumsq, ref_max, ref_sumsq) {
                best = Some((j, cand_max, cand_sumsq));
            }
        }
        let Some((j, new_max, new_sumsq)) = best else {
            break;
        };
        let shift = -2.0 * signs[j];
        for (ri, c) in r.iter_mut().zip(columns.row(j)) {
            *ri += shift * c;
        }
        signs[j] = -signs[j];
        max = new_max;
        sumsq = new_sumsq;
    }
}

fn better(max: f64, sumsq: f64, ref_max: f64, ref_sumsq: f64) -> bool {
    max < ref_max - EPS || (max <= ref_max + EPS && sumsq < ref_sumsq - EPS)
}
