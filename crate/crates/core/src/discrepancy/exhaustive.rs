use super::Coloring;
use crate::error::{Error, Result};
use crate::matrix::{sup_norm, Matrix};

pub(crate) const MAX_COLUMNS: usize = 20;
const DRIFT_TOL: f64 = 1e-9;

/// Exact `min_x ‖Ax‖∞` over all `2^k` sign vectors, with the first minimizer
/// met in Gray-code order starting from all `+1`.
pub fn bruteforce_min_discrepancy(a: &Matrix) -> Result<(f64, Coloring)> {
    let k = a.cols();
    if k > MAX_COLUMNS {
        return Err(Error::TooManyColumns(k));
    }
    if k == 0 {
        return Err(Error::Empty("coloring needs at least one column"));
    }
    // Incremental sums drift by rounding, so near-minimal candidates are
    // re-evaluated directly and compared on the exact value.
    let columns = a.transpose();
    let mut x = vec![1i8; k];
    let mut sums: Vec<f64> = (0..a.rows()).map(|i| a.row(i).iter().sum()).collect();
    let mut running = sup_norm(&sums);
    let mut best = Coloring(x.clone()).discrepancy(a)?;
    let mut best_x = x.clone();

    for g in 1u32..(1u32 << k) {
        let bit = g.trailing_zeros() as usize;
        let factor = -2.0 * f64::from(x[bit]);
        for (s, c) in sums.iter_mut().zip(columns.row(bit)) {
            *s += factor * c;
        }
        x[bit] = -x[bit];
        let disc = sup_norm(&sums);
        if disc <= running + DRIFT_TOL {
            running = running.min(disc);
            let exact = Coloring(x.clone()).discrepancy(a)?;
            if exact < best {
                best = exact;
                best_x.copy_from_slice(&x);
            }
        }
    }
    Ok((best, Coloring(best_x)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_matrix() {
        let (d, _) = bruteforce_min_discrepancy(&Matrix::zeros(3, 5)).unwrap();
        assert_eq!(d, 0.0);
    }

    #[test]
    fn identity_forces_one() {
        let a = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(bruteforce_min_discrepancy(&a).unwrap().0, 1.0);
    }

    #[test]
    fn odd_row_parity() {
        let a = Matrix::from_rows(&[vec![1.0, 1.0, 1.0]]).unwrap();
        let (d, x) = bruteforce_min_discrepancy(&a).unwrap();
        assert_eq!(d, 1.0);
        assert_eq!(x.discrepancy(&a).unwrap(), 1.0);
    }

    #[test]
    fn refuses_wide_input() {
        assert_eq!(
            bruteforce_min_discrepancy(&Matrix::zeros(1, 21)).unwrap_err(),
            Error::TooManyColumns(21)
        );
    }

    #[test]
    fn gray_code_matches_recomputed_discrepancy() {
        let a = Matrix::from_fn(5, 9, |i, j| ((i * 7 + j * 3) % 5) as f64 / 4.0 - 0.5);
        let (d, x) = bruteforce_min_discrepancy(&a).unwrap();
        assert!((x.discrepancy(&a).unwrap() - d).abs() < 1e-12);
    }
}
