use minilp::{ComparisonOp, LinearExpr, OptimizationDirection, Problem};

use crate::error::{Error, Result};
use crate::margin::{MarginMatrix, WeightVector};

/// Optimal minimum margin over the column dictionary of `u`:
///
/// ```text
/// max ρ  s.t.  (U w)_i ≥ ρ for all i,  w ≥ 0,  Σ_j w_j = 1
/// ```
///
/// Returns `ρ*` and an optimal weight vector. Columns enter with
/// nonnegative weight only; append negated columns to allow negative votes.
pub fn lp_optimal_margin(u: &MarginMatrix) -> Result<(f64, WeightVector)> {
    let (n, m) = (u.n_points(), u.n_hypotheses());
    let mut problem = Problem::new(OptimizationDirection::Maximize);
    // every margin lies in [-1, 1], so ρ does too
    let rho = problem.add_var(1.0, (-1.0, 1.0));
    let w: Vec<_> = (0..m)
        .map(|_| problem.add_var(0.0, (0.0, f64::INFINITY)))
        .collect();

    for i in 0..n {
        let mut expr = LinearExpr::empty();
        expr.add(rho, -1.0);
        for (j, &var) in w.iter().enumerate() {
            let c = u.get(i, j);
            if c != 0.0 {
                expr.add(var, c);
            }
        }
        problem.add_constraint(expr, ComparisonOp::Ge, 0.0);
    }
    problem.add_constraint(w.iter().map(|&v| (v, 1.0)), ComparisonOp::Eq, 1.0);

    let solution = problem.solve().map_err(|e| Error::Lp(e.to_string()))?;
    let weights: Vec<f64> = w.iter().map(|&v| solution[v].max(0.0)).collect();
    let weights = WeightVector::new(weights).normalized()?;
    Ok((solution.objective(), weights))
}
