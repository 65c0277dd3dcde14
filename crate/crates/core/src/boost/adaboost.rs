//! AdaBoostV (Rätsch & Warmuth, "Efficient margin maximizing with
//! boosting", JMLR 2005).
//!
//! Round `t` picks the stump with the largest edge `γ_t` under the current
//! sample distribution and keeps the running margin estimate
//! `ϱ_t = min_{r ≤ t} γ_r - ν`. The hypothesis weight is
//!
//! ```text
//! α_t = ½ ln((1 + γ_t) / (1 - γ_t)) - ½ ln((1 + ϱ_t) / (1 - ϱ_t))
//! ```
//!
//! and the distribution is updated as `d_i ← d_i exp(-α_t y_i h_t(x_i))`,
//! renormalized. With `ν = √(2 ln n / R)` the normalized combination after
//! `R` rounds has minimum margin at least `ρ* - ν`.

use super::ensemble::Ensemble;
use super::stump::train_stump;
use crate::dataset::{Dataset, Hypothesis};
use crate::error::{Error, Result};
use crate::margin::WeightVector;

#[derive(Debug, Clone, PartialEq)]
pub struct BoostConfig {
    pub rounds: usize,
    /// Edges and margin estimates are clamped to `[-edge_cap, edge_cap]`.
    pub edge_cap: f64,
    /// Accuracy parameter `ν`; `None` selects `√(2 ln n / rounds)`.
    pub accuracy: Option<f64>,
}

impl BoostConfig {
    pub fn new(rounds: usize) -> Self {
        BoostConfig {
            rounds,
            edge_cap: 1.0 - 1e-10,
            accuracy: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.rounds == 0 {
            return Err(Error::InvalidArgument("rounds must be at least 1".into()));
        }
        if !(self.edge_cap > 0.0 && self.edge_cap < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "edge cap {} must lie in (0, 1)",
                self.edge_cap
            )));
        }
        if let Some(nu) = self.accuracy {
            if !(nu > 0.0) {
                return Err(Error::InvalidArgument("accuracy must be positive".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoostOutcome {
    pub ensemble: Ensemble,
    /// `γ_t` per completed round.
    pub edges: Vec<f64>,
    /// `ϱ_t` per completed round.
    pub margin_estimates: Vec<f64>,
    /// Training stopped because the best edge was not positive.
    pub early_stopped: bool,
}

fn half_log_ratio(x: f64) -> f64 {
    0.5 * ((1.0 + x) / (1.0 - x)).ln()
}

pub fn adaboost_v(dataset: &Dataset, cfg: &BoostConfig) -> Result<BoostOutcome> {
    cfg.validate()?;
    let n = dataset.len();
    let cap = cfg.edge_cap;
    let nu = cfg
        .accuracy
        .unwrap_or_else(|| (2.0 * (n.max(2) as f64).ln() / cfg.rounds as f64).sqrt());

    let mut dist = vec![1.0 / n as f64; n];
    let mut stumps = Vec::with_capacity(cfg.rounds);
    let mut alphas = Vec::with_capacity(cfg.rounds);
    let mut edges = Vec::with_capacity(cfg.rounds);
    let mut estimates = Vec::with_capacity(cfg.rounds);
    let mut min_edge = f64::INFINITY;
    let mut early_stopped = false;

    for _ in 0..cfg.rounds {
        let fit = train_stump(dataset, &dist)?;
        if !(fit.edge > 0.0) {
            early_stopped = true;
            break;
        }
        let gamma = fit.edge.clamp(-cap, cap);
        min_edge = min_edge.min(gamma);
        let estimate = (min_edge - nu).clamp(-cap, cap);
        let alpha = (half_log_ratio(gamma) - half_log_ratio(estimate)).max(0.0);

        let mut mass = 0.0;
        for (i, d) in dist.iter_mut().enumerate() {
            *d *= (-alpha * dataset.label(i) * fit.stump.predict(dataset.point(i))).exp();
            mass += *d;
        }
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "sample distribution degenerated (mass {mass})"
            )));
        }
        dist.iter_mut().for_each(|d| *d /= mass);

        stumps.push(fit.stump);
        alphas.push(alpha);
        edges.push(fit.edge);
        estimates.push(estimate);
    }

    if stumps.is_empty() {
        return Err(Error::InvalidArgument("no stump with positive edge".into()));
    }
    Ok(BoostOutcome {
        ensemble: Ensemble::new(stumps, WeightVector::new(alphas))?,
        edges,
        margin_estimates: estimates,
        early_stopped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::margin::{build_margin_matrix, min_margin};

    fn line(xs: &[f64], ys: &[i8]) -> Dataset {
        let rows: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x]).collect();
        Dataset::from_rows(&rows, ys.to_vec()).unwrap()
    }

    #[test]
    fn perfect_stump_gives_unit_margin() {
        let ds = line(&[1.0, 2.0, 3.0, 4.0], &[1, 1, -1, -1]);
        let out = adaboost_v(&ds, &BoostConfig::new(3)).unwrap();
        let e = out.ensemble.normalized();
        let u = build_margin_matrix(&ds, e.hypotheses()).unwrap();
        assert!((min_margin(&u, e.weights()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn weights_nonnegative_and_nonzero() {
        let ds = line(
            &[0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0],
            &[1, -1, -1, 1, 1, -1, 1, -1],
        );
        let out = adaboost_v(&ds, &BoostConfig::new(40)).unwrap();
        assert_eq!(out.ensemble.len(), 40);
        assert!(out.ensemble.weights().is_nonnegative());
        assert!(out.ensemble.weights().l1() > 0.0);
        assert!(!out.early_stopped);
    }

    #[test]
    fn rejects_bad_config() {
        let ds = line(&[0.0, 1.0], &[1, -1]);
        assert!(adaboost_v(&ds, &BoostConfig::new(0)).is_err());
        let cfg = BoostConfig {
            edge_cap: 1.0,
            ..BoostConfig::new(2)
        };
        assert!(adaboost_v(&ds, &cfg).is_err());
    }

    #[test]
    fn zero_edge_stops_early() {
        // identical points with opposite labels: every stump has edge 0
        let ds = line(&[1.0, 1.0], &[1, -1]);
        assert!(adaboost_v(&ds, &BoostConfig::new(5)).is_err());
    }
}
