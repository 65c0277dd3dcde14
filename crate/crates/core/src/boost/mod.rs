//! Decision stumps, AdaBoostV, the optimal-margin LP and the full
//! train-then-sparsify pipeline.

mod adaboost;
mod ensemble;
mod lp;
mod stump;

pub use adaboost::{adaboost_v, BoostConfig, BoostOutcome};
pub use ensemble::Ensemble;
pub use lp::lp_optimal_margin;
pub use stump::{train_stump, DecisionStump, StumpFit};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::margin::{build_margin_matrix, MarginMatrix};
use crate::seed::Seed;
use crate::sparsify::{sparsify, SparsifyConfig, SparsifyReport};

/// `c = ⌈ln n / ln(2 + n/T)⌉`, at least 1. The ratio does not depend on the
/// logarithm's base.
pub fn dictionary_multiplier(n: usize, t: usize) -> usize {
    let (nf, tf) = (n.max(2) as f64, t.max(1) as f64);
    let c = (nf.ln() / (2.0 + nf / tf).ln()).ceil();
    (c as usize).max(1)
}

#[derive(Debug, Clone)]
pub struct SparsiBoostOutcome {
    /// At most `T` hypotheses with nonnegative weights summing to 1.
    pub ensemble: Ensemble,
    /// The `cT`-hypothesis AdaBoostV ensemble with normalized weights.
    pub full: Ensemble,
    pub margin_matrix: MarginMatrix,
    pub multiplier: usize,
    pub report: SparsifyReport,
    pub boost_early_stopped: bool,
}

/// Trains `cT` stumps with AdaBoostV (`boost.rounds` is overridden) and
/// sparsifies the normalized weights down to at most `t` hypotheses.
pub fn sparsiboost(
    dataset: &Dataset,
    t: usize,
    boost: &BoostConfig,
    sparsify_cfg: &SparsifyConfig,
    seed: Seed,
) -> Result<SparsiBoostOutcome> {
    if t == 0 {
        return Err(Error::InvalidArgument("target must be at least 1".into()));
    }
    if dataset.len() < 2 {
        return Err(Error::InvalidArgument("need at least two points".into()));
    }
    let multiplier = dictionary_multiplier(dataset.len(), t);
    let cfg = BoostConfig {
        rounds: multiplier * t,
        ..boost.clone()
    };
    let trained = adaboost_v(dataset, &cfg)?;
    let full = trained.ensemble.normalized();
    let u = build_margin_matrix(dataset, full.hypotheses())?;
    let target = t.min(full.len());
    let (w, report) = sparsify(&u, full.weights(), target, sparsify_cfg, seed)?;
    let ensemble = full.with_weights(w)?.pruned();
    Ok(SparsiBoostOutcome {
        ensemble,
        full,
        margin_matrix: u,
        multiplier,
        report,
        boost_early_stopped: trained.early_stopped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplier_examples() {
        assert_eq!(dictionary_multiplier(1024, 32), 2);
        assert_eq!(dictionary_multiplier(100, 100), 5);
        assert_eq!(dictionary_multiplier(10, 1000), 4);
        assert_eq!(dictionary_multiplier(2, 1), 1);
    }
}
