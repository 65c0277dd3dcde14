//! Sparsification of weighted voting classifiers.
//!
//! Given a margin matrix `U` (entry `(i, j)` is the margin of hypothesis `j`
//! on point `i`) and normalized weights `w`, [`sparsify()`] finds `w'` with at
//! most `T` nonzeros and `‖U w - U w'‖∞ = O(√(log(2 + n/T) / T))`. The
//! reduction is built on constructive discrepancy minimization
//! ([`discrepancy`]). [`boost`] supplies AdaBoostV over decision stumps and
//! the train-then-sparsify pipeline, and [`eval`] the scoring used to
//! compare full, truncated, sparsified and sampled classifiers.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod boost;
pub mod dataset;
pub mod discrepancy;
pub mod error;
pub mod eval;
pub mod margin;
pub mod matrix;
pub mod seed;
pub mod sparsify;

pub use boost::{
    adaboost_v, dictionary_multiplier, lp_optimal_margin, sparsiboost, train_stump, BoostConfig,
    BoostOutcome, DecisionStump, Ensemble, SparsiBoostOutcome,
};
pub use dataset::{Dataset, Hypothesis};
pub use discrepancy::{
    bruteforce_min_discrepancy, full_coloring, halve_columns, minority_sign, partial_coloring,
    Coloring, ColoringConfig, ColumnSubset, PartialColoring,
};
pub use error::{Error, Result};
pub use eval::{accuracy, auc, bias_correct, predict_scores, ScoreVector};
pub use margin::{
    build_margin_matrix, cumulative_margin_curve, margins, min_margin, sup_norm_diff, MarginMatrix,
    MarginVector, WeightVector,
};
pub use matrix::Matrix;
pub use seed::Seed;
pub use sparsify::{
    halve, importance_sample, sparsification_rate, sparsify, truncate_top, SparsifyConfig,
    SparsifyReport,
};
