//! File formats, configuration and the experiment driver behind the
//! `sparsiboost` binary.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod compare;
pub mod config;
pub mod error;
pub mod io;
pub mod synthetic;

pub use compare::{run_compare, write_outputs, CompareReport, Method, MethodRecord, Status};
pub use config::RunConfig;
pub use error::{CliError, Result};
