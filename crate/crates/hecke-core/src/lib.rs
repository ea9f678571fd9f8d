//! Exact-arithmetic toolkit for the discrete-series invariants of affine Hecke
//! algebras with unequal parameters: root systems and their Weyl groups, generic
//! residual points, Plancherel mass functions with regularized evaluation on
//! cancellation loci, the equal-parameter formal-degree rational function, and
//! the three-parameter type-C module family built on Young bitableaux.
//!
//! All core computations are exact over arbitrary-precision rationals. The only
//! numeric layer is the regularized evaluator, which works at a configurable
//! decimal precision (`HECKE_PRECISION_DIGITS`, default 50).

pub mod linform;
pub mod linalg;
pub mod precise;
pub mod rootdata;
pub mod weylgrp;
pub mod residual;
pub mod massfn;
pub mod cnfamily;
pub mod tables;
pub mod accept;

pub use linform::{LinForm, Params, Rat, rat};

use thiserror::Error;

/// Errors surfaced by the library. The CLI maps `Usage` to exit code 1 and the
/// mathematical precondition violations to exit code 2.
#[derive(Debug, Error)]
pub enum HeckeError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, HeckeError>;
