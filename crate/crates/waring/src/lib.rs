//! Exact computation with real binary forms: Waring decompositions, real and
//! complex Waring rank, and the semialgebraic rank strata of low degrees.
//!
//! Everything is carried out over arbitrary-precision rationals. Irrational
//! quantities (decomposition nodes, certified residuals) are represented by
//! rational-endpoint intervals that are refined on demand; no floating point
//! enters any decision.
//!
//! Module map:
//!
//! * [`scalar`], [`interval`], [`matrix`] — rational scalars, interval
//!   enclosures, dense exact linear algebra (fraction-free elimination).
//! * [`univar`] — univariate polynomials over Q: gcd, square-free
//!   decomposition, Sturm sequences, real-root isolation.
//! * [`bezout`] — Bezoutian matrices, exact signatures, and the
//!   Borchardt–Jacobi distinct-real-root count.
//! * [`forms`] — the binary-form data model, decomposition expansion and
//!   verification, rank-1 detection, monomial helpers.
//! * [`decompose`] — the parameterized node construction producing some real
//!   Waring decomposition of length at most the degree.
//! * [`rank`] — minimal-length decompositions via Hankel kernels and
//!   positive-definite Bezoutians; real and complex rank.
//! * [`strata`] — closed-form rank classifiers for degrees 3 and 4 and the
//!   canonical degree-5 family, plus region-grid emission.
//! * [`io`] — the JSON schemas used by the command-line front end.

pub mod bezout;
pub mod decompose;
pub mod forms;
pub mod interval;
pub mod io;
pub mod matrix;
pub mod par;
pub mod rank;
pub mod sample;
pub mod scalar;
pub mod strata;
pub mod univar;

pub use forms::{BinaryForm, LinearFormTerm, WaringDecomposition};
pub use rank::{complex_rank, real_rank, RankCertificate, SearchBudget};
pub use scalar::Rat;

use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("system is inconsistent at row {row}")]
    NoSolution { row: usize },
    #[error("system is underdetermined (rank {rank} < {cols} columns)")]
    Underdetermined { rank: usize, cols: usize },
    #[error("zero form")]
    ZeroForm,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
