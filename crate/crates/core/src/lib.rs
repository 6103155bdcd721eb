//! Zolotarev numbers and minimax-optimal skeleton decompositions of the
//! Cauchy kernel `1/(x - y)` over separated real domains.
//!
//! The crate computes `Z_n(X, Y)` three ways (closed form on interval pairs,
//! an equioscillation solver on finite unions of closed intervals and point
//! sets, and heuristic partition bounds on point sets) and turns certified
//! nodes into numerically stable rank-`r` skeleton decompositions with
//! condition-number diagnostics and an SVD comparison harness.
//!
//! All numerical kernels are generic over the scalar type through [`Real`];
//! `f64` aliases for the main types live at the crate root.

pub mod analytic;
pub mod domain;
pub mod elliptic;
mod error;
pub mod heuristic;
mod real;
pub mod skeleton;
pub mod solver;
pub mod svd_compare;

pub use error::{Error, Result};
pub use real::{LogSigned, Real};

pub type Domain64 = domain::Domain<f64>;
pub type SeparatedPair64 = domain::SeparatedPair<f64>;
pub type AnalyticSolution64 = analytic::AnalyticSolution<f64>;
pub type Equioscillator64 = solver::Equioscillator<f64>;
pub type SolveReport64 = solver::SolveReport<f64>;
pub type SkeletonDecomposition64 = skeleton::SkeletonDecomposition<f64>;
pub type DenseMatrix64 = svd_compare::DenseMatrix<f64>;
pub type ComparisonReport64 = svd_compare::ComparisonReport<f64>;
