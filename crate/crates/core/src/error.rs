//! Crate-wide error type.

use thiserror::Error;

/// Errors reported by the domain, solver, and decomposition layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} = {value:e} outside {expected}")]
    OutOfDomain { name: &'static str, value: f64, expected: &'static str },

    #[error("separation chain violated: need max X > min X > max Y > min Y")]
    Separation,

    #[error("degenerate domain: {0}")]
    Degenerate(&'static str),

    #[error("Mobius map evaluated too close to its pole at z = {0:e}")]
    Pole(f64),

    #[error("empty maximization slice in [{lo:e}, {hi:e}]")]
    EmptySlice { lo: f64, hi: f64 },

    #[error("domain can host only {capacity} insertion points, {needed} needed")]
    Cardinality { needed: usize, capacity: usize },

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(&'static str),

    #[error("line search stagnated at deviation {deviation:e}")]
    Stagnation { deviation: f64 },

    #[error("no convergence after {0} iterations")]
    MaxIter(usize),

    #[error("extremum at {0:e} coincides with a root or pole")]
    Coincidence(f64),

    #[error("cross-ratio mismatch: pair has {got:e}, solution has {expected:e}")]
    LambdaMismatch { got: f64, expected: f64 },

    #[error("Jacobi SVD did not converge within {0} sweeps")]
    SvdNoConvergence(usize),

    #[error("weights must be strictly positive")]
    NonPositiveWeight,

    #[error("invalid domain data: {0}")]
    InvalidDomain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
