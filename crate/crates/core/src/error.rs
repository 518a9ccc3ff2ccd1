//! Error types shared across the library.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series did not converge within {max_terms} terms")]
    NonConvergence { max_terms: usize },

    #[error("argument is a pole of Gamma_q2")]
    PoleOfGamma,

    #[error("spectral parameter is a pole of the c-function")]
    PoleOfC,

    #[error("parameter within {dist:e} of the singular set")]
    SingularParameter { dist: f64 },

    #[error("Re l is within {dist:e} of the critical line Re l = -1/2")]
    CriticalLine { dist: f64 },

    #[error("x = {x} is not a lattice point q^(-2j)")]
    NotOnLattice { x: f64 },

    #[error("functions live on different lattices")]
    LatticeMismatch,

    #[error("lattice too small: J = {j_max}, need J >= {need}")]
    LatticeTooSmall { j_max: usize, need: usize },

    #[error("index {index} out of range (max {max})")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("support reaches index {max_support}, allowed at most {limit}")]
    SupportTooWide { max_support: usize, limit: usize },

    #[error("the zero function has no relative defect")]
    ZeroFunction,

    #[error("internal consistency check failed: {0}")]
    InternalInconsistency(String),

    #[error("invalid configuration: {0}")]
    ConfigError(String),

    #[error("evaluation outside function domain: x = {x}")]
    EvaluationOutOfDomain { x: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
