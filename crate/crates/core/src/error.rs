use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("series of caps ({d1}, {d2}) needs {coeffs} coefficients, above the limit of {limit}")]
    ResourceLimit {
        d1: usize,
        d2: usize,
        coeffs: usize,
        limit: usize,
    },

    #[error("series caps ({have1}, {have2}) cannot reach derivative order ({m}, {n})")]
    CapsInsufficient {
        have1: usize,
        have2: usize,
        m: usize,
        n: usize,
    },

    /// An analytic quantity left its physical range. Signals a matrix or
    /// convention bug rather than bad user input.
    #[error("internal consistency violated: {0}")]
    InternalConsistency(String),

    #[error("heralded state undefined: success probability {0:e} is too small")]
    UndefinedState(f64),

    #[error("photon-number cutoff {cutoff} too small: truncated mass {tail:e}")]
    CutoffTooSmall { cutoff: usize, tail: f64 },

    #[error("herald impossible: probability {0:e}")]
    HeraldImpossible(f64),

    #[error("quadrature not converged: node doubling moved the result by {0:e}")]
    QuadratureNotConverged(f64),

    #[error("objective is divergent on the whole search interval")]
    NoOptimum,
}

pub type Result<T> = std::result::Result<T, Error>;
