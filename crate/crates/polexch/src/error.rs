use thiserror::Error;

/// Everything that can go wrong across the library.
///
/// Precision-contract violations are errors, not silent degradation: a
/// quadrature that cannot certify the requested digits reports how far it
/// got instead of returning an uncertified value.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid precision request: digits must be >= 1, got {0}")]
    InvalidDigits(u32),

    #[error("{name} = {value} outside domain {domain}")]
    OutOfDomain {
        name: &'static str,
        value: String,
        domain: &'static str,
    },

    #[error(
        "quadrature did not converge: error estimate {estimate} after {evaluations} \
         evaluations, target {target}"
    )]
    QuadratureDidNotConverge {
        estimate: String,
        target: String,
        evaluations: usize,
    },

    #[error("eigenvalue iteration did not converge at R = {r}: {detail}")]
    SolverDidNotConverge { r: String, detail: String },

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
