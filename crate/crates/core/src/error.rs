use thiserror::Error;

/// Failures reported by the numerical routines.
///
/// Numeric payloads are stored as `f64` whatever scalar type produced them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("integrand returned a non-finite value at x = {abscissa}")]
    NonFiniteIntegrand { abscissa: f64 },

    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (best estimate {estimate:e}, error estimate {error_estimate:e})"
    )]
    NotConverged {
        estimate: f64,
        error_estimate: f64,
        subdivisions: usize,
    },

    #[error("no exponential decay detected before t = {cap}")]
    NoDecay { cap: f64 },

    #[error(
        "contour integral not converged with {nodes} nodes \
         (estimate {re:e}{im:+e}i, discrepancy {discrepancy:e}); increase the node count"
    )]
    ContourNotConverged {
        re: f64,
        im: f64,
        discrepancy: f64,
        nodes: usize,
    },

    #[error(
        "extremum at the edge of the omega window [{omega_min}, {omega_max}]; \
         enlarge the scan window"
    )]
    ExtremumOnBoundary { omega_min: f64, omega_max: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("wavefunction normalization drift {drift:e} exceeds tolerance")]
    Normalization { drift: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
