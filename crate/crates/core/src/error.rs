use num_complex::Complex64;
use thiserror::Error;

/// Failure modes of the library.
///
/// Variants split into two families: parameter/validation problems (bad
/// input, wrong state class for an operation) and numerical failures (no
/// convergence, exceptional-point singularities). The CLI maps them onto
/// exit codes 2 and 3 respectively, see [`Error::is_validation`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("z = {0} is a branch point of the self-energy")]
    BranchPoint(Complex64),

    #[error("wavenumber k = {0} outside [0, pi]")]
    WavenumberOutOfRange(f64),

    #[error("energy {0} lies exactly on a band edge")]
    BandEdge(f64),

    #[error("the infinite chain has no bound states in the continuum")]
    NoBicInInfiniteChain,

    #[error("operation requires a {expected} state, got {found}")]
    WrongClass {
        expected: &'static str,
        found: &'static str,
    },

    #[error("normalization constant diverges: |1 - g^2 dSigma/dz| = {0:e} at or too near an exceptional point")]
    NearExceptionalPoint(f64),

    #[error("root verification failed: expected {expected} roots, kept {kept}; candidates: {candidates:?}")]
    RootCount {
        expected: usize,
        kept: usize,
        /// (raw polynomial root, polished root, |eta| after polishing)
        candidates: Vec<(Complex64, Complex64, f64)>,
    },

    #[error("Newton iteration did not converge after {} steps (last |eta| = {residual:e})", trace.len())]
    NewtonDiverged {
        trace: Vec<Complex64>,
        residual: f64,
    },

    #[error("polynomial root finder did not converge after {0} iterations")]
    PolynomialRoots(usize),

    #[error("exceptional point search failed after {iterations} iterations, residuals |eta| = {eta:e}, |eta'| = {eta_prime:e}")]
    EpNotConverged {
        iterations: usize,
        eta: f64,
        eta_prime: f64,
    },

    #[error("exceptional point search converged to non-physical coupling g = {0}")]
    NonPositiveCoupling(f64),

    #[error("continuation lost branch {branch} at parameter {param}")]
    ContinuationFailed { branch: String, param: f64 },

    #[error("quadrature failed to reach tolerance: estimated error {0:e}")]
    Quadrature(f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// `true` for errors caused by the caller's input rather than by the
    /// numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidModel(_)
                | Error::InvalidArgument(_)
                | Error::WavenumberOutOfRange(_)
                | Error::BandEdge(_)
                | Error::NoBicInInfiniteChain
                | Error::WrongClass { .. }
                | Error::BranchPoint(_)
                | Error::Json(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
