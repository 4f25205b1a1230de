use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported dimension {0}: grids support n = 2 or n = 3")]
    UnsupportedDimension(usize),

    #[error("points per axis must be a power of two >= 8, got {0}")]
    NotPowerOfTwo(usize),

    #[error("radial weight exponent {exponent} >= n = {dim}: rho^(n-1-r*gamma) is not integrable at 0")]
    NonIntegrableWeight { exponent: f64, dim: usize },

    #[error("polar node {index} at {position:?} lies outside the safe interpolation region (|x_i| <= {limit})")]
    NodeOutsideBox {
        index: usize,
        position: Vec<f64>,
        limit: f64,
    },

    #[error("quadrature weight class mismatch: grid built for r*gamma = {grid}, norm needs {required}")]
    WeightMismatch { grid: f64, required: f64 },

    #[error("insufficient angular resolution for l_max = {requested} (grid supports {available})")]
    InsufficientResolution { requested: usize, available: usize },

    #[error("time {t} outside trajectory window [{start}, {end}]")]
    OutsideWindow { t: f64, start: f64, end: f64 },

    #[error("time {t} is not on the sample grid (t0 = {start}, dt = {dt})")]
    OffGrid { t: f64, start: f64, dt: f64 },

    #[error("trajectory is empty")]
    EmptyTrajectory,

    #[error("trajectory samples are not uniformly spaced")]
    NonUniformTimes,

    #[error("constraint violated: {0}")]
    ConstraintViolation(String),

    #[error("time {t} not resolvable: needs radius {required}, available {available}")]
    UnresolvableTime {
        t: f64,
        required: f64,
        available: f64,
    },

    #[error("zero data has no normalized quotient")]
    ZeroData,

    #[error("degenerate norm in {0}")]
    DegenerateNorm(String),

    #[error("contraction budget exceeded at iteration {iteration}: {detail}")]
    BudgetExceeded { iteration: usize, detail: String },

    #[error("Picard iteration did not reach tolerance {tol} in {iterations} iterations (last distance {last})")]
    MaxIterations {
        iterations: usize,
        tol: f64,
        last: f64,
    },

    #[error("inconsistent exponents: {0}")]
    Inconsistent(String),

    #[error("window bound {0} is not a power of two above the finest scale")]
    NotDyadic(f64),
}

impl Error {
    /// True when the error reports a numerical contract violation rather than
    /// malformed input. The command-line front end maps these to exit code 3.
    pub fn is_contract_violation(&self) -> bool {
        matches!(
            self,
            Error::UnresolvableTime { .. }
                | Error::NodeOutsideBox { .. }
                | Error::BudgetExceeded { .. }
                | Error::MaxIterations { .. }
                | Error::DegenerateNorm(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
