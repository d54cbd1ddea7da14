use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("singular jacobian at iteration {iteration}")]
    Singular { iteration: usize },

    #[error("max-iter: newton did not converge in {iterations} iterations (residual {residual:e})")]
    MaxIter { iterations: usize, residual: f64, last: Vec<Complex64> },

    #[error("quadrature stagnation: {nodes} nodes, last difference {difference:e}")]
    QuadratureStagnation { nodes: usize, difference: f64 },

    #[error("eigenvalue iteration did not converge for a {dim}x{dim} matrix")]
    EigenNoConvergence { dim: usize },

    #[error("root finder did not converge for degree {degree}")]
    RootFinder { degree: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("polynomial/matrix mismatch: polynomial path {poly}, matrix path {matrix}")]
    PolyMatrixMismatch { poly: f64, matrix: f64 },

    #[error("realness violated: zero {zero} has imaginary part {imag:e}")]
    RealnessViolated { zero: Complex64, imag: f64 },

    #[error("zeros are not distinct: separation {separation:e}")]
    NotDistinct { separation: f64 },

    #[error("pole: generating function denominator {denominator:e} at t = {t}")]
    Pole { t: Complex64, denominator: f64 },

    #[error("cauchy cross-check mismatch for n = {n}, zeta = {zeta}: quadrature {quadrature}, direct {direct}")]
    CrossCheck { n: usize, zeta: f64, quadrature: f64, direct: f64 },

    #[error("witness `{name}` failed: {detail}")]
    Witness { name: &'static str, detail: String },

    #[error("amplification cross-check failed: reduced {reduced}, full {full}")]
    AmplificationMismatch { reduced: f64, full: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
