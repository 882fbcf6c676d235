use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("inner series constant term has modulus {0} >= 1")]
    InnerConstantTooLarge(f64),
    #[error("series is not invertible: {0}")]
    NotInvertible(&'static str),
    #[error("base point {0} lies outside the open unit disk")]
    BasePointOutsideDisk(num_complex::Complex64),
    #[error("invalid weight sequence: {0}")]
    InvalidWeights(String),
    #[error("weight sequence covers degree {available}, degree {required} requested")]
    WeightsTooShort { required: usize, available: usize },
    #[error("series has degree {available}, degree {required} requested")]
    SeriesTooShort { required: usize, available: usize },
    #[error("parameter {0} lies outside the open unit disk")]
    ParameterOutsideDisk(num_complex::Complex64),
    #[error("kernel exponent kappa must be >= 1, got {0}")]
    InvalidKappa(f64),
    #[error("map is not a self-map of the disk (max boundary modulus {0})")]
    NotSelfMap(f64),
    #[error("degenerate linear-fractional map (normalized determinant {0:e})")]
    DegenerateMap(f64),
    #[error("composition collapsed to a degenerate map (normalized determinant {0:e})")]
    DegenerateComposition(f64),
    #[error("pole of the map lies in the closed unit disk")]
    PoleInsideDisk,
    #[error("no fixed point found: {0}")]
    NoFixedPointFound(String),
    #[error("fixed point {0} is not in the open disk")]
    NotInteriorFixedPoint(num_complex::Complex64),
    #[error("grid needs at least 9 points, got {0}")]
    GridDegenerate(usize),
    #[error("grid point pair leaves the domain of the kernel identity")]
    GridOutsideDomain,
    #[error("matrix dimension {0} exceeds the dense eigensolver limit of 512")]
    MatrixTooLarge(usize),
    #[error("eigensolver did not converge within its sweep budget")]
    ConvergenceFailure,
    #[error("derivative at the fixed point vanishes (|lambda| = {0:e})")]
    DerivativeZero(f64),
    #[error("derivative at the fixed point is not contractive (|lambda| = {0})")]
    DerivativeNotContractive(f64),
    #[error("Schroeder iteration did not converge after {iterations} iterations (last step {last_step:e})")]
    NoConvergence { iterations: usize, last_step: f64 },
    #[error("truncated Koenigs function has divergent norm profile (tail slope {0:e})")]
    DivergentKoenigsNorm(f64),
    #[error("expression error: {0}")]
    Expression(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
