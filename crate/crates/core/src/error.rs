use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("coordinate {coord} of point {point} is not finite")]
    NonFiniteCoordinate { point: usize, coord: usize },
    #[error("epsilon must be nonnegative, got {0}")]
    NegativeEpsilon(f64),
    #[error("point set is empty")]
    EmptyGround,
    #[error("points have inconsistent dimension: point {point} has {found}, expected {expected}")]
    DimensionMismatch { point: usize, expected: usize, found: usize },
    #[error("grid is not uniformly spaced")]
    NonUniformGrid,
    #[error("the zero-one loss has no margin function phi")]
    ZeroOneHasNoPhi,
    #[error("eta = {0} is outside [0, 1]")]
    EtaOutOfRange(f64),
    #[error("eta = {0} is at the boundary, where the derivative diverges")]
    EtaAtBoundary(f64),
    #[error("h1 must be nonnegative, found {value} at point {point}")]
    NegativeH { point: usize, value: f64 },
    #[error("total masses differ: {0} vs {1}")]
    MassMismatch(f64, f64),
    #[error("negative mass {value} at index {index}")]
    NegativeMass { index: usize, value: f64 },
    #[error("vector length {found} does not match ground set size {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("instance too large for exhaustive search: {0}")]
    InstanceTooLarge(String),
    #[error("pair (h0, h1) violates the feasibility constraint at point {point} (eta = {eta})")]
    InfeasiblePair { point: usize, eta: f64 },
    #[error("infeasible dual: {0}")]
    InfeasibleDual(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("write error: {0}")]
    Write(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
