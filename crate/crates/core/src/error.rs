use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("outside the domain: {0}")]
    DomainViolation(String),
    #[error("parameter violation: {0}")]
    ParamViolation(String),
    #[error("range violation: {0}")]
    RangeViolation(String),
    #[error("singular evaluation: {0}")]
    Singularity(String),
    #[error("fold singularity at ({x}, {y}): z = {z}")]
    FoldSingularity { x: f64, y: f64, z: f64 },
    #[error("degenerate second-order data (Δ = {0})")]
    DegenerateDelta(f64),
    #[error("no real solution (discriminant P = {0})")]
    NoRealSolution(f64),
    #[error("angle lift is ambiguous between samples {index} and {next}: 2θ jumped by {jump}")]
    LiftAmbiguity { index: usize, next: usize, jump: f64 },
    #[error("quadrature did not reach tolerance {tol} (estimate {estimate})")]
    QuadratureFailure { tol: f64, estimate: f64 },
    #[error("linear system for the angle gradient is singular (det = {0})")]
    SingularSystem(f64),
    #[error("all compatibility coefficients vanish")]
    DegenerateAllZero,
    #[error("the two angle branches collide (derivative factor {0})")]
    BranchCollision(f64),
    #[error("metric is not positive definite (f = {0})")]
    NotPositiveDefinite(f64),
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("degree violation: {0}")]
    DegreeViolation(String),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(u32, u32),
    #[error("identity `{identity}` failed: {witness}")]
    IdentityFailure { identity: String, witness: String },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not positive semidefinite; witness vector {witness:?}")]
    NotPsd { witness: Vec<String> },
    #[error("point is not on the unit sphere (|x| = {0})")]
    NotOnSphere(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(x: f64, y: f64, reason: &str) -> Self {
        Error::DomainViolation(format!("({x}, {y}): {reason}"))
    }
}
