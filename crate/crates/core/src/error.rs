use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("pole of the gamma function at {0}")]
    Pole(f64),

    #[error("hypergeometric series diverges: {0}")]
    DivergentSeries(String),

    #[error("lower parameter {0} is a nonpositive integer reached before termination")]
    LowerParamPole(f64),

    #[error("contour violation: {0}")]
    ContourViolation(String),

    #[error("no convergence: {0}")]
    NonConvergent(String),

    #[error("imaginary residue {residue:e} exceeds guard {guard:e}")]
    InternalImaginaryResidue { residue: f64, guard: f64 },

    #[error("S-transform pole at z = -1")]
    PoleAtMinusOne,

    #[error("no physical root of the Stieltjes equation at z = {re} + {im}i")]
    NoPhysicalRoot { re: f64, im: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("numerical singularity: {0}")]
    NumericalSingularity(String),

    #[error("sample already scaled")]
    AlreadyScaled,

    #[error("empty sample")]
    EmptySample,

    #[error("contour collision: min |u - t| = {0:e}")]
    ContourCollision(f64),

    #[error("coincident points x = {x}, y = {y}")]
    CoincidentPoints { x: f64, y: f64 },

    #[error("unsupported r = {0}")]
    UnsupportedR(usize),
}
