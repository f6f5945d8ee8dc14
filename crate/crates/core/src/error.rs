use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("factorial of {0} overflows f64")]
    FactorialOverflow(String),
    #[error("invalid Levy measure: {0}")]
    InvalidMeasure(String),
    #[error("moment of order {order} does not converge ({detail})")]
    MomentDivergence { order: u32, detail: String },
    #[error("index {index} out of range (available: {available})")]
    IndexOutOfRange { index: usize, available: usize },
    #[error("restricted jump mass is infinite for eps = {eps}")]
    InfiniteMass { eps: f64 },
    #[error("point {0:?} lies outside the sampling box")]
    OutsideBox(Vec<f64>),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("Green function is singular at x = y = {0:?}")]
    SingularPoint(Vec<f64>),
    #[error("integral diverges: {0}")]
    Divergent(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Short machine-readable tag for error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::FactorialOverflow(_) => "factorial_overflow",
            Error::InvalidMeasure(_) => "invalid_measure",
            Error::MomentDivergence { .. } => "moment_divergence",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::InfiniteMass { .. } => "infinite_mass",
            Error::OutsideBox(_) => "outside_box",
            Error::Unsupported(_) => "unsupported",
            Error::Quadrature(_) => "quadrature",
            Error::Dimension { .. } => "dimension",
            Error::Parse(_) => "parse",
            Error::SingularPoint(_) => "singular_point",
            Error::Divergent(_) => "divergent",
        }
    }
}
