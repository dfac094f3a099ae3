use crate::exact::Rational;
use crate::geometry::Point;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point count {count} exceeds the resource cap {cap}")]
    CapExceeded { count: u64, cap: u64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("thickness {thickness} exceeds radius {radius}")]
    ThicknessExceedsRadius { radius: Box<Rational>, thickness: Box<Rational> },

    #[error("fraction undefined: the ball at {center} carries zero mass")]
    UndefinedFraction { center: Point },

    #[error("zero denominator: {0}")]
    ZeroDenominator(String),

    #[error("atom or displacement {0} lies outside the action's horizon")]
    HorizonOverflow(String),

    #[error("no legal color among {chi} for the ball at {center} of radius {radius}: the supplied constants are not a valid certificate")]
    CertificateViolation { center: Point, radius: Box<Rational>, chi: usize },

    #[error("sphere exhaustion ran {steps} rounds without capturing half of F: {diagnosis}")]
    ExhaustionOverrun { steps: usize, diagnosis: String },

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
