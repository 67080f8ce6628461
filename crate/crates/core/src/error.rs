use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("structural mismatch: {0}")]
    Structure(String),

    #[error("invalid norm: {0}")]
    InvalidNorm(String),

    /// The search visited its node budget before it could decide. `lower_bound`
    /// is the largest radius up to which the search was complete.
    #[error("search budget of {budget} nodes exceeded (complete up to {lower_bound})")]
    BudgetExceeded { budget: usize, lower_bound: f64 },

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("triangle {triangle} violates the triangle inequality with lengths {lengths:?}")]
    TriangleInequality { triangle: String, lengths: [f64; 3] },

    #[error("relator of triangle {triangle} maps to {image}, not the identity")]
    RelatorViolation { triangle: String, image: String },

    #[error("complex mixes dimensions: {0}")]
    MixedDimension(String),

    #[error("homomorphism not attached")]
    MissingPhi,

    #[error("not phi-essential at this metric: no nontrivial loop exists")]
    NotEssential,

    #[error("no nontrivial classes: torsion-free abelianization of the target is zero")]
    NoNontrivialClasses,

    #[error("inconclusive: search budget exhausted, systole is at least {lower_bound}")]
    Inconclusive { lower_bound: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// Budget exhaustion of any kind. Drives the CLI's "inconclusive" exit code.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded { .. } | Error::Inconclusive { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
