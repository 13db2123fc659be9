use thiserror::Error;

use crate::complex::VertexId;
use crate::scalar::ScalarError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("facet {0:?} repeats a vertex")]
    InvalidFacet(Vec<VertexId>),
    #[error("complex has no facets")]
    EmptyComplex,
    #[error("complex is not pure")]
    NotPure,
    #[error("{0:?} is not a face of the complex")]
    NotAFace(Vec<VertexId>),
    #[error("vertex {0} already belongs to the complex")]
    ApexInComplex(VertexId),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("a bracket touched by the computation vanished at this specialization")]
    ZeroBracketCollision,
    #[error("singular linear system while solving for a parameter form")]
    SingularSolve,
    #[error("elimination stalled: no invertible pivot in a nonzero row")]
    NoUnitPivot,
    #[error("not a normal pseudomanifold: {0}")]
    NotNormalPseudomanifold(String),
    #[error("apex coordinate functional is not surjective on the parameter space")]
    ConeParameterDegenerate,
    #[error("no face pairs nontrivially with the class")]
    NoWitnessFace,
    #[error("class reduces to zero")]
    ZeroClass,
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("hypothesis failure: {0}")]
    Hypothesis(String),
    #[error("resampling budget of {0} attempts exhausted")]
    ResampleExhausted(usize),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown builtin complex `{0}`")]
    UnknownBuiltin(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Errors that a fresh random specialization may cure.
    pub fn is_resamplable(&self) -> bool {
        matches!(
            self,
            Error::ZeroBracketCollision
                | Error::SingularSolve
                | Error::NoUnitPivot
                | Error::ConeParameterDegenerate
                | Error::Scalar(ScalarError::DerivativeAtPole)
                | Error::Scalar(ScalarError::PoleHit)
                | Error::Scalar(ScalarError::DivisionByZero)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
