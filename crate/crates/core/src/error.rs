use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A recurrence asked for a coefficient that has not been computed yet.
    /// This is a bug guard; a correct driver never triggers it.
    #[error("sequencing error: A_{moment}^({order}) is not stored")]
    Sequencing { moment: usize, order: usize },

    #[error("arithmetic mode mismatch: spec requests {requested}, scalar type is {actual}")]
    ModeMismatch { requested: &'static str, actual: &'static str },

    /// The Padé linear system has no solution with unit constant denominator.
    #[error("[{denominator},{numerator}] Padé approximant is defective")]
    DefectiveApproximant { denominator: usize, numerator: usize },

    #[error("Padé denominator vanishes at lambda = {0}")]
    PoleAtEvaluationPoint(f64),

    #[error("eigensolver did not converge after {0} sweeps")]
    SolverNonConvergence(usize),
}
