use thiserror::Error;

/// Line/column of a token in circuit source text, both 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Position {
    pub line: usize,
    pub col: usize,
}

impl std::fmt::Display for Position {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ontic state index {0} is outside 1..=8")]
    InvalidOnticState(usize),
    #[error("invalid probability vector: {0}")]
    InvalidProbVec(String),
    #[error("invalid rotation: {0}")]
    InvalidRotation(String),
    #[error("Bloch vector has l1 norm {0} > 1")]
    OutsideOctahedron(String),
    #[error("outcome {outcome} does not lie on the {axis} axis")]
    OutcomeNotOnAxis { outcome: String, axis: char },
    #[error("probability vector is not an epistemic state")]
    NotEpistemic,
    #[error("invalid decomposition weights: {0}")]
    InvalidWeights(String),
    #[error("{pos}: lex error: {msg}")]
    Lex { pos: Position, msg: String },
    #[error("{pos}: parse error: {msg}")]
    Parse { pos: Position, msg: String },
    #[error("{pos}: mix weights must be nonnegative and sum to 1 (got {total})")]
    WeightsNotNormalized { pos: Position, total: String },
    #[error("{pos}: angle {angle} is not a nonzero quarter turn")]
    AngleNotQuarterTurn { pos: Position, angle: String },
    #[error("{pos}: not allowed in classical mode: {msg}")]
    ClassicalModeViolation { pos: Position, msg: String },
    #[error("{pos}: circuit must start with a single prepare or mix statement")]
    MissingPreparation { pos: Position },
}

impl Error {
    /// Source position for lexer and parser errors.
    pub fn position(&self) -> Option<Position> {
        match self {
            Error::Lex { pos, .. }
            | Error::Parse { pos, .. }
            | Error::WeightsNotNormalized { pos, .. }
            | Error::AngleNotQuarterTurn { pos, .. }
            | Error::ClassicalModeViolation { pos, .. }
            | Error::MissingPreparation { pos } => Some(*pos),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
