use thiserror::Error;

use crate::diagram::Violation;
use crate::geometry::RatPoint;
use crate::invariants::Symbol;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid diagram: {} violation(s), first: {}", .0.len(), .0[0])]
    InvalidDiagram(Vec<Violation>),
    #[error("point {0} is not on the unit circle")]
    SeamPointOffCircle(Box<RatPoint>),
    #[error("directions {0} and {1} are codirectional")]
    CodirectionalVectors(usize, usize),
    #[error("direction {0} is the zero vector")]
    ZeroDirection(usize),
    #[error("symbol {0} appears more than once")]
    DuplicateSymbol(Symbol),
    #[error("symbol {0} is missing")]
    MissingSymbol(Symbol),
    #[error("symbol {0} does not belong to the alphabet of the word")]
    UnknownSymbol(Symbol),
    #[error("loop {0}: outgoing and incoming tangents at the vertex are opposite")]
    OppositeEndDirections(usize),
    #[error("loop counts differ: {0} vs {1}")]
    MismatchedLoopCount(usize, usize),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("move blocked: {0}")]
    MoveBlocked(String),
    #[error("no legal move found after {0} attempts")]
    Exhausted(usize),
    #[error("n = {n} exceeds the enumeration bound {max}")]
    LimitExceeded { n: usize, max: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
