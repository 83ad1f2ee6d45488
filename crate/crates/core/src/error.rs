use crate::geometry::{LineKey, Point};

/// Errors raised by board construction, solvers, the oracle and the text formats.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("identical points {0}: a line needs two distinct points")]
    IdenticalPoints(Point),

    #[error("duplicate point {point} at indices {first} and {second}")]
    DuplicatePoint {
        point: Point,
        first: usize,
        second: usize,
    },

    #[error("need at least {required} points, got {got}")]
    TooFewPoints { required: usize, got: usize },

    #[error("{points} points but {weights} weights")]
    LengthMismatch { points: usize, weights: usize },

    #[error("weight {value} at index {index} is not +1 or -1")]
    InvalidWeight { index: usize, value: i64 },

    #[error("{0} is not a connecting line of the board")]
    UnknownLine(LineKey),

    #[error("point set is collinear")]
    Collinear,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("line {line} through tree edge ({child}, {parent}) carries {count} active points")]
    NonOrdinaryEdge {
        child: usize,
        parent: usize,
        line: LineKey,
        count: usize,
    },

    #[error("oracle cap exceeded: n={n}, rank={rank}, cap={cap}")]
    CapExceeded { n: usize, rank: usize, cap: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("infeasible instance: {0}")]
    Infeasible(String),

    #[error("internal invariant failure: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
