use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("row {row} of the transition matrix sums to {sum}, expected 1")]
    NotRowStochastic { row: usize, sum: f64 },

    #[error("transition matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("negative transition probability {value} at ({row}, {col})")]
    NegativeProbability { row: usize, col: usize, value: f64 },

    #[error("kernel is declared lazy but M({state},{state}) = {diagonal} < 1/2")]
    NotLazy { state: usize, diagonal: f64 },

    #[error("eigenvalue bound must lie in [0, 1), got {0}")]
    InvalidLambda(f64),

    #[error("length must be at least 1")]
    ZeroLength,

    #[error("cycle needs at least 3 states, got {0}")]
    CycleTooSmall(usize),

    #[error("block half-width {i} is invalid for a cycle of length {n} (need 1 <= i <= n/2 and 2i | n)")]
    InvalidBlockWidth { n: usize, i: usize },

    #[error("partition is not lumpable: states {x} and {y} put different mass on class {class} ({lhs} vs {rhs})")]
    NotLumpable {
        x: usize,
        y: usize,
        class: usize,
        lhs: f64,
        rhs: f64,
    },

    #[error("partition has {got} entries but the chain has {expected} states")]
    PartitionSize { expected: usize, got: usize },

    #[error("chain is not ergodic: {0}")]
    NotErgodic(String),

    #[error("chain has {states} states, above the dense-analysis cap of {cap}")]
    TooLarge { states: usize, cap: usize },

    #[error("empty input")]
    EmptyInput,

    #[error("paired sequences differ in length ({first} vs {second})")]
    LengthMismatch { first: usize, second: usize },

    #[error("value {value} lies outside the declared range [{lower}, {upper}]")]
    ValueOutOfRange { value: f64, lower: f64, upper: f64 },

    #[error("invalid range [{lower}, {upper}]")]
    InvalidRange { lower: f64, upper: f64 },

    #[error("paired traces must come from distinct randomness streams (both were {0})")]
    SharedStream(u64),

    #[error("accuracy must be positive, got {0}")]
    NonPositiveEpsilon(f64),

    #[error("failure probability must lie in (0, 1), got {0}")]
    InvalidDelta(f64),

    #[error("minimum stationary probability must lie in (0, 1], got {0}")]
    InvalidPiMin(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("coloring is not proper: edge ({u}, {v}) is monochromatic")]
    ImproperColoring { u: usize, v: usize },

    #[error("coloring has {got} entries for a graph on {expected} vertices")]
    ColoringLength { expected: usize, got: usize },

    #[error("color {color} at vertex {vertex} is outside 1..={k}")]
    ColorOutOfRange { vertex: usize, color: u16, k: u16 },

    #[error("restricted vertex set is empty")]
    EmptyRestriction,

    #[error("invalid edge ({u}, {v}) for a graph on {n} vertices")]
    InvalidEdge { u: usize, v: usize, n: usize },

    #[error("enumeration of {k}^{n} colorings exceeds the guard of {limit}")]
    EnumerationGuard { n: usize, k: u16, limit: u64 },

    #[error(
        "ergodicity floor violated: k = {k} but max degree is {d_max}; \
         Glauber dynamics needs k >= d_max + 2 (or an exact connectivity check on a small graph)"
    )]
    ErgodicityFloor { k: u16, d_max: usize },

    #[error("phase {phase} produced a non-positive ratio estimate {estimate}; the eigenvalue bound is probably wrong")]
    PhaseRatioNonPositive { phase: usize, estimate: f64 },

    #[error("{r} communities do not divide {n} vertices")]
    CommunitiesDontDivide { n: usize, r: usize },

    #[error("community index {index} out of range (r = {r})")]
    InvalidCommunity { index: usize, r: usize },

    #[error("probability {name} = {value} is outside [0, 1]")]
    InvalidProbability { name: &'static str, value: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Guard rejections: the input is well-formed but outside what the
    /// algorithms can safely handle.
    pub fn is_guard(&self) -> bool {
        matches!(
            self,
            Error::TooLarge { .. }
                | Error::EnumerationGuard { .. }
                | Error::ErgodicityFloor { .. }
                | Error::NotErgodic(_)
                | Error::NotLumpable { .. }
        )
    }

    /// Failures that only show up while a randomized run is in progress.
    pub fn is_statistical(&self) -> bool {
        matches!(self, Error::PhaseRatioNonPositive { .. })
    }
}
