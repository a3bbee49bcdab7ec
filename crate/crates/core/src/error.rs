use thiserror::Error;

/// Errors produced across the toolkit.
///
/// Element indices carried in variants are 0-based; `Display` renders them
/// 1-based so messages match the external table format.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed table: {0}")]
    Malformed(String),

    #[error("not associative: ({a1}*{b1})*{c1} != {a1}*({b1}*{c1})", a1 = .a + 1, b1 = .b + 1, c1 = .c + 1)]
    NotAssociative { a: usize, b: usize, c: usize },

    #[error("order {requested} exceeds the size cap of {cap}")]
    SizeCap { requested: usize, cap: usize },

    #[error("unknown semigroup family `{0}`")]
    UnknownFamily(String),

    #[error("element {} is out of range for a semigroup of order {order}", .element + 1)]
    ElementOutOfRange { element: usize, order: usize },

    #[error("subset is not closed under the product")]
    NotClosed,

    #[error("empty generator word")]
    EmptyWord,

    #[error("closure of the word exceeded {cap} states")]
    ClosureBudget { cap: usize },

    #[error("work estimate {work} exceeds the cap of {cap}")]
    WorkCap { work: u128, cap: u128 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
