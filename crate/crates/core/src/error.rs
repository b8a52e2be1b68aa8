use thiserror::Error;

use crate::set::Element;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed matroid description: {0}")]
    MalformedSpec(String),
    #[error("explicit matroid has no bases (violates B1)")]
    EmptyBaseList,
    #[error("explicit base family is not a matroid: {0}")]
    NotAMatroid(String),
    #[error("element {0} is not in the ground set")]
    NotInGround(Element),
    #[error("set {0} is not independent")]
    NotIndependent(String),
    #[error("{what}: size {size} exceeds the exhaustive bound {bound}")]
    TooLarge {
        what: &'static str,
        size: usize,
        bound: usize,
    },
    #[error("deleted and contracted sets overlap at element {0}")]
    Overlap(Element),
    #[error("ground sets differ")]
    GroundMismatch,
    #[error("level {level} out of range for a matroid of rank {rank}")]
    LevelOutOfRange { level: i64, rank: usize },
    #[error("carriers belong to different matroids")]
    ForeignCarrier,
    #[error("template carriers are only meaningful over a finitary matroid")]
    TemplateOnFinite,
    #[error("invalid template: {0}")]
    InvalidTemplate(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("undecidable for a black-box oracle: {0}")]
    Undecidable(String),
    #[error("unsupported schema: {0}")]
    UnsupportedSchema(String),
    #[error("search exhausted after {0} candidates")]
    SearchExhausted(usize),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
