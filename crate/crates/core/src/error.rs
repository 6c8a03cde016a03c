use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("element `{element}` does not belong to {group}")]
    ForeignElement { element: String, group: String },

    #[error("enumeration of {group} exhausted: requested {requested} elements, group has {order}")]
    ExhaustedEnumeration {
        group: String,
        requested: usize,
        order: u64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("the identity is not a valid argument here")]
    IdentityArgument,

    #[error("degenerate argument: {0}")]
    DegenerateArgument(String),

    #[error("explicit subset is not contained in its window: `{0}`")]
    OutsideWindow(String),

    #[error("cap exceeded after chain of orders {chain:?}: {reason}")]
    CapExceeded { chain: Vec<usize>, reason: String },

    #[error("input is not {m}-thin on the window: |Fx ∩ A| = {count} at x = `{witness}` (radius {radius}, bound {bound})")]
    NotMThin {
        m: usize,
        count: usize,
        witness: String,
        radius: String,
        bound: usize,
    },

    #[error("schedule infeasible: point `{point}` beyond the bounded prefix has |B(a, F·F) ∩ A| = {count} > {m} (radius {radius})")]
    ScheduleInfeasible {
        m: usize,
        count: usize,
        point: String,
        radius: String,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("not a partition: {0}")]
    NotAPartition(String),

    #[error("blocks `{first}` and `{second}` intersect in {size} points, above the cap {cap}")]
    InfiniteIntersection {
        first: String,
        second: String,
        size: usize,
        cap: usize,
    },

    #[error("not a subgroup: {0}")]
    NotASubgroup(String),

    #[error("chain does not cover: {0}")]
    ChainNotCovering(String),

    #[error("level partition arity: level {level} produced {parts} parts, target {target}")]
    LevelArity {
        level: usize,
        parts: usize,
        target: usize,
    },

    #[error("indexing collision: {0}")]
    IndexingCollision(String),

    #[error("seed {seed} failed the genericity audit: {reason}")]
    NonGeneric { seed: u64, reason: String },

    #[error("repeated index in ({i}, {j}, {k}): determinant vanishes")]
    RepeatedIndex { i: i64, j: i64, k: i64 },

    #[error("unsupported ordinal: {0}")]
    UnsupportedOrdinal(String),
}

impl Error {
    pub(crate) fn parse(column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            column,
            message: message.into(),
        }
    }
}
