use thiserror::Error;

/// Errors raised by loaders, builders and the operations that have
/// preconditions beyond "the input is a verified category".
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed table: {0}")]
    MalformedTable(String),
    #[error("`{0}` and `{1}` are not parallel")]
    NotParallel(String, String),
    #[error("`{0}` and `{1}` are not composable")]
    NotComposable(String, String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("source and target do not match: {0}")]
    Mismatch(String),
    #[error("not a Cartesian restriction category: {0}")]
    NotCartesian(String),
    #[error("not a restriction functor: {0}")]
    NotAFunctor(String),
    #[error("not a latent fibration: {0}")]
    NotAFibration(String),
    #[error("no cleavage: {0}")]
    NotCloven(String),
    #[error("no prone lift of `{base}` at `{object}`")]
    MissingLift { object: String, base: String },
    #[error("not admissible: {0}")]
    NotAdmissible(String),
    #[error("not hyperconnected: {0}")]
    NotHyperconnected(String),
    #[error("`{0}` is not hyper-open")]
    NotHyperOpen(String),
    #[error("not r-split: {0}")]
    NotRSplit(String),
    #[error("not an M-category: {0}")]
    NotMCategory(String),
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error("cannot read `{path}`: {message}")]
    Io { path: String, message: String },
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string().split(" at line ").next().unwrap_or_default().to_string(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
