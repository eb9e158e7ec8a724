use thiserror::Error;

use crate::report::Report;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot compose {outer} after {inner}: codomain {codomain:?} does not match domain {domain:?}")]
    CompositionShape {
        outer: String,
        inner: String,
        codomain: Vec<String>,
        domain: Vec<String>,
    },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("duplicate identifier '{0}'")]
    Duplicate(String),

    #[error("'{element}' is not an element of {set}")]
    UnknownElement { element: String, set: String },

    #[error("missing image for '{element}' in transition from {set}")]
    MissingImage { element: String, set: String },

    #[error("unknown object '{0}'")]
    UnknownObject(String),

    #[error("unknown arrow '{0}'")]
    UnknownArrow(String),

    #[error("unknown parameter '{0}'")]
    UnknownParameter(String),

    #[error("unknown state '{0}'")]
    UnknownState(String),

    #[error("parameter set must be non-empty")]
    EmptyParams,

    #[error("a chain engine needs at least one object")]
    EmptyChain,

    #[error("edge relation has a cycle through {}", .0.join(" -> "))]
    Cycle(Vec<String>),

    #[error("map is not total: {0}")]
    PartialMap(String),

    #[error("expected an identity engine functor")]
    NotIdentityFunctor,

    #[error("mismatched dynamics: {0}")]
    Mismatch(String),

    #[error("invalid {what}: {report}")]
    Invalid { what: &'static str, report: Report },

    #[error("parse error at {path} (line {line}, column {column}): {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown document kind '{0}'")]
    UnknownKind(String),

    #[error("expected a '{expected}' document, found '{found}'")]
    WrongKind { expected: String, found: String },

    #[error("import '{name}': {message}")]
    Import { name: String, message: String },

    #[error("{path}: {inner}")]
    At { path: String, inner: Box<Error> },

    #[error("brute-force oracle refused: {candidates} candidates exceed the bound of {bound}")]
    OracleBound { candidates: u128, bound: u128 },
}

impl Error {
    pub fn invalid(what: &'static str, report: Report) -> Self {
        Error::Invalid { what, report }
    }

    /// Attaches a field path, keeping the innermost path first.
    pub fn at(self, path: impl Into<String>) -> Self {
        match self {
            Error::At { path: rest, inner } => Error::At {
                path: format!("{}.{rest}", path.into()),
                inner,
            },
            other => Error::At {
                path: path.into(),
                inner: Box::new(other),
            },
        }
    }

    /// The error beneath any location wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::At { inner, .. } => inner.root(),
            other => other,
        }
    }

    /// The violation report carried by law-checking failures.
    pub fn report(&self) -> Option<&Report> {
        match self.root() {
            Error::Invalid { report, .. } => Some(report),
            _ => None,
        }
    }
}
