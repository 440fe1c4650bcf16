use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("a lattice needs at least one element")]
    Empty,
    #[error("size limit exceeded: {n} > {limit}")]
    SizeLimitExceeded { n: usize, limit: usize },
    #[error("element index {index} out of range for {n} elements")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("not a poset: {a} and {b} lie on a cycle")]
    NotAPoset { a: usize, b: usize },
    #[error("no least or no greatest element")]
    Unbounded,
    #[error("not a lattice: {a} and {b} have no unique {bound}")]
    NotALattice { a: usize, b: usize, bound: &'static str },
    #[error("elements {low} and {high} are not comparable (expected {low} <= {high})")]
    NotComparable { low: usize, high: usize },
    #[error("element {element} lies outside the interval [{low}, {high}]")]
    NotInInterval { element: usize, low: usize, high: usize },
    #[error("lattice is not modular")]
    NotModular,
    #[error("{a} and {b} are not complements")]
    NotComplementPair { a: usize, b: usize },
    #[error("unknown check id {0:?}")]
    UnknownCheckId(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, err: impl std::fmt::Display) -> Self {
        Error::Io { path: path.into(), message: err.to_string() }
    }
}
