use thiserror::Error;

use crate::syntax::Path;
use crate::textio::SourceSpan;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("no redex at position {0:?}")]
    NotARedex(Path),
    #[error("the sum is already normal")]
    Normal,
    #[error("term is a head normal form; no head step")]
    HeadNormal,
    #[error("context needs {expected} hole argument(s), got {got}")]
    Arity { expected: usize, got: usize },
    #[error("reduction graph exceeded the node cap of {0}")]
    NodeCapExceeded(usize),
    #[error("parse error at {span}: {message}")]
    Parse { span: SourceSpan, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
