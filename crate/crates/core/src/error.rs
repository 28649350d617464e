use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot compose: codomain {left} does not match domain {right}")]
    CompositionDomain { left: String, right: String },

    #[error("index {index} out of range for {what} (bound {bound})")]
    Index {
        what: &'static str,
        index: usize,
        bound: usize,
    },

    #[error("variable x_{index} does not exist in a context of size {ctx}")]
    VariableOutOfRange { index: usize, ctx: usize },

    #[error("arity mismatch: expected context {expected}, found {found}")]
    Arity { expected: usize, found: usize },

    #[error("ill-formed expression in context {ctx}: {detail}")]
    IllFormed { ctx: usize, detail: String },

    #[error("signature error: {0}")]
    Signature(String),

    #[error("sort error: {0}")]
    Sort(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("structure error: {0}")]
    Structure(String),

    #[error("an object of length 0 has no sections")]
    NoSection,

    #[error("not a section: {0}")]
    SectionInvariant(String),

    #[error("{op} is undefined here: requires {violated}")]
    BopDomain { op: &'static str, violated: String },

    #[error("telescope error: {0}")]
    Telescope(String),

    #[error("consistency error: {0}")]
    Consistency(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Short machine-readable tag used in JSON error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::CompositionDomain { .. } => "composition-domain",
            Error::Index { .. } => "index",
            Error::VariableOutOfRange { .. } => "variable-out-of-range",
            Error::Arity { .. } => "arity",
            Error::IllFormed { .. } => "ill-formed",
            Error::Signature(_) => "signature",
            Error::Sort(_) => "sort",
            Error::Precondition(_) => "precondition",
            Error::Structure(_) => "structure",
            Error::NoSection => "no-section",
            Error::SectionInvariant(_) => "section-invariant",
            Error::BopDomain { .. } => "bop-domain",
            Error::Telescope(_) => "telescope",
            Error::Consistency(_) => "consistency",
            Error::Parse(_) => "parse",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
