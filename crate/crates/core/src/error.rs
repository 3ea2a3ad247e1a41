use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The instance is not a point of the space the operation expects.
    #[error("variant mismatch: expected {expected}, found {found}")]
    VariantMismatch { expected: String, found: String },

    /// The witness token does not have the shape the problem uses.
    #[error("witness {witness} does not match schema {schema}")]
    SchemaMismatch { schema: String, witness: String },

    /// A computation exceeded its step budget.
    #[error("divergence: step budget of {budget} queries exhausted")]
    Divergence { budget: u64 },

    /// A promise of the construction (disjointness, monotonicity, ...) was broken.
    #[error("promise broken: {0}")]
    PromiseBroken(String),

    #[error("no forward witness map: {0} is a demi-reduction")]
    NoForwardMap(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("malformed stream value at index {index}: {detail}")]
    MalformedStream { index: u64, detail: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
}

impl Error {
    pub fn mismatch(expected: impl Into<String>, found: impl Into<String>) -> Self {
        Error::VariantMismatch {
            expected: expected.into(),
            found: found.into(),
        }
    }

    pub fn is_divergence(&self) -> bool {
        matches!(self, Error::Divergence { .. })
    }
}
