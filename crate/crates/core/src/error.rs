use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("newick syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("tree is not binary: {0}")]
    NonBinary(String),

    #[error("duplicate taxon `{0}`")]
    DuplicateTaxon(String),

    #[error("edge length must be strictly positive, got {0}")]
    NonPositiveLength(String),

    #[error("invalid taxon label `{0}`")]
    InvalidLabel(String),

    #[error("invalid rational literal `{0}`")]
    InvalidRational(String),

    #[error("unknown taxon `{0}`")]
    UnknownTaxon(String),

    #[error("taxon sets differ")]
    TaxonMismatch,

    #[error("operation needs at least {needed} taxa, got {got}")]
    TooFewTaxa { needed: usize, got: usize },

    #[error("taxa must be pairwise distinct")]
    RepeatedTaxon,

    #[error("not a triplet cover: interior vertex {0} has empty support")]
    NotACover(String),

    #[error("{what} exceeds capacity: {actual} > {limit}")]
    Capacity {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("distances are not realizable over this cover ({stage}): {detail}")]
    Unrealizable { stage: String, detail: String },

    #[error("shelling rejected at step {step}: {reason}")]
    InvalidShelling { step: usize, reason: String },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn unrealizable(stage: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Unrealizable {
            stage: stage.into(),
            detail: detail.into(),
        }
    }
}
