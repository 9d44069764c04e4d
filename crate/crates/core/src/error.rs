use thiserror::Error;

/// Errors raised by the library.
///
/// `LemmaViolation` and `TheoremViolation` are not ordinary failures: they
/// mean a proven statement was contradicted on a concrete instance, and they
/// carry a JSON witness describing that instance.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("subset {0} is not spherical")]
    NotSpherical(String),
    #[error("rank error: {0}")]
    Rank(String),
    #[error("roots {0} and {1} have the same wall")]
    SameWall(String, String),
    #[error("no shared rank-2 residue: {0}")]
    NoSharedResidue(String),
    #[error("{0} is not a reflection")]
    NotReflection(String),
    #[error("inconclusive within ball of radius {radius}: {detail}")]
    BallInconclusive { radius: usize, detail: String },
    #[error("panels are not adjacent: {0}")]
    NotAdjacent(String),
    #[error("search budget of {0} steps exceeded")]
    BudgetExceeded(usize),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("lemma violated ({lemma}): {witness}")]
    LemmaViolation {
        lemma: String,
        witness: serde_json::Value,
    },
    #[error("theorem violated ({theorem}): {witness}")]
    TheoremViolation {
        theorem: String,
        witness: serde_json::Value,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn lemma(lemma: &str, witness: serde_json::Value) -> Self {
        Error::LemmaViolation {
            lemma: lemma.to_string(),
            witness,
        }
    }

    pub(crate) fn theorem(theorem: &str, witness: serde_json::Value) -> Self {
        Error::TheoremViolation {
            theorem: theorem.to_string(),
            witness,
        }
    }
}
