use thiserror::Error;

use crate::conditions::ContractionVerdict;
use crate::path::Cycle;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Which side of an elementary strong shift equivalence failed its contraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EsseSide {
    First,
    Second,
}

impl std::fmt::Display for EsseSide {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EsseSide::First => f.write_str("V1"),
            EsseSide::Second => f.write_str("V2"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("dangling endpoint `{endpoint}` in {context}")]
    DanglingEndpoint { endpoint: String, context: String },
    #[error("zero multiplicity in {0}")]
    ZeroMultiplicity(String),
    #[error("ray `{0}` has an empty cycle")]
    EmptyCycle(String),
    #[error(
        "ray `{0}` has an infinite target multiplicity; ray positions must be finite emitters"
    )]
    InfiniteRayTarget(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("G0 may only contain core vertices (got ray `{0}`)")]
    RayInG0(String),
    #[error("the subgraph T has a cycle: {0}")]
    TNotAcyclic(Cycle),
    #[error("contraction conditions failed:\n{0}")]
    ConditionsFailed(Box<ContractionVerdict>),
    #[error("B_{0} is infinite")]
    BvInfinite(String),
    #[error("B_{0} is empty")]
    BvEmpty(String),
    #[error("expansion from `{0}` did not terminate within N(v) rounds")]
    Nonterminating(String),
    #[error("expansion from `{vertex}` reached the singular vertex `{leaf}` outside G0")]
    SingularLeaf { vertex: String, leaf: String },
    #[error("graph has {count} core vertices; the bound is {bound}")]
    TooLarge { count: usize, bound: usize },
    #[error("graph has tails")]
    HasTails,
    #[error("graph has sinks")]
    HasSinks,
    #[error("graph is not row-finite")]
    NotRowFinite,
    #[error("graph has rays")]
    HasRays,
    #[error("stage plan mismatch: {0}")]
    StageMismatch(String),
    #[error("vertex `{0}` has infinite degree in the delayed direction")]
    InfiniteDegree(String),
    #[error("not bipartite: {0}")]
    NotBipartite(String),
    #[error("contraction onto {side} failed:\n{verdict}")]
    EsseConditionsFailed {
        side: EsseSide,
        verdict: Box<ContractionVerdict>,
    },
    #[error("invalid labeling: {0}")]
    InvalidLabel(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("no passing instance after {0} attempts")]
    GenerationExhausted(usize),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable upper-case code used in machine-readable reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DuplicateId(_) => "DUPLICATE_ID",
            Error::DanglingEndpoint { .. } => "DANGLING_ENDPOINT",
            Error::ZeroMultiplicity(_) => "ZERO_MULTIPLICITY",
            Error::EmptyCycle(_) => "EMPTY_CYCLE",
            Error::InfiniteRayTarget(_) => "INFINITE_RAY_TARGET",
            Error::UnknownVertex(_) => "UNKNOWN_VERTEX",
            Error::RayInG0(_) => "RAY_IN_G0",
            Error::TNotAcyclic(_) => "T_NOT_ACYCLIC",
            Error::ConditionsFailed(_) => "CONDITIONS_FAILED",
            Error::BvInfinite(_) => "BV_INFINITE",
            Error::BvEmpty(_) => "BV_EMPTY",
            Error::Nonterminating(_) => "NONTERMINATING",
            Error::SingularLeaf { .. } => "SINGULAR_LEAF",
            Error::TooLarge { .. } => "TOO_LARGE",
            Error::HasTails => "HAS_TAILS",
            Error::HasSinks => "HAS_SINKS",
            Error::NotRowFinite => "NOT_ROW_FINITE",
            Error::HasRays => "HAS_RAYS",
            Error::StageMismatch(_) => "STAGE_MISMATCH",
            Error::InfiniteDegree(_) => "INFINITE_DEGREE",
            Error::NotBipartite(_) => "NOT_BIPARTITE",
            Error::EsseConditionsFailed { .. } => "CONDITIONS_FAILED",
            Error::InvalidLabel(_) => "INVALID_LABEL",
            Error::Unsupported(_) => "UNSUPPORTED",
            Error::Parse { .. } => "PARSE_ERROR",
            Error::GenerationExhausted(_) => "GENERATION_EXHAUSTED",
            Error::Io(_) => "IO_ERROR",
        }
    }
}
