use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("duplicate vertex label `{0}`")]
    DuplicateVertex(String),
    #[error("self-loop at vertex `{0}`")]
    SelfLoop(String),
    #[error("edge endpoint `{0}` is not a vertex")]
    UnknownEndpoint(String),
    #[error("label `{0}` occurs in both graphs")]
    LabelClash(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("element is outside the domain: {0}")]
    NotInDomain(String),
    #[error("operation needs a model with O = U and phi(U) != U")]
    NotShrinkingModel,

    #[error("unknown generator or token `{0}`")]
    UnknownGenerator(String),
    #[error("word length {len} exceeds the cap of {cap} letters")]
    WordTooLong { len: usize, cap: usize },
    #[error("words belong to different graphs")]
    GraphMismatch,
    #[error("vertex set is not a join factor of the graph")]
    NotAJoinFactor,

    #[error("regime mismatch: {0}")]
    RegimeMismatch(String),
    #[error("graph is disconnected; components: {0}")]
    DisconnectedGraph(String),
    #[error("relation violated: {relation} (witness {witness})")]
    RelationViolation { relation: String, witness: String },
    #[error("coordinate overflow in exact arithmetic")]
    Overflow,

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("stabiliser is infinite for this model")]
    InfiniteStabiliser,
    #[error("ball has no interior vertices")]
    NoInteriorVertices,
    #[error("window contains no cells")]
    EmptyWindow,
    #[error("cell list is not closed under faces: {0}")]
    NonClosedComplex(String),

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
