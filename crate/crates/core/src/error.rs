use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report.
///
/// Variants are grouped by the layer that raises them. Check-style
/// operations (`check_*`) report broken identities through
/// [`Error::AssertionFailure`] or [`Error::IdentityViolation`]; reaching one
/// of those on valid input means a bug or a mislabeled input file.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // algebra
    #[error("singular matrix")]
    SingularMatrix,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is not square")]
    NotSquare,
    #[error("exponent scale mismatch: {0}")]
    ScaleMismatch(String),
    #[error("pole at u = v = 1: a (w - 1) factor of the denominator does not cancel")]
    PoleAtOne,
    #[error("factor with zero discrepancy cannot be evaluated termwise")]
    ZeroDiscrepancyFactor,
    #[error("malformed value: {0}")]
    Parse(String),

    // graph model
    #[error("schema error: {0}")]
    Schema(String),
    #[error("graph is not connected")]
    DisconnectedGraph,
    #[error("self-loop at vertex {0}")]
    SelfLoop(String),
    #[error("intersection matrix is not negative definite")]
    NotNegativeDefinite,
    #[error("duplicate vertex id {0}")]
    DuplicateId(String),
    #[error("unknown vertex id {0}")]
    UnknownVertex(String),
    #[error("bad chain parameters n = {n}, q = {q}: need 0 < q < n and gcd(n, q) = 1")]
    BadParameters { n: i64, q: i64 },
    #[error("invalid blow-up site: {0}")]
    InvalidSite(String),

    // checks
    #[error("assertion failed: {0}")]
    AssertionFailure(String),
    #[error("precondition not met: {0}")]
    PreconditionNotMet(String),
    #[error("structure violation: {}", .0.join("; "))]
    StructureViolation(Vec<String>),
    #[error("identity violated: {0}")]
    IdentityViolation(String),

    // stringy invariants
    #[error("{0}")]
    NotAdmissible(String),
    #[error("inconsistent chain data: {0}")]
    InconsistentChainData(String),
    #[error("boundary curve of the chain has zero discrepancy")]
    ZeroBoundaryDiscrepancy,
    #[error("Hodge polynomial of the resolved surface must satisfy H(0,0) = 1 and be self-dual")]
    NonSelfDualHX,

    // star graphs
    #[error("bad Seifert data: {0}")]
    BadSeifertData(String),
    #[error("strictly log canonical: central discrepancy is zero")]
    StrictlyLogCanonical,
    #[error("star is not one of the log terminal triple cases")]
    NotInTable,
}

impl Error {
    /// Short stable name of the variant, used by the command-line front end.
    pub fn name(&self) -> &'static str {
        match self {
            Error::SingularMatrix => "SingularMatrix",
            Error::NotSymmetric => "NotSymmetric",
            Error::NotSquare => "NotSquare",
            Error::ScaleMismatch(_) => "ScaleMismatch",
            Error::PoleAtOne => "PoleAtOne",
            Error::ZeroDiscrepancyFactor => "ZeroDiscrepancyFactor",
            Error::Parse(_) => "Parse",
            Error::Schema(_) => "SchemaError",
            Error::DisconnectedGraph => "DisconnectedGraph",
            Error::SelfLoop(_) => "SelfLoop",
            Error::NotNegativeDefinite => "NotNegativeDefinite",
            Error::DuplicateId(_) => "DuplicateId",
            Error::UnknownVertex(_) => "UnknownVertex",
            Error::BadParameters { .. } => "BadParameters",
            Error::InvalidSite(_) => "InvalidSite",
            Error::AssertionFailure(_) => "AssertionFailure",
            Error::PreconditionNotMet(_) => "PreconditionNotMet",
            Error::StructureViolation(_) => "StructureViolation",
            Error::IdentityViolation(_) => "IdentityViolation",
            Error::NotAdmissible(_) => "NotAdmissible",
            Error::InconsistentChainData(_) => "InconsistentChainData",
            Error::ZeroBoundaryDiscrepancy => "ZeroBoundaryDiscrepancy",
            Error::NonSelfDualHX => "NonSelfDualHX",
            Error::BadSeifertData(_) => "BadSeifertData",
            Error::StrictlyLogCanonical => "StrictlyLogCanonical",
            Error::NotInTable => "NotInTable",
        }
    }
}
