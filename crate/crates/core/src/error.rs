use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TorexError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("inequality with zero normal vector")]
    ZeroNormal,
    #[error("polyhedron is unbounded")]
    UnboundedPolyhedron,
    #[error("zonotope generators do not span the ambient space")]
    DegenerateZonotope,
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("fan is not Fano")]
    NotFano,
    #[error("points do not span a simplicial polytope: {0}")]
    NotSimplicial(String),
    #[error("origin is not in the interior of the convex hull")]
    OriginNotInterior,
    #[error("vector of length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("no strictly positive relation among the rays")]
    NoInteriorRelation,
    #[error("Picard rank is {0}, expected 2")]
    NotRankTwo(usize),
    #[error("alpha relation has a zero entry at ray {0}")]
    ZeroAlphaEntry(usize),
    #[error("Picard rank {0} is too low")]
    RankTooLow(usize),
    #[error("{0} rays exceed the exhaustive subset limit")]
    TooManyRays(usize),
    #[error("representative polyhedron for subset {0:?} is unbounded")]
    NonProperConfiguration(Vec<usize>),
    #[error("fan has dimension {0}, expected 2")]
    NotDimTwo(usize),
    #[error("phi is not positive with (1/phi_i) t_i in convex position")]
    PhiNotConvex,
    #[error("certificate failure: {0}")]
    CertificateFailure(String),
    #[error("window kind {requested} does not match the fan ({reason})")]
    KindMismatch { requested: String, reason: String },
    #[error("no generic shift found after {0} attempts")]
    GenericityFailure(usize),
    #[error("shift is not generic: a class lies on the boundary")]
    NonGenericShift,
    #[error("no construction for Picard rank {rank} in dimension {dim}")]
    UnsupportedShape { rank: usize, dim: usize },
    #[error("normalized volume {0} is not an integer")]
    NonIntegralCount(String),
    #[error("classes {0} and {1} have nonzero Hom in both directions")]
    HomCycle(usize, usize),
    #[error("figure needs a two-dimensional quotient plane, got {0}")]
    UnsupportedDimension(usize),
    #[error("invalid class: {0}")]
    InvalidClass(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, TorexError>;
