use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("singular linear system")]
    Singular,

    #[error("unsupported geometry: {0}")]
    UnsupportedGeometry(String),

    #[error("not a Reeb field: ray {ray} pairs to {pairing} with xi")]
    NotReeb { ray: String, pairing: String },

    #[error("invalid basis: {0}")]
    InvalidBasis(String),

    #[error("degenerate polytope: affine hull has dimension {dim} < {rank}")]
    DegeneratePolytope { dim: usize, rank: usize },

    #[error("polyhedron is unbounded")]
    Unbounded,

    #[error("polyhedron is empty")]
    Empty,

    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),

    #[error("unsupported moment degree {0} (supported: 0..=4)")]
    UnsupportedDegree(u32),

    #[error("quasi-regular (integral) xi required, got {0}")]
    QuasiRegularRequired(String),

    #[error("no weights of degree {0}")]
    EmptyDegree(u64),

    #[error("invalid direction: {0}")]
    InvalidDirection(String),

    #[error("path point {index}: {source}")]
    PathPoint { index: usize, source: Box<Error> },

    #[error("cannot parse rational {0:?}")]
    ParseRational(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}
