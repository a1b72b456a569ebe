use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("the described polyhedron is unbounded")]
    UnboundedInput,
    #[error("point set is not symmetric about the origin: {0}")]
    Asymmetric(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("point is not on the boundary of the unit ball")]
    NotOnBoundary,
    #[error("the zero vector has no support functionals")]
    ZeroVector,
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
    #[error("candidate {0} does not lie in the subspace")]
    BasisMismatch(String),
    #[error("query is degenerate: {0}")]
    DegenerateQuery(String),
    #[error("subspace dimension {m} is outside the range 1 < m < {n}")]
    DimensionOutOfRange { m: usize, n: usize },
    #[error("point lies in the subspace")]
    PointInSubspace,
    #[error("epsilon {0} is outside [0, 1)")]
    EpsilonOutOfRange(String),
    #[error("search exceeded the budget of {cap} linear systems")]
    BudgetExceeded { cap: u64 },
    #[error("zero set {0:?} is nonempty, so the minimal norming set is not unique")]
    NonEmptyZeroSet(Vec<usize>),
    #[error("{0}")]
    TooLarge(String),
    #[error("index {index} is out of range for {len} coordinates")]
    IndexOutOfRange { index: usize, len: usize },
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DegenerateInput(_) => "degenerate_input",
            Error::UnboundedInput => "unbounded_input",
            Error::Asymmetric(_) => "asymmetric",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::NotOnBoundary => "not_on_boundary",
            Error::ZeroVector => "zero_vector",
            Error::DependentBasis => "dependent_basis",
            Error::BasisMismatch(_) => "basis_mismatch",
            Error::DegenerateQuery(_) => "degenerate_query",
            Error::DimensionOutOfRange { .. } => "dimension_out_of_range",
            Error::PointInSubspace => "point_in_subspace",
            Error::EpsilonOutOfRange(_) => "epsilon_out_of_range",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::NonEmptyZeroSet(_) => "non_empty_zero_set",
            Error::TooLarge(_) => "too_large",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
