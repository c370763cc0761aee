use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("column {column} has norm {norm:e}, below tolerance")]
    ZeroColumn { column: usize, norm: f64 },
    #[error("column {column} has norm {norm}, not within tolerance of 1")]
    NotNormalized { column: usize, norm: f64 },
    #[error("non-finite entry at row {row}, column {column}")]
    NonFiniteEntry { row: usize, column: usize },
    #[error("dictionary shape mismatch: {0}")]
    Shape(String),
    #[error("coherence is undefined for a single-atom dictionary")]
    SingleAtom,
    #[error("sparsity k = {k} requires 2k <= N = {n_atoms}")]
    SparsityTooLarge { k: usize, n_atoms: usize },
    #[error("supports overlap at atom {0}")]
    OverlappingSupports(usize),
    #[error("invalid support: {0}")]
    InvalidSupport(String),
    #[error("enumeration budget exceeded: {needed} units requested, limit {limit}")]
    BudgetExceeded { needed: u128, limit: u128 },
    #[error("target vector is zero")]
    ZeroTarget,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("eps = {eps} out of range, must lie in (0, {max})")]
    EpsOutOfRange { eps: f64, max: f64 },
    #[error("dimension too small: {0}")]
    DimensionTooSmall(String),
    #[error("k/2 is not an integer (d = {0})")]
    OddSplit(u32),
    #[error("kerdock dictionaries need an even m >= 2, got {0}")]
    OddDimension(u32),
    #[error("kerdock set check failed: {0}")]
    KerdockSetInvalid(String),
    #[error("s = {s} out of range 1..={n}")]
    SOutOfRange { s: usize, n: usize },
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("no multi-solution witness found within {iterations} iterations")]
    WitnessNotFound { iterations: usize },
}
