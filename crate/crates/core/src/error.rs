use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("binomial coefficient C({n}, {k}) overflows u64")]
    Overflow { n: u64, k: i64 },

    #[error("malformed subset {subset:?} over ground set of size {ground_size}")]
    MalformedSubset { subset: Vec<usize>, ground_size: usize },

    #[error("rank {rank} out of range for {k}-subsets of [{ground_size}]")]
    RankOutOfRange { rank: u64, ground_size: usize, k: usize },

    #[error("field extension degree {0} is outside the supported range 1..=16")]
    UnsupportedDegree(u32),

    #[error("modulus {modulus:#x} is not an irreducible polynomial of degree {l}")]
    ReducibleModulus { l: u32, modulus: u32 },

    #[error("element {value} does not lie in GF(2^{l})")]
    ElementOutOfRange { value: u32, l: u32 },

    #[error("division by zero in GF(2^l)")]
    DivisionByZero,

    #[error("a {u}x{v} Cauchy matrix needs {needed} distinct points but GF(2^{l}) has {order}")]
    FieldTooSmall { u: usize, v: usize, l: u32, needed: u64, order: u64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    #[error("invalid scheme parameters: {0}")]
    InvalidParams(String),

    #[error("invalid demand vector: {0}")]
    InvalidDemands(String),

    #[error("inconsistent broadcast: {0}")]
    InconsistentBroadcast(String),

    #[error("decoding failed for user {user:?}: {reason}")]
    DecodeFailure { user: Vec<usize>, reason: String },

    #[error("memory {0} is outside the achievable range of the curve")]
    Infeasible(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("enumeration of {estimate} states exceeds the budget of {budget}")]
    BudgetExceeded { estimate: u128, budget: u128 },
}
