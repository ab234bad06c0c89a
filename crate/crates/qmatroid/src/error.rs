use thiserror::Error;

/// Unified error type for the whole crate.
///
/// Variants are grouped by the layer that raises them; each one carries
/// enough context to be rendered as a machine-readable report.
#[derive(Debug, Clone, Error)]
pub enum Error {
    // --- field construction and arithmetic ---
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("modulus is reducible over GF({p}): {reason}")]
    Reducible { p: u64, reason: String },
    #[error("no default modulus for GF({p}^{m}); supply one explicitly")]
    NoDefaultModulus { p: u64, m: u32 },
    #[error("division by zero in GF({p}^{m})")]
    DivisionByZero { p: u64, m: u32 },
    #[error("invalid field element or modulus: {0}")]
    InvalidField(String),

    // --- subspace linear algebra ---
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("operation requires a nonzero space")]
    ZeroSpace,
    #[error("not a subspace of the expected ambient space: {0}")]
    NotASubspace(String),

    // --- oracle construction ---
    #[error("uniform rank {k} out of range 0..={n}")]
    KOutOfRange { k: u32, n: u32 },
    #[error("generator matrix does not have full row rank")]
    RankDeficientG,
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("cyclic-flat family is empty")]
    EmptyFamily,
    #[error("cyclic-flat family is inconsistent: {0}")]
    InconsistentFamily(String),
    #[error("not a partial spread: {0}")]
    NotASpread(String),
    #[error("wrong dimension for a spread construction: {0}")]
    WrongDimension(String),
    #[error("not a spread set: {0}")]
    NotASpreadSet(String),
    #[error("ground spaces do not match: {0}")]
    GroundMismatch(String),
    #[error("equivalence map is singular")]
    SingularAlpha,
    #[error("ground space has dimension zero")]
    ZeroGround,

    // --- families ---
    #[error("subspace is not a member of the family")]
    NotAMember,
    #[error("family was not computed from an oracle; meet/join need one")]
    NotComputedFromOracle,

    // --- budgets and I/O ---
    #[error("budget exceeded after {spent_ms} ms ({progress})")]
    BudgetExceeded { spent_ms: u64, progress: String },
    #[error("malformed spec: {0}")]
    BadSpec(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable code for CLI error reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "not_prime",
            Error::Reducible { .. } => "reducible",
            Error::NoDefaultModulus { .. } => "no_default_modulus",
            Error::DivisionByZero { .. } => "division_by_zero",
            Error::InvalidField(_) => "invalid_field",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::ZeroSpace => "zero_space",
            Error::NotASubspace(_) => "not_a_subspace",
            Error::KOutOfRange { .. } => "k_out_of_range",
            Error::RankDeficientG => "rank_deficient_g",
            Error::FieldMismatch(_) => "field_mismatch",
            Error::EmptyFamily => "empty_family",
            Error::InconsistentFamily(_) => "inconsistent_family",
            Error::NotASpread(_) => "not_a_spread",
            Error::WrongDimension(_) => "wrong_dimension",
            Error::NotASpreadSet(_) => "not_a_spread_set",
            Error::GroundMismatch(_) => "ground_mismatch",
            Error::SingularAlpha => "singular_alpha",
            Error::ZeroGround => "zero_ground",
            Error::NotAMember => "not_a_member",
            Error::NotComputedFromOracle => "not_computed_from_oracle",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::BadSpec(_) => "bad_spec",
            Error::Io(_) => "io",
        }
    }
}
