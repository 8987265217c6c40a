use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("precision K={k} invalid for p={p} (need K >= 1 and p^K < 2^32)")]
    Precision { p: u64, k: u32 },
    #[error("precision K={k} too small: need K >= {need}")]
    PrecisionTooSmall { k: u32, need: u32 },
    #[error("operands live over different moduli")]
    ModulusMismatch,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("shift residues must be distinct mod p: {0}")]
    ShiftSet(String),
    #[error("entry at ({row},{col}) is not a unit")]
    NotUnit { row: usize, col: usize },
    #[error("coefficient of t^{degree} violates the integral profile of order {order}")]
    NotIntegral { degree: usize, order: u32 },
    #[error("integral orders differ")]
    OrderMismatch,
    #[error("top coefficient is not the identity")]
    NotMonic,
    #[error("perturbation must have exactly one nonzero row or column")]
    PerturbationShape,
    #[error("singularity pattern violated: {0}")]
    SingularityPattern(String),
    #[error("free part not allowed here: {0}")]
    FreePart(String),
    #[error("unknown formula kind `{0}`")]
    FormulaKind(String),
    #[error("unsupported number of shifts m={0}")]
    UnsupportedShiftCount(usize),
    #[error("target {0} is not cyclic")]
    NotCyclic(usize),
    #[error("pattern is not realizable by a single integral of this order")]
    Unclassifiable,
    #[error("invalid generator: {0}")]
    Generator(String),
    #[error("correction contract violated: {0}")]
    Correction(String),
    #[error("zone decomposition infeasible: {0}")]
    Infeasible(String),
    #[error("tuple is not realizable: {0}")]
    NotRealizable(String),
    #[error("verification failed at shift {0}")]
    Verification(usize),
    #[error("invalid ensemble: {0}")]
    Ensemble(String),
    #[error("group order {0} exceeds the enumeration cap")]
    GroupCap(u64),
    #[error("scan of p^{0} matrices exceeds the exhaustive budget")]
    ScanBudget(u32),
    #[error("count exceeds 128-bit range")]
    Overflow,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }
}
