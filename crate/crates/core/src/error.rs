use alloc::string::String;

/// Everything that can go wrong in the core crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("multiplication table is not square or has out-of-range entries: {0}")]
    MalformedTable(String),
    #[error("table is not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NonAssociative { a: usize, b: usize, c: usize },
    #[error("table has no identity element")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    MissingInverse(usize),
    #[error("matrices do not form a projective representation: U({g})U({h}) is not proportional to U({g}{h}) (residual {residual:.3e})")]
    NotARep { g: usize, h: usize, residual: f64 },
    #[error("matrix for element {element} is not unitary (residual {residual:.3e})")]
    NonUnitary { element: usize, residual: f64 },
    #[error("invalid multiplier: {0}")]
    BadMultiplier(String),
    #[error("representations belong to different groups")]
    GroupMismatch,
    #[error("representations carry different multipliers")]
    MultiplierMismatch,
    #[error("catalog does not exhaust the representation: {0}")]
    IncompleteCatalog(String),
    #[error("unknown irrep or catalog {0}")]
    UnknownIrrep(String),
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("state of {requested} coefficients exceeds the size limit {limit}")]
    SizeLimit { requested: u128, limit: u128 },
    #[error("tolerance-ambiguous invariant subspace split (gap {gap:.3e})")]
    NumericalDegeneracy { gap: f64 },
    #[error("tensors generate different vectors (relative distance {distance:.3e} at N = {n})")]
    NotEquivalent { n: usize, distance: f64 },
    #[error("no gauge transformation found: {0}")]
    GaugeNotFound(String),
    #[error("tensor is not in canonical form: {0}")]
    NotInCF(String),
    #[error("tensor is not normal: {0}")]
    NotNormal(String),
    #[error("virtual representation extraction is degenerate: {0}")]
    ExtractionDegenerate(String),
    #[error("physical space does not decompose: {0}")]
    NotDecomposable(String),
    #[error("generators violate the commutation relations (residual {residual:.3e})")]
    BadAlgebra { residual: f64 },
    #[error("irrep {0} does not occur in the product decomposition")]
    ZeroByWignerEckart(String),
    #[error("virtual blocks carry inequivalent multipliers")]
    MixedCohomology,
    #[error("spin {two_j}/2 does not occur in the product decomposition")]
    BadSpinSet { two_j: u32 },
    #[error("relation check failed: {0}")]
    RelationFailed(String),
}

pub type Result<T> = core::result::Result<T, Error>;
