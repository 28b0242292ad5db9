use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("nonzero element required")]
    ZeroElement,
    #[error("cubes not index 3 in F_{{p^2}}^x for p = {0}")]
    CubesNotIndexThree(u64),
    #[error("{0} is not a quadratic non-residue mod {1}")]
    NotNonResidue(u64, u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("singular matrix over F_{0}")]
    SingularMatrix(u64),
    #[error("p outside family: {0} (need p >= 11, p = 2 or 5 mod 9)")]
    OutsideFamily(u64),
    #[error("excluded characteristic: {ell} divides p(p^2-1) for p = {p}")]
    ExcludedCharacteristic { p: u64, ell: u64 },
    #[error("invalid discriminant -{0}")]
    InvalidDiscriminant(u64),
    #[error("tau below the fundamental-domain height bound")]
    TauTooLow,
    #[error("insufficient precision for H_(-{d}) at {bits} bits (residual {residual})")]
    InsufficientPrecision { d: u64, bits: u64, residual: String },
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial must have positive degree")]
    ConstantPolynomial,
    #[error("internal consistency: {0}")]
    Internal(String),
    #[error("consistency violated: {0}")]
    Consistency(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("family hypotheses violated: {0}")]
    Family(String),
    #[error("cache: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
