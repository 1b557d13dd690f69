use thiserror::Error;

/// Errors raised by the library. The CLI maps variants onto exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be positive")]
    ZeroDegree,
    #[error("field of order {0} exceeds the supported range")]
    FieldTooLarge(u128),
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("operation undefined on a constant polynomial")]
    ConstantPolynomial,
    #[error("operands do not match: {0}")]
    Mismatch(String),
    #[error("t = {t} does not divide q - 1 = {qm1}")]
    BadKummerDegree { t: u64, qm1: u64 },
    #[error("radicand is a t-th power: the extension is trivial")]
    TrivialExtension,
    #[error("F_(p^{u}) is not contained in F_q (l = {l})")]
    BadFrobeniusPower { u: u32, l: u32 },
    #[error("cyclic factor list required when u > 1 and v > 1")]
    MissingFactors,
    #[error("inconsistent cyclic factor list: {0}")]
    InconsistentFactors(String),
    #[error("tame part violates gcd(t, p(q-1)) = 1: {0}")]
    TameDegree(String),
    #[error("{what}: size {needed} exceeds cap {cap}")]
    CapExceeded { what: &'static str, needed: u128, cap: u128 },
    #[error("invalid input: {0}")]
    Schema(String),
    #[error("consistency failure: {0}")]
    Consistency(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
