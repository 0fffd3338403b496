use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("precision {0} is below the minimum of 4 digits")]
    PrecisionTooSmall(u32),
    #[error("division by a value that is zero to precision")]
    DivisionByZero,
    #[error("valuation of a value that is zero to precision")]
    ZeroValuation,
    #[error("operand is zero to precision")]
    ZeroOperand,
    #[error("{function} does not converge: requires {condition}")]
    Convergence {
        function: &'static str,
        condition: String,
    },
    #[error("unsupported exponent class: k = {k} has v_{p}(k) = {vk} >= 2")]
    UnsupportedExponent { k: u64, p: u64, vk: u32 },
    #[error("Hensel precondition failed: v(f(a0)) = {fa0}, v(f'(a0)) = {dfa0}, i = {i}")]
    HenselPrecondition { fa0: String, dfa0: String, i: u32 },
    #[error("discriminant is zero to precision")]
    ZeroDiscriminant,
    #[error("singular denominator: {0}")]
    Singular(String),
    #[error("unsupported tree order k = {0}")]
    UnsupportedOrder(u64),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("volume too large: {configs} configurations exceed the cap of {cap}")]
    VolumeTooLarge { configs: String, cap: u64 },
    #[error("insufficient precision: {available} digits available, {needed} needed")]
    InsufficientPrecision { needed: i64, available: i64 },
    #[error("malformed rational {0:?}")]
    MalformedRational(String),
}

pub type Result<T> = std::result::Result<T, Error>;
