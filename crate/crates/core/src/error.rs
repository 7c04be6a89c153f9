use thiserror::Error;

/// Everything that can go wrong while building or comparing series.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("non-generic parameters: {0}")]
    NonGeneric(String),
    #[error("non-unit: constant term is zero")]
    NonUnit,
    #[error("nonzero constant term in exponential argument")]
    NonzeroConstantTerm,
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("zero pivot: cannot factor a Laurent monomial with zero coefficient")]
    ZeroPivot,
    #[error("Laurent residue: net exponent vector {0:?} does not cancel")]
    LaurentResidue(Vec<i64>),
    #[error("inadmissible monomial {0:?} lies outside the expansion cone")]
    InadmissibleMonomial(Vec<i64>),
    #[error("vanishing denominator Nekrasov factor: {0}")]
    VanishingDenominator(String),
    #[error("integrality violation: {0}")]
    Integrality(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
