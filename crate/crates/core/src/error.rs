use thiserror::Error;

/// Crate-wide error type. Domain answers that are not failures
/// (e.g. `NotAPthPower`) are still carried here so callers can match on them.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("element is not a p-th power")]
    NotAPthPower,
    #[error("no expansion algebra implemented for this adjunction kind")]
    UnsupportedTower,
    #[error("radical exponent divisible by p is inseparable")]
    InseparableRadical,
    #[error("cannot adjoin a radical of zero")]
    ZeroRadicand,
    #[error("substitution scale must be nonzero")]
    ZeroScale,
    #[error("values belong to different field contexts")]
    ContextMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero divisor encountered in a tower ring; an adjunction was not a field extension: {0}")]
    ZeroDivisor(String),
    #[error("p-polynomial is not in canonical form: {0}")]
    MalformedForm(String),
    #[error("principal part is outside the supported universal families")]
    UnsupportedFamily,
    #[error("bad preset parameters: {0}")]
    BadParams(String),
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("point does not satisfy the defining equations")]
    NotAMember,
    #[error("empty congruence class in pairing index")]
    BadIndex,
    #[error("denominator is not supported on the declared poles")]
    UnsupportedDenominator,
    #[error("input must vanish at the base point (proper at infinity)")]
    NotProper,
    #[error("pole support polynomials are not pairwise coprime")]
    SupportNotCoprime,
    #[error("a decomposition component does not lie on the target group")]
    ComponentNotOnGroup,
    #[error("pole modulus is a p-th power")]
    PthPowerModulus,
    #[error("undeclared pole in input")]
    UndeclaredPole,
    #[error("p-basis exchange failed to produce a usable scalar")]
    ExchangeFailed,
    #[error("linear system is singular")]
    Singular,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
