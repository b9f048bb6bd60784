use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("class has rank zero, slope undefined")]
    ZeroRank,
    #[error("Chern classes are not integral")]
    NonIntegral,
    #[error("orthogonality conditions do not cut out a line")]
    SingularSystem,
    #[error("solution line lies in the rank-zero locus")]
    LineAtInfinity,
    #[error("lifted class {0} is not numerically exceptional")]
    NonExceptionalLift(String),
    #[error("hom count {0} is not a positive integer")]
    NonPositiveHom(String),
    #[error("invalid foundation: {0}")]
    InvalidFoundation(String),
    #[error("invalid index: {0}")]
    InvalidIndex(String),
    #[error("dot operator pole: 3 + alpha - beta = 0")]
    PoleInDot,
    #[error("character is not integral: {0}")]
    NonIntegralCharacter(String),
    #[error("invalid character: {0}")]
    InvalidCharacter(String),
    #[error("parse error: {0}")]
    Parse(String),
}
