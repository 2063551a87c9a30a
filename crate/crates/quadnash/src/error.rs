use thiserror::Error;

/// Crate-wide error type. Analysis verdicts (YES/NO/UNKNOWN) are not errors;
/// these are contract violations, malformed input, or exhausted budgets.
#[derive(Debug, Error)]
pub enum Error {
    #[error("mixed radicands: sqrt({0}) and sqrt({1}) cannot be combined")]
    MixedRadicands(u64, u64),
    #[error("division by zero")]
    DivideByZero,
    #[error("radicand too large to reduce to square-free form")]
    RadicandTooLarge,
    #[error("negative radicand")]
    NegativeRadicand,
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("profile shape does not match game")]
    ShapeMismatch,
    #[error("invalid mixed profile: {0}")]
    InvalidProfile(String),
    #[error("not a solution: equation {0} evaluates to {1}")]
    NotASolution(usize, String),
    #[error("empty coalition: B1 and B2 are both empty")]
    EmptyCoalition,
    #[error("extension variant does not match the source game's construction")]
    BadVariantSource,
    #[error("support enumeration budget exceeded: {0} combinations requested")]
    BudgetExceeded(u128),
    #[error("operation requires a 3-player game, got {0} players")]
    BadPlayerCount(usize),
    #[error("profile induces irrational payoffs; auxiliary game payoffs must be rational")]
    IrrationalPayoff,
    #[error("unknown condition id: {0}")]
    UnknownProblemId(String),
    #[error("verdict unresolved at resolution {0}")]
    Unresolved(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
