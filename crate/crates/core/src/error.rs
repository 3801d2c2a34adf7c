use thiserror::Error;

pub type Result<T> = std::result::Result<T, AkError>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum AkError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("invalid diagram: {0}")]
    Invalid(String),

    #[error("arc {0} not found")]
    ArcNotFound(u32),

    #[error("crossing {0} not found")]
    CrossingNotFound(usize),

    #[error("component index {0} out of range")]
    ComponentOutOfRange(usize),

    #[error("move site does not match {move_name} pattern: {detail}")]
    SiteMismatch { move_name: String, detail: String },

    #[error("band route error: {0}")]
    BandRoute(String),

    #[error("invariant not defined here: {0}")]
    Unsupported(String),

    #[error("resource budget exceeded ({0} skein nodes)")]
    BudgetExceeded(u64),

    #[error("rule registration error: {0}")]
    RuleRegistration(String),
}

impl AkError {
    pub fn site(move_name: &str, detail: impl Into<String>) -> Self {
        AkError::SiteMismatch {
            move_name: move_name.to_string(),
            detail: detail.into(),
        }
    }
}
